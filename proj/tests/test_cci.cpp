#include <random>

#include "case_studies.hpp"
#include "doctest.h"
#include "kgcal/cci.hpp"
#include "kgcal/panel.hpp"

using namespace kgcal;
using I = InterventionId;

namespace {

ScoreColumn<double> col(std::initializer_list<double> v) {
  ScoreColumn<double> c(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) c(i++) = x;
  return c;
}

ScoreMatrix capital_matrix() {
  const auto local = merge_answers({{I::T0, fixture::kCapitalA0}, {I::T1, fixture::kCapitalA1}, {I::T2, fixture::kCapitalA2}});
  return parse_panel_reply(fixture::kCapitalPanelReply, local, InterventionSet::all());
}

// Modal answer with the documented tie-break, computed by counting.
std::string modal_answer(const std::array<std::string, 3>& answers) {
  std::vector<std::pair<std::string, int>> counts;  // first-appearance order
  for (const auto& a : answers) {
    const auto key = normalize(a);
    auto it = std::find_if(counts.begin(), counts.end(), [&](auto& p) { return p.first == key; });
    if (it == counts.end()) counts.emplace_back(key, 1);
    else ++it->second;
  }
  int best = 0;
  for (const auto& [k, c] : counts) best = std::max(best, c);
  std::vector<std::string> top;
  for (const auto& [k, c] : counts)
    if (c == best) top.push_back(k);
  if (top.size() == 1) return top.front();
  const auto t0 = normalize(answers[0]);
  if (std::find(top.begin(), top.end(), t0) != top.end()) return t0;
  return top.front();
}

}  // namespace

TEST_CASE("ce_var") {
  CHECK(ce_var(col({0.62, 0.68, 0.80})) == doctest::Approx(0.18).epsilon(1e-12));
  CHECK(ce_var(col({0.67, 0.67, 0.67})) == 0.0);
  CHECK(ce_var(col({0.5})) == 0.0);
  CHECK_THROWS(ce_var(ScoreColumn<double>()));
}

TEST_CASE("ce_mean") {
  CHECK(std::abs(ce_mean(col({0.62, 0.68, 0.80})) - 0.70) < 1e-12);
  CHECK(std::abs(ce_mean(col({0.33, 0.33, 0.33})) - 0.33) < 1e-12);
  CHECK(ce_mean(col({1.0})) == 1.0);
  CHECK_THROWS(ce_mean(ScoreColumn<double>()));
}

TEST_CASE("cci") {
  CHECK(std::abs(cci(0.70, 0.18) - 0.574) < 1e-12);
  CHECK(std::abs(cci(0.67, 0.0) - 0.67) < 1e-12);
  for (double x : {0.0, 0.3, 1.0}) CHECK(cci(x, 1.0) == 0.0);
  // Works for any Eigen scalar.
  CHECK(cci(0.5f, 0.5f) == 0.25f);
  ScoreTable<float> t(2, 2);
  t << 0.5f, 0.5f, 0.5f, 0.5f;
  CHECK(cci_row(t)(1) == 0.5f);
}

TEST_CASE("select") {
  SUBCASE("case study I") {
    const auto s = select(capital_matrix());
    CHECK(s.chosen == "Buenos Aires");
    CHECK(std::abs(s.confidence - 0.574) < 1e-12);
    REQUIRE(s.scores.size() == 2);
    CHECK(std::abs(s.scores[1].cci - 0.246) < 1e-12);
    CHECK_FALSE(s.tie_broken);
  }
  SUBCASE("case study II") {
    const auto cs = merge_answers({{I::T0, fixture::kTiresiaA0}, {I::T1, fixture::kTiresiaA1}, {I::T2, fixture::kTiresiaA2}});
    const auto s = select(score_deterministic(cs, InterventionSet::all()));
    CHECK(s.chosen == "Bertrand Bonello");
    CHECK(std::abs(s.confidence - 0.67) < 1e-12);
  }
  SUBCASE("tie goes to the T0 answer") {
    ScoreMatrix m;
    m.interventions = {I::T0, I::T1, I::T2};
    m.candidates.candidates = {{"A", {"a"}, 1, {I::T1}}, {"B", {"b"}, 1, {I::T0}}};
    m.values.resize(3, 2);
    m.values.setConstant(0.5);
    const auto s = select(m);
    CHECK(s.chosen == "B");
    CHECK(s.tie_broken);
  }
  SUBCASE("tie without T0 goes to the higher count, then leftmost") {
    ScoreMatrix m;
    m.interventions = {I::T0, I::T1, I::T2};
    m.candidates.candidates = {{"A", {"a"}, 1, {I::T1}}, {"B", {"b", "b"}, 2, {I::T2}}, {"C", {"c"}, 1, {I::T0}}};
    m.values.resize(3, 3);
    m.values << 0.4, 0.4, 0.1, 0.4, 0.4, 0.1, 0.4, 0.4, 0.1;
    CHECK(select(m).chosen == "B");
    m.candidates.candidates[1].count = 1;
    CHECK(select(m).chosen == "A");
  }
  SUBCASE("invalid matrices are rejected") {
    auto m = capital_matrix();
    m.values(0, 0) = 2.0;
    CHECK_THROWS_AS(select(m), InvalidMatrix);
  }
}

TEST_CASE("shift invariance: adding a constant moves the mean and keeps the spread") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int trial = 0; trial < 500; ++trial) {
    ScoreTable<double> t(3, 3);
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = u(rng);
    const double delta = u(rng);
    const ScoreTable<double> shifted = t.array() + delta;
    for (Eigen::Index c = 0; c < 3; ++c) {
      CHECK(std::abs(ce_var(shifted.col(c)) - ce_var(t.col(c))) < 1e-12);
      CHECK(std::abs(ce_mean(shifted.col(c)) - ce_mean(t.col(c)) - delta) < 1e-12);
    }
  }
}

TEST_CASE("column permutation permutes scores and the choice") {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> cents(0, 33);
  for (int trial = 0; trial < 500; ++trial) {
    ScoreMatrix m;
    m.interventions = {I::T0, I::T1, I::T2};
    m.candidates.candidates = {{"A", {"a"}, 1, {I::T0}}, {"B", {"b"}, 1, {I::T1}}, {"C", {"c"}, 1, {I::T2}}};
    m.values.resize(3, 3);
    for (Eigen::Index i = 0; i < m.values.size(); ++i) m.values.data()[i] = cents(rng) / 100.0;
    const auto base = select(m);

    const std::array<int, 3> perm{2, 0, 1};
    ScoreMatrix p = m;
    for (int c = 0; c < 3; ++c) {
      p.values.col(c) = m.values.col(perm[c]);
      p.candidates.candidates[static_cast<std::size_t>(c)] = m.candidates.candidates[static_cast<std::size_t>(perm[c])];
    }
    const auto permuted = select(p);
    for (int c = 0; c < 3; ++c)
      CHECK(permuted.scores[static_cast<std::size_t>(c)].cci == base.scores[static_cast<std::size_t>(perm[c])].cci);
    if (!base.tie_broken) CHECK(permuted.chosen == base.chosen);
    CHECK(permuted.confidence == base.confidence);
    CHECK(base.confidence >= 0.0);
    CHECK(base.confidence <= 1.0);
  }
}

TEST_CASE("deterministic panel selects the modal answer") {
  const std::array<std::string, 3> alphabet{"x", "y", "z"};
  for (const auto& a : alphabet)
    for (const auto& b : alphabet)
      for (const auto& c : alphabet) {
        const auto cs = merge_answers({{I::T0, a}, {I::T1, b}, {I::T2, c}});
        const auto s = select(score_deterministic(cs, InterventionSet::all()));
        CHECK(normalize(s.chosen) == modal_answer({a, b, c}));
      }
}
