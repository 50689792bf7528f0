#include <random>
#include <sstream>

#include "case_studies.hpp"
#include "doctest.h"
#include "kgcal/panel.hpp"
#include "kgcal/records.hpp"

using namespace kgcal;
using I = InterventionId;

namespace {

PredictionRecord capital_record() {
  PredictionRecord r;
  r.question_id = "cs1";
  r.a0 = fixture::kCapitalA0;
  r.a1 = fixture::kCapitalA1;
  r.a2 = fixture::kCapitalA2;
  r.candidates = merge_answers({{I::T0, *r.a0}, {I::T1, *r.a1}, {I::T2, *r.a2}});
  r.matrix = parse_panel_reply(fixture::kCapitalPanelReply, r.candidates, InterventionSet::all());
  const auto s = select(r.matrix);
  r.scores = s.scores;
  r.chosen = s.chosen;
  r.confidence = s.confidence;
  r.correct = true;
  r.prompt_tokens = 321;
  r.completion_tokens = 17;
  return r;
}

}  // namespace

TEST_CASE("records survive a serialization round trip") {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    PredictionRecord r = capital_record();
    r.confidence = std::uniform_real_distribution<double>(0, 1)(rng);
    r.a2.reset();
    r.error = trial % 3 == 0 ? "no linked entity" : "";
    r.fallback_used = trial % 2 == 0;
    const auto line = record_to_line(r);
    CHECK(line.find('\n') == std::string::npos);
    const auto back = record_from_line(line);
    CHECK(back.confidence == r.confidence);
    CHECK_FALSE(back.a2.has_value());
    CHECK(back.matrix.values == r.matrix.values);
    CHECK(back.matrix.interventions == r.matrix.interventions);
    CHECK(back.candidates.candidates[1].sources == r.candidates.candidates[1].sources);
    CHECK(record_to_line(back) == line);
  }
}

TEST_CASE("read_records reports the failing line") {
  const auto line = record_to_line(capital_record());
  std::istringstream good(line + "\n" + line + "\n");
  CHECK(read_records(good).size() == 2);

  std::istringstream truncated(line + "\n" + line.substr(0, line.size() / 2));
  CHECK_THROWS_WITH(read_records(truncated), doctest::Contains("line 2"));

  auto bad = capital_record();
  bad.confidence = 1.5;
  std::istringstream out_of_range(record_to_line(bad));
  CHECK_THROWS_AS(read_records(out_of_range), RecordError);
}

TEST_CASE("report_from_records") {
  auto a = capital_record();
  auto b = capital_record();
  b.confidence = 0.67;
  const auto r = report_from_records({a, b}, 10);
  CHECK(r.accuracy == 1.0);
  CHECK(r.total_tokens == 2 * 338);
}
