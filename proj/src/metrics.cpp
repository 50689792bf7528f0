#include "kgcal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "json.hpp"
#include "kgcal/canonicalize.hpp"

namespace kgcal {
namespace {

void require_nonempty(std::span<const Outcome> outcomes, const char* what) {
  if (outcomes.empty()) throw std::invalid_argument(std::string(what) + ": no records");
}

void require_bins(int m) {
  if (m < 1) throw std::invalid_argument("bin count must be at least 1");
}

}  // namespace

bool exact_match(const std::string& chosen, const std::vector<std::string>& golds) {
  const std::string key = normalize(chosen);
  if (key.empty()) return false;
  return std::any_of(golds.begin(), golds.end(),
                     [&](const std::string& g) { return normalize(g) == key; });
}

int bin_of(double confidence, int m) {
  require_bins(m);
  const double c = std::clamp(confidence, 0.0, 1.0);
  int k = static_cast<int>(std::ceil(c * m));
  // Snap to the exact (k-1)/m < c <= k/m boundaries that c*m may have missed.
  if (k > 1 && c <= static_cast<double>(k - 1) / m) --k;
  if (k < m && c > static_cast<double>(k) / m) ++k;
  return std::clamp(k, 1, m);
}

double accuracy(std::span<const Outcome> outcomes) {
  require_nonempty(outcomes, "accuracy");
  const auto hits = std::count_if(outcomes.begin(), outcomes.end(),
                                  [](const Outcome& o) { return o.correct; });
  return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

std::vector<ReliabilityBin> reliability_bins(std::span<const Outcome> outcomes, int m) {
  require_bins(m);
  std::vector<ReliabilityBin> bins(static_cast<std::size_t>(m));
  std::vector<double> conf_sum(bins.size(), 0.0);
  std::vector<long> hits(bins.size(), 0);
  for (std::size_t b = 0; b < bins.size(); ++b) {
    bins[b].lower = static_cast<double>(b) / m;
    bins[b].upper = static_cast<double>(b + 1) / m;
  }
  for (const auto& o : outcomes) {
    const auto b = static_cast<std::size_t>(bin_of(o.confidence, m) - 1);
    bins[b].count += 1;
    conf_sum[b] += o.confidence;
    hits[b] += o.correct ? 1 : 0;
  }
  for (std::size_t b = 0; b < bins.size(); ++b) {
    if (bins[b].count == 0) continue;
    bins[b].mean_confidence = conf_sum[b] / static_cast<double>(bins[b].count);
    bins[b].accuracy = static_cast<double>(hits[b]) / static_cast<double>(bins[b].count);
  }
  return bins;
}

double ece_from_bins(const std::vector<ReliabilityBin>& bins) {
  long n = 0;
  for (const auto& b : bins) n += b.count;
  if (n == 0) return 0.0;
  double total = 0.0;
  for (const auto& b : bins)
    if (b.count > 0)
      total += static_cast<double>(b.count) / static_cast<double>(n) *
               std::abs(b.accuracy - b.mean_confidence);
  return total;
}

double ece(std::span<const Outcome> outcomes, int m) {
  require_nonempty(outcomes, "ece");
  return ece_from_bins(reliability_bins(outcomes, m));
}

double brier(std::span<const Outcome> outcomes) {
  require_nonempty(outcomes, "brier");
  Eigen::ArrayXd c(static_cast<Eigen::Index>(outcomes.size()));
  Eigen::ArrayXd y(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c(i) = outcomes[static_cast<std::size_t>(i)].confidence;
    y(i) = outcomes[static_cast<std::size_t>(i)].correct ? 1.0 : 0.0;
  }
  return (c - y).square().mean();
}

double selective_auc(std::span<const Outcome> outcomes) {
  require_nonempty(outcomes, "selective_auc");
  std::vector<std::size_t> order(outcomes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return outcomes[a].confidence > outcomes[b].confidence;
  });
  double area = 0.0;
  long hits = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    hits += outcomes[order[k]].correct ? 1 : 0;
    area += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return area / static_cast<double>(order.size());
}

CalibrationReport make_report(std::span<const Outcome> outcomes, std::span<const long> tokens,
                              int m) {
  require_nonempty(outcomes, "report");
  CalibrationReport r;
  r.n = static_cast<long>(outcomes.size());
  r.bins_m = m;
  r.accuracy = accuracy(outcomes);
  r.bins = reliability_bins(outcomes, m);
  r.ece = ece_from_bins(r.bins);
  r.brier = brier(outcomes);
  r.selective_auc = selective_auc(outcomes);
  r.total_tokens = std::accumulate(tokens.begin(), tokens.end(), 0L);
  r.correct_count = std::count_if(outcomes.begin(), outcomes.end(),
                                  [](const Outcome& o) { return o.correct; });
  r.tokens_per_correct_defined = r.correct_count > 0;
  r.tokens_per_correct = r.tokens_per_correct_defined
                             ? static_cast<double>(r.total_tokens) /
                                   static_cast<double>(r.correct_count)
                             : 0.0;
  return r;
}

std::string report_to_json(const CalibrationReport& r) {
  nlohmann::ordered_json doc;
  doc["n"] = r.n;
  doc["bins_m"] = r.bins_m;
  doc["accuracy"] = r.accuracy;
  doc["ece"] = r.ece;
  doc["brier"] = r.brier;
  doc["selective_auc"] = r.selective_auc;
  doc["correct_count"] = r.correct_count;
  doc["total_tokens"] = r.total_tokens;
  doc["tokens_per_correct"] = r.tokens_per_correct;
  doc["tokens_per_correct_defined"] = r.tokens_per_correct_defined;
  auto& bins = doc["bins"] = nlohmann::ordered_json::array();
  for (const auto& b : r.bins)
    bins.push_back({{"lower", b.lower},
                    {"upper", b.upper},
                    {"count", b.count},
                    {"mean_confidence", b.mean_confidence},
                    {"accuracy", b.accuracy}});
  return doc.dump(2) + "\n";
}

std::string bins_to_csv(const std::vector<ReliabilityBin>& bins) {
  std::ostringstream out;
  out.precision(17);
  out << "lower,upper,count,mean_confidence,accuracy\n";
  for (const auto& b : bins)
    out << b.lower << ',' << b.upper << ',' << b.count << ',' << b.mean_confidence << ','
        << b.accuracy << '\n';
  return out.str();
}

}  // namespace kgcal
