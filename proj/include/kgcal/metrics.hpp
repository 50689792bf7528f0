#pragma once

#include <span>
#include <string>
#include <vector>

namespace kgcal {

/// (confidence, correctness) pair: the only input calibration metrics need.
struct Outcome {
  double confidence = 0;
  bool correct = false;
};

struct ReliabilityBin {
  double lower = 0;
  double upper = 0;
  long count = 0;
  double mean_confidence = 0;
  double accuracy = 0;
};

struct CalibrationReport {
  long n = 0;
  int bins_m = 10;
  double accuracy = 0;
  double ece = 0;
  double brier = 0;
  double selective_auc = 0;
  std::vector<ReliabilityBin> bins;
  long total_tokens = 0;
  long correct_count = 0;
  double tokens_per_correct = 0;
  bool tokens_per_correct_defined = false;
};

/// normalize(chosen) equals normalize(g) for some gold g.
bool exact_match(const std::string& chosen, const std::vector<std::string>& golds);

/// 1-based bin of a confidence: (lower, upper] with 0 in bin 1.
int bin_of(double confidence, int m);

double accuracy(std::span<const Outcome> outcomes);
double ece(std::span<const Outcome> outcomes, int m = 10);
double brier(std::span<const Outcome> outcomes);
/// Mean accuracy over the top-k most confident outcomes, k = 1..n.
double selective_auc(std::span<const Outcome> outcomes);
std::vector<ReliabilityBin> reliability_bins(std::span<const Outcome> outcomes, int m = 10);
/// ECE recomputed from bins alone.
double ece_from_bins(const std::vector<ReliabilityBin>& bins);

CalibrationReport make_report(std::span<const Outcome> outcomes, std::span<const long> tokens,
                              int m = 10);

/// Pretty JSON document (stable key order).
std::string report_to_json(const CalibrationReport& r);
/// lower,upper,count,mean_confidence,accuracy
std::string bins_to_csv(const std::vector<ReliabilityBin>& bins);

}  // namespace kgcal
