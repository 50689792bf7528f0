#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgcal/cci.hpp"
#include "kgcal/metrics.hpp"
#include "kgcal/score_matrix.hpp"

namespace kgcal {

/// Per-question trace of one pipeline run.
struct PredictionRecord {
  std::string question_id;
  std::optional<std::string> a0, a1, a2;
  CandidateSet candidates;
  ScoreMatrix matrix;
  std::vector<CciScore> scores;
  std::string chosen;
  double confidence = 0;
  bool correct = false;
  long prompt_tokens = 0;
  long completion_tokens = 0;
  bool fallback_used = false;
  bool tie_broken = false;
  std::string error;  // empty when the question completed normally

  Outcome outcome() const { return {confidence, correct}; }
  long total_tokens() const { return prompt_tokens + completion_tokens; }
};

class RecordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One JSON object, no trailing newline.
std::string record_to_line(const PredictionRecord& r);
PredictionRecord record_from_line(const std::string& line);

/// Throws RecordError("line N: ...") on malformed lines.
std::vector<PredictionRecord> read_records(std::istream& in);

CalibrationReport report_from_records(const std::vector<PredictionRecord>& records, int m);

}  // namespace kgcal
