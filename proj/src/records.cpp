#include "kgcal/records.hpp"

#include "json.hpp"

namespace kgcal {
namespace {

using nlohmann::ordered_json;

ordered_json candidates_to_json(const CandidateSet& cs) {
  ordered_json out = ordered_json::array();
  for (const auto& c : cs.candidates) {
    ordered_json sources = ordered_json::array();
    for (auto id : c.sources.ordered()) sources.push_back(name_of(id));
    out.push_back({{"canonical", c.canonical},
                   {"surface_forms", c.surface_forms},
                   {"count", c.count},
                   {"sources", std::move(sources)}});
  }
  return out;
}

CandidateSet candidates_from_json(const ordered_json& j) {
  CandidateSet cs;
  for (const auto& c : j) {
    Candidate cand;
    cand.canonical = c.at("canonical").get<std::string>();
    cand.surface_forms = c.at("surface_forms").get<std::vector<std::string>>();
    cand.count = c.at("count").get<int>();
    for (const auto& s : c.at("sources")) {
      auto id = parse_intervention(s.get<std::string>());
      if (!id) throw RecordError("unknown intervention " + s.get<std::string>());
      cand.sources.insert(*id);
    }
    cs.candidates.push_back(std::move(cand));
  }
  return cs;
}

ordered_json optional_string(const std::optional<std::string>& s) {
  return s ? ordered_json(*s) : ordered_json(nullptr);
}

std::optional<std::string> optional_string(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::string>();
}

}  // namespace

std::string record_to_line(const PredictionRecord& r) {
  ordered_json rows = ordered_json::array();
  for (auto id : r.matrix.interventions) rows.push_back(name_of(id));
  ordered_json values = ordered_json::array();
  for (Eigen::Index i = 0; i < r.matrix.values.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < r.matrix.values.cols(); ++j) row.push_back(r.matrix.values(i, j));
    values.push_back(std::move(row));
  }
  ordered_json scores = ordered_json::array();
  for (const auto& s : r.scores)
    scores.push_back(
        {{"candidate", s.candidate}, {"mean_ce", s.mean_ce}, {"ce_var", s.ce_var}, {"cci", s.cci}});

  ordered_json doc;
  doc["question_id"] = r.question_id;
  doc["a0"] = optional_string(r.a0);
  doc["a1"] = optional_string(r.a1);
  doc["a2"] = optional_string(r.a2);
  doc["candidates"] = candidates_to_json(r.candidates);
  doc["matrix"] = {{"rows", std::move(rows)},
                   {"columns", candidates_to_json(r.matrix.candidates)},
                   {"values", std::move(values)}};
  doc["scores"] = std::move(scores);
  doc["chosen"] = r.chosen;
  doc["confidence"] = r.confidence;
  doc["correct"] = r.correct;
  doc["prompt_tokens"] = r.prompt_tokens;
  doc["completion_tokens"] = r.completion_tokens;
  doc["fallback_used"] = r.fallback_used;
  doc["tie_broken"] = r.tie_broken;
  doc["error"] = r.error;
  return doc.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

PredictionRecord record_from_line(const std::string& line) {
  const ordered_json doc = ordered_json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw RecordError("not a JSON object");
  try {
    PredictionRecord r;
    r.question_id = doc.at("question_id").get<std::string>();
    r.a0 = optional_string(doc.at("a0"));
    r.a1 = optional_string(doc.at("a1"));
    r.a2 = optional_string(doc.at("a2"));
    r.candidates = candidates_from_json(doc.at("candidates"));
    const auto& matrix = doc.at("matrix");
    for (const auto& name : matrix.at("rows")) {
      auto id = parse_intervention(name.get<std::string>());
      if (!id) throw RecordError("unknown intervention " + name.get<std::string>());
      r.matrix.interventions.push_back(*id);
    }
    r.matrix.candidates = candidates_from_json(matrix.at("columns"));
    const auto& values = matrix.at("values");
    const auto rows = static_cast<Eigen::Index>(values.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(values[0].size());
    if (rows > 3 || cols > 3) throw RecordError("matrix larger than 3x3");
    r.matrix.values.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const auto& row = values[static_cast<std::size_t>(i)];
      if (static_cast<Eigen::Index>(row.size()) != cols) throw RecordError("ragged matrix");
      for (Eigen::Index j = 0; j < cols; ++j) r.matrix.values(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
    for (const auto& s : doc.at("scores"))
      r.scores.push_back({s.at("candidate").get<std::string>(), s.at("mean_ce").get<double>(),
                          s.at("ce_var").get<double>(), s.at("cci").get<double>()});
    r.chosen = doc.at("chosen").get<std::string>();
    r.confidence = doc.at("confidence").get<double>();
    r.correct = doc.at("correct").get<bool>();
    r.prompt_tokens = doc.at("prompt_tokens").get<long>();
    r.completion_tokens = doc.at("completion_tokens").get<long>();
    r.fallback_used = doc.at("fallback_used").get<bool>();
    r.tie_broken = doc.at("tie_broken").get<bool>();
    r.error = doc.at("error").get<std::string>();
    if (!(r.confidence >= 0.0 && r.confidence <= 1.0))
      throw RecordError("confidence outside [0,1]");
    return r;
  } catch (const ordered_json::exception& e) {
    throw RecordError(e.what());
  }
}

std::vector<PredictionRecord> read_records(std::istream& in) {
  std::vector<PredictionRecord> out;
  std::string line;
  for (long line_no = 1; std::getline(in, line); ++line_no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_line(line));
    } catch (const RecordError& e) {
      throw RecordError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

CalibrationReport report_from_records(const std::vector<PredictionRecord>& records, int m) {
  std::vector<Outcome> outcomes;
  std::vector<long> tokens;
  outcomes.reserve(records.size());
  tokens.reserve(records.size());
  for (const auto& r : records) {
    outcomes.push_back(r.outcome());
    tokens.push_back(r.total_tokens());
  }
  return make_report(outcomes, tokens, m);
}

}  // namespace kgcal
