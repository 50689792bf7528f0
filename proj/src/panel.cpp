#include "kgcal/panel.hpp"

#include <sstream>

#include "json.hpp"

namespace kgcal {
namespace {

using nlohmann::json;

std::string fmt(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

}  // namespace

std::vector<Violation> validate_matrix(const ScoreMatrix& m) {
  std::vector<Violation> out;
  const auto rows = m.rows();
  const auto cols = m.cols();
  if (rows < 1 || rows > 3 || cols < 1 || cols > 3)
    out.push_back({"dimension", std::to_string(rows) + "x" + std::to_string(cols) +
                                    " outside 1..3 x 1..3"});
  if (static_cast<Eigen::Index>(m.interventions.size()) != rows)
    out.push_back({"dimension", "row labels do not match row count"});
  if (static_cast<Eigen::Index>(m.candidates.size()) != cols)
    out.push_back({"dimension", "candidate count does not match column count"});
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double v = m.values(r, c);
      if (!(v >= 0.0 && v <= 1.0))
        out.push_back({"range", "value " + fmt(v) + " at (" + std::to_string(r) + "," +
                                    std::to_string(c) + ")"});
    }
    const double sum = m.values.row(r).sum();
    const double limit = 1.0 + 0.01 * static_cast<double>(cols) + 1e-9;
    if (sum > limit)
      out.push_back({"row sum", "row " + std::to_string(r) + " sums to " + fmt(sum)});
  }
  return out;
}

ScoreMatrix score_deterministic(const CandidateSet& cs, InterventionSet active) {
  if (active.empty()) throw std::invalid_argument("score_deterministic: no active interventions");
  const auto freq = frequency_vector(cs, static_cast<int>(active.size()));
  ScoreMatrix m;
  m.interventions = active.ordered();
  m.candidates = cs;
  m.values.resize(static_cast<Eigen::Index>(active.size()), static_cast<Eigen::Index>(cs.size()));
  for (Eigen::Index r = 0; r < m.values.rows(); ++r)
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) m.values(r, c) = freq[c];
  return m;
}

ScoreMatrix parse_panel_reply(const std::string& reply, const CandidateSet& local,
                              InterventionSet active) {
  // The reply should be one line; tolerate surrounding blank lines.
  std::string text = reply;
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    std::istringstream lines(reply);
    std::string line;
    while (std::getline(lines, line))
      if (line.find_first_not_of(" \t\r") != std::string::npos) break;
    doc = json::parse(line, nullptr, false);
  }
  if (doc.is_discarded() || !doc.is_object()) throw PanelParseError("reply is not a JSON object");

  std::size_t expected_keys = 1 + active.size();
  if (!doc.contains("answers") || doc.size() != expected_keys)
    throw PanelParseError("wrong key set");
  for (auto id : active.ordered())
    if (!doc.contains(key_of(id))) throw PanelParseError("wrong key set: missing " + key_of(id));

  const json& answers = doc["answers"];
  if (!answers.is_array() || answers.empty() || answers.size() > 3)
    throw PanelParseError("\"answers\" must be a list of 1..3 strings");

  ScoreMatrix m;
  m.interventions = active.ordered();
  std::vector<int> used;
  for (const auto& a : answers) {
    if (!a.is_string()) throw PanelParseError("non-string answer");
    const int idx = local.find(a.get<std::string>());
    if (idx < 0) throw PanelParseError("answer '" + a.get<std::string>() + "' matches no candidate");
    if (std::find(used.begin(), used.end(), idx) != used.end())
      throw PanelParseError("duplicate answer '" + a.get<std::string>() + "'");
    used.push_back(idx);
    m.candidates.candidates.push_back(local.candidates[static_cast<std::size_t>(idx)]);
  }

  const auto cols = static_cast<Eigen::Index>(answers.size());
  m.values.resize(static_cast<Eigen::Index>(active.size()), cols);
  Eigen::Index r = 0;
  for (auto id : active.ordered()) {
    const json& row = doc[key_of(id)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw PanelParseError(key_of(id) + " length does not match answers");
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!row[static_cast<std::size_t>(c)].is_number())
        throw PanelParseError(key_of(id) + " holds a non-number");
      m.values(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    ++r;
  }

  const auto violations = validate_matrix(m);
  if (!violations.empty())
    throw PanelParseError(violations.front().kind + ": " + violations.front().detail);
  return m;
}

PanelOutcome score_via_llm(LlmClient& client, const std::array<std::string, 3>& answers,
                           InterventionSet active, const CompletionParams& params) {
  std::map<InterventionId, std::string> by_id;
  for (auto id : active.ordered()) by_id[id] = answers[index_of(id)];
  const CandidateSet local = merge_answers(by_id);
  PanelOutcome out;
  out.completion = client.complete(render_panel(answers, active), params);
  out.matrix = parse_panel_reply(out.completion.text, local, active);
  return out;
}

}  // namespace kgcal
