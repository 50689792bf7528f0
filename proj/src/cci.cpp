#include "kgcal/cci.hpp"

namespace kgcal {

Selection select(const ScoreMatrix& m) {
  auto violations = validate_matrix(m);
  if (!violations.empty()) {
    const std::string what = "invalid score matrix: " + violations.front().kind;
    throw InvalidMatrix(what, std::move(violations));
  }

  Selection s;
  const Eigen::Index n = m.cols();
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto column = m.values.col(j);
    CciScore score;
    score.candidate = m.candidates.candidates[static_cast<std::size_t>(j)].canonical;
    score.mean_ce = ce_mean(column);
    score.ce_var = ce_var(column);
    score.cci = cci(score.mean_ce, score.ce_var);
    s.scores.push_back(std::move(score));
  }

  double best = s.scores.front().cci;
  for (const auto& sc : s.scores) best = std::max(best, sc.cci);
  std::vector<int> tied;
  for (int j = 0; j < static_cast<int>(n); ++j)
    if (best - s.scores[static_cast<std::size_t>(j)].cci <= kTieTolerance) tied.push_back(j);

  auto candidate = [&](int j) -> const Candidate& {
    return m.candidates.candidates[static_cast<std::size_t>(j)];
  };
  if (tied.size() > 1) {
    s.tie_broken = true;
    std::vector<int> from_t0;
    for (int j : tied)
      if (candidate(j).sources.contains(InterventionId::T0)) from_t0.push_back(j);
    if (!from_t0.empty()) tied = from_t0;
    int max_count = 0;
    for (int j : tied) max_count = std::max(max_count, candidate(j).count);
    std::erase_if(tied, [&](int j) { return candidate(j).count != max_count; });
  }
  s.chosen_index = tied.front();
  s.chosen = candidate(s.chosen_index).canonical;
  s.confidence = std::clamp(s.scores[static_cast<std::size_t>(s.chosen_index)].cci, 0.0, 1.0);
  return s;
}

}  // namespace kgcal
