#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kgcal/intervention.hpp"

namespace kgcal {

/// One merged answer: every surface form whose match key coincides.
struct Candidate {
  std::string canonical;
  std::vector<std::string> surface_forms;
  int count = 0;
  InterventionSet sources;
};

/// Unique answers in first-appearance order over (T0, T1, T2).
struct CandidateSet {
  std::vector<Candidate> candidates;

  std::size_t size() const { return candidates.size(); }
  bool empty() const { return candidates.empty(); }
  int total_count() const;
  /// Column index of the candidate whose key equals normalize(answer), or -1.
  int find(std::string_view answer) const;
};

/// Match key: ASCII case-fold, punctuation removed, whitespace collapsed,
/// then a conservative per-token singularization:
///   "...sses" -> "...ss"; "...xes"/"...zes"/"...ches"/"...shes" -> drop "es"
///   (stem >= 3 chars); otherwise a trailing "s" not preceded by "s" is
///   dropped (stem >= 2 chars). The result is a fixed point of normalize.
std::string normalize(std::string_view s);

/// Title case of the first surface form: each whitespace token gets its first
/// alphabetic character upper-cased and everything else lower-cased.
std::string canonical_form(const std::vector<std::string>& surface_forms);

/// Groups answers by match key. Empty answers are skipped; throws
/// std::invalid_argument("no candidates") if nothing remains.
CandidateSet merge_answers(const std::map<InterventionId, std::string>& answers);

/// round(count / divisor, 2) with half-up rounding, per candidate.
std::vector<double> frequency_vector(const CandidateSet& cs, int divisor);

}  // namespace kgcal
