#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "kgcal/llm_client.hpp"
#include "kgcal/score_matrix.hpp"

namespace kgcal {

class PanelParseError : public std::runtime_error {
 public:
  explicit PanelParseError(const std::string& detail)
      : std::runtime_error("panel parse failure: " + detail) {}
};

/// Every row is frequency_vector(cs, |active|).
ScoreMatrix score_deterministic(const CandidateSet& cs, InterventionSet active);

/// Parses a one-line panel reply {"answers": [...], "t_0": [...], ...}.
/// Reply answers are mapped onto `local` by match key and define the column
/// order. Throws PanelParseError.
ScoreMatrix parse_panel_reply(const std::string& reply, const CandidateSet& local,
                              InterventionSet active);

struct PanelOutcome {
  ScoreMatrix matrix;
  CompletionResult completion;
};

/// Renders the panel prompt, completes it and parses the reply. Transport
/// errors propagate as LlmError; reply problems as PanelParseError.
PanelOutcome score_via_llm(LlmClient& client, const std::array<std::string, 3>& answers,
                           InterventionSet active, const CompletionParams& params);

}  // namespace kgcal
