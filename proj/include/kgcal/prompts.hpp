#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kgcal/intervention.hpp"

namespace kgcal {

struct Question;

enum class Role { System, User, Assistant };

std::string role_name(Role r);
Role parse_role(std::string_view name);

struct Turn {
  Role role;
  std::string content;

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct Conversation {
  std::vector<Turn> turns;

  const Turn& back() const { return turns.back(); }
  /// Content of the last user turn, or empty.
  std::string_view last_user_content() const;
  friend bool operator==(const Conversation&, const Conversation&) = default;
};

/// Non-empty, optional leading system turn, then strictly alternating
/// user/assistant starting with user.
bool is_valid(const Conversation& c);

class PromptError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace prompt_text {

extern const std::string_view kInitial;
extern const std::string_view kPathQuality;
extern const std::string_view kReasoningReliability;
/// Panel instructions with placeholders {n}, {candidates}, {answers_comma},
/// {answers_slash} and {interventions}.
extern const std::string_view kPanelTemplate;
extern const std::string_view kPanelFormatHint;

}  // namespace prompt_text

/// Which stored prompt opens the given user message (used by mocks), or
/// nullopt for the panel / anything else.
std::optional<InterventionId> detect_intervention(std::string_view user_content);
bool is_panel_prompt(std::string_view user_content);

/// Single user turn: t0 instructions, "Contexts:" block, "Question:" line.
/// A non-empty system preamble is prepended as a system turn.
Conversation render_initial(const Question& question, std::string_view contexts,
                            std::string_view system_preamble = {});

/// base + assistant "{a0}" + user turn with the T1 or T2 instructions.
Conversation render_counterfactual(const Conversation& base, std::string_view a0,
                                   InterventionId which);

/// answers[i] is the answer produced under intervention i; only the entries
/// of `active` are read.
std::string render_panel_text(const std::array<std::string, 3>& answers, InterventionSet active);
Conversation render_panel(const std::array<std::string, 3>& answers, InterventionSet active);

/// First non-empty line; the inside of its first {...} span if present.
/// Throws PromptError("empty answer").
std::string parse_answer_line(std::string_view raw);

/// Markdown catalog of every stored prompt with its SHA-256.
std::string prompt_catalog();

}  // namespace kgcal
