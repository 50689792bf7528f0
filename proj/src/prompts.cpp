#include "kgcal/prompts.hpp"

#include <stdexcept>

#include "kgcal/dataset.hpp"
#include "sha256.hpp"

namespace kgcal {

namespace prompt_text {

const std::string_view kInitial =
    "Use the provided contexts to answer the question. If the contexts are incomplete or weak, "
    "still provide your best possible answer. Output MUST be exactly one line in this format: "
    "{final answer}. Do not include any other text. Examples: {Italian}";

const std::string_view kPathQuality =
    "Assume your previous answer is wrong because the quality of the referred contexts is poor. "
    "Re-select the most relevant parts from the given contexts and regenerate the answer using "
    "one or a few words. Output MUST be exactly one line in this format: {final answer}. Do not "
    "include any other text. Examples: {Italian Languages}";

const std::string_view kReasoningReliability =
    "Assume your previous answer is wrong due to improper use of the retrieved contexts. "
    "Carefully re-check the provided contexts and regenerate the answer using one or a few "
    "words. Output MUST be exactly one line in this format: {final answer}. Do not include any "
    "other text. Examples: {Italian Languages}";

const std::string_view kPanelTemplate =
    "You are given {n} candidate answers for the same query from different prompts: "
    "{candidates}.\n"
    "\n"
    "Task:\n"
    "(1) Build a unified set of UNIQUE answers by merging semantically identical strings "
    "across {answers_comma}.\n"
    "(2) Compute a GLOBAL frequency vector over the unique answers based on how many of "
    "{answers_slash} map to each canonical answer.\n"
    "(3) ASSIGN probabilities for EACH interventions ({interventions}) to be EXACTLY this "
    "global frequency vector normalised by {n} (counts/{n}), after duplicate aggregation and "
    "before rounding.\n"
    "\n"
    "Re-scoring Structure:\n"
    "\n"
    "Merging Rules\n"
    "- Ignore case, whitespace, punctuation, trivial formatting, and plural/singular "
    "differences.\n"
    "- Choose a clean canonical form for answers (e.g., title case).\n"
    "- If multiple inputs ({answers_slash}) map to the same canonical answer, aggregate them by "
    "SUMMING that answer's frequency before normalisation.\n"
    "\n"
    "Probability rules (HARD CONSTRAINTS)\n"
    "- Let count[i] be how many of {{answers_slash}} map to answers[i]. Then for every "
    "intervention T in {{interventions}}, set T[i] = round(count[i]/{n}, 2).\n"
    "- Do NOT output equal probabilities across answers when counts differ.\n"
    "- Each probability ∈ [0.00, 1.00]; sums may be < 1.00 after rounding.\n"
    "- If an intervention has no plausible answers, use zeros. Return EXACTLY one line of "
    "STRICT JSON, no wrapper, no extra text.";

const std::string_view kPanelFormatHint =
    "JSON keys: \"answers\" (list of the unique answers) and, for each intervention, its key "
    "({keys}) mapping to a list of probabilities aligned with \"answers\".";

}  // namespace prompt_text

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

// Replaces "{name}" placeholders in order; "{{name}}" leaves "{value}".
std::string substitute(std::string_view tmpl,
                       const std::vector<std::pair<std::string, std::string>>& vars) {
  std::string out(tmpl);
  for (const auto& [name, value] : vars) {
    const std::string needle = "{" + name + "}";
    for (auto pos = out.find(needle); pos != std::string::npos;
         pos = out.find(needle, pos + value.size()))
      out.replace(pos, needle.size(), value);
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

}  // namespace

std::string role_name(Role r) {
  switch (r) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

Role parse_role(std::string_view name) {
  if (name == "system") return Role::System;
  if (name == "user") return Role::User;
  if (name == "assistant") return Role::Assistant;
  throw PromptError("unknown role: " + std::string(name));
}

std::string_view Conversation::last_user_content() const {
  for (auto it = turns.rbegin(); it != turns.rend(); ++it)
    if (it->role == Role::User) return it->content;
  return {};
}

bool is_valid(const Conversation& c) {
  if (c.turns.empty()) return false;
  std::size_t i = c.turns.front().role == Role::System ? 1 : 0;
  if (i == c.turns.size()) return false;
  for (Role expected = Role::User; i < c.turns.size(); ++i) {
    if (c.turns[i].role != expected) return false;
    expected = expected == Role::User ? Role::Assistant : Role::User;
  }
  return true;
}

std::optional<InterventionId> detect_intervention(std::string_view user_content) {
  if (starts_with(user_content, prompt_text::kInitial)) return InterventionId::T0;
  if (starts_with(user_content, prompt_text::kPathQuality)) return InterventionId::T1;
  if (starts_with(user_content, prompt_text::kReasoningReliability)) return InterventionId::T2;
  return std::nullopt;
}

bool is_panel_prompt(std::string_view user_content) {
  const auto head = prompt_text::kPanelTemplate.substr(0, prompt_text::kPanelTemplate.find('{'));
  return starts_with(user_content, head);
}

Conversation render_initial(const Question& question, std::string_view contexts,
                            std::string_view system_preamble) {
  Conversation c;
  if (!system_preamble.empty()) c.turns.push_back({Role::System, std::string(system_preamble)});
  std::string body(prompt_text::kInitial);
  body += "\n\nContexts:\n";
  body += contexts;
  body += "\n\nQuestion: ";
  body += question.text;
  c.turns.push_back({Role::User, std::move(body)});
  return c;
}

Conversation render_counterfactual(const Conversation& base, std::string_view a0,
                                   InterventionId which) {
  if (which == InterventionId::T0) throw PromptError("not a counterfactual intervention");
  if (trim(a0).empty()) throw PromptError("empty initial answer");
  Conversation c = base;
  c.turns.push_back({Role::Assistant, "{" + std::string(a0) + "}"});
  c.turns.push_back({Role::User, std::string(which == InterventionId::T1
                                                 ? prompt_text::kPathQuality
                                                 : prompt_text::kReasoningReliability)});
  return c;
}

std::string render_panel_text(const std::array<std::string, 3>& answers, InterventionSet active) {
  if (active.empty()) throw PromptError("no active interventions");
  std::vector<std::string> candidates, answer_names, keys, quoted_keys;
  for (auto id : active.ordered()) {
    const std::string& a = answers[index_of(id)];
    if (trim(a).empty()) throw PromptError("missing answer for " + key_of(id));
    candidates.push_back(key_of(id) + ": " + a);
    answer_names.push_back("a_" + std::to_string(index_of(id)));
    keys.push_back(key_of(id));
    quoted_keys.push_back("\"" + key_of(id) + "\"");
  }
  const std::string body =
      substitute(prompt_text::kPanelTemplate, {{"n", std::to_string(active.size())},
                                               {"answers_comma", join(answer_names, ", ")},
                                               {"answers_slash", join(answer_names, "/")},
                                               {"interventions", join(keys, ", ")},
                                               {"candidates", join(candidates, "; ")}});
  return body + "\n" +
         substitute(prompt_text::kPanelFormatHint, {{"keys", join(quoted_keys, ", ")}});
}

Conversation render_panel(const std::array<std::string, 3>& answers, InterventionSet active) {
  return Conversation{{{Role::User, render_panel_text(answers, active)}}};
}

std::string parse_answer_line(std::string_view raw) {
  std::string_view line;
  while (!raw.empty()) {
    const auto nl = raw.find('\n');
    line = raw.substr(0, nl);
    raw = nl == std::string_view::npos ? std::string_view{} : raw.substr(nl + 1);
    if (!trim(line).empty()) break;
    line = {};
  }
  std::string answer;
  const auto open = line.find('{');
  const auto close = open == std::string_view::npos ? open : line.find('}', open + 1);
  if (close != std::string_view::npos)
    answer = trim(line.substr(open + 1, close - open - 1));
  else
    answer = trim(line);
  if (answer.empty()) throw PromptError("empty answer");
  return answer;
}

std::string prompt_catalog() {
  const std::array<std::string, 3> placeholders{"a0", "a1", "a2"};
  const std::string panel = render_panel_text(placeholders, InterventionSet::all());
  const std::vector<std::pair<std::string, std::string>> entries{
      {"t0 (initial)", std::string(prompt_text::kInitial)},
      {"t1 (path quality)", std::string(prompt_text::kPathQuality)},
      {"t2 (reasoning reliability)", std::string(prompt_text::kReasoningReliability)},
      {"panel (all interventions)", panel},
  };
  std::string out = "# Prompt catalog\n";
  for (const auto& [name, text] : entries) {
    out += "\n## " + name + "\n\nsha256: `" + detail::sha256_hex(text) + "`\n\n```text\n" +
           text + "\n```\n";
  }
  return out;
}

}  // namespace kgcal
