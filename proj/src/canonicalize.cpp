#include "kgcal/canonicalize.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace kgcal {
namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string singularize(std::string token) {
  if (ends_with(token, "sses") || ends_with(token, "xes") || ends_with(token, "zes") ||
      ends_with(token, "ches") || ends_with(token, "shes")) {
    if (token.size() - 2 >= 3) token.resize(token.size() - 2);
    return token;
  }
  if (ends_with(token, "s") && !ends_with(token, "ss") && token.size() - 1 >= 2)
    token.pop_back();
  return token;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

}  // namespace

int CandidateSet::total_count() const {
  int total = 0;
  for (const auto& c : candidates) total += c.count;
  return total;
}

int CandidateSet::find(std::string_view answer) const {
  const std::string key = normalize(answer);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (normalize(candidates[i].canonical) == key) return static_cast<int>(i);
  return -1;
}

std::string normalize(std::string_view s) {
  std::string folded;
  folded.reserve(s.size());
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::ispunct(u)) continue;
    folded += u < 0x80 ? static_cast<char>(std::tolower(u)) : c;
  }
  std::string out;
  for (auto& token : split_ws(folded)) {
    if (!out.empty()) out += ' ';
    out += singularize(std::move(token));
  }
  return out;
}

std::string canonical_form(const std::vector<std::string>& surface_forms) {
  if (surface_forms.empty()) throw std::invalid_argument("canonical_form: no surface forms");
  std::string out;
  for (auto& token : split_ws(surface_forms.front())) {
    bool seen_alpha = false;
    for (char& c : token) {
      const auto u = static_cast<unsigned char>(c);
      if (u >= 0x80) continue;
      if (!seen_alpha && std::isalpha(u)) {
        c = static_cast<char>(std::toupper(u));
        seen_alpha = true;
      } else {
        c = static_cast<char>(std::tolower(u));
      }
    }
    if (!out.empty()) out += ' ';
    out += token;
  }
  return out;
}

CandidateSet merge_answers(const std::map<InterventionId, std::string>& answers) {
  CandidateSet cs;
  std::vector<std::string> keys;
  // std::map iterates T0, T1, T2: first-appearance order follows for free.
  for (const auto& [id, answer] : answers) {
    const std::string key = normalize(answer);
    if (key.empty()) continue;
    std::size_t i = 0;
    while (i < keys.size() && keys[i] != key) ++i;
    if (i == keys.size()) {
      keys.push_back(key);
      cs.candidates.push_back({});
    }
    auto& c = cs.candidates[i];
    c.surface_forms.push_back(answer);
    c.count += 1;
    c.sources.insert(id);
  }
  if (cs.empty()) throw std::invalid_argument("no candidates");
  for (auto& c : cs.candidates) c.canonical = canonical_form(c.surface_forms);
  return cs;
}

std::vector<double> frequency_vector(const CandidateSet& cs, int divisor) {
  if (divisor <= 0) throw std::invalid_argument("frequency_vector: divisor must be positive");
  std::vector<double> out;
  out.reserve(cs.size());
  for (const auto& c : cs.candidates) {
    // Exact half-up rounding of count/divisor to hundredths in integers.
    const long hundredths = (200L * c.count + divisor) / (2L * divisor);
    out.push_back(static_cast<double>(hundredths) / 100.0);
  }
  return out;
}

}  // namespace kgcal
