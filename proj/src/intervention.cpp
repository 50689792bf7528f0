#include "kgcal/intervention.hpp"

namespace kgcal {

std::string key_of(InterventionId id) { return "t_" + std::to_string(index_of(id)); }

std::string name_of(InterventionId id) { return "T" + std::to_string(index_of(id)); }

std::optional<InterventionId> parse_intervention(std::string_view text) {
  if (text.size() < 2 || (text[0] != 'T' && text[0] != 't')) return std::nullopt;
  text.remove_prefix(1);
  if (text.front() == '_') text.remove_prefix(1);
  if (text == "0") return InterventionId::T0;
  if (text == "1") return InterventionId::T1;
  if (text == "2") return InterventionId::T2;
  return std::nullopt;
}

std::string InterventionSet::suffix() const {
  std::string out;
  for (auto id : ordered()) {
    if (!out.empty()) out += '_';
    out += "t" + std::to_string(index_of(id));
  }
  return out;
}

}  // namespace kgcal
