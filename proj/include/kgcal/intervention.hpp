#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kgcal {

/// Prompting intervention. T0 is the plain retrieval prompt, T1 and T2 are
/// the two counterfactual follow-ups (poor context quality, misuse of context).
enum class InterventionId : std::uint8_t { T0 = 0, T1 = 1, T2 = 2 };

inline constexpr std::array<InterventionId, 3> kAllInterventions{
    InterventionId::T0, InterventionId::T1, InterventionId::T2};

inline constexpr std::size_t index_of(InterventionId id) { return static_cast<std::size_t>(id); }

/// "t_0", "t_1", "t_2": the key spelling used in prompts and panel replies.
std::string key_of(InterventionId id);

/// "T0", "T1", "T2".
std::string name_of(InterventionId id);

/// Accepts "T0"/"t0"/"t_0" (and the other two ids likewise).
std::optional<InterventionId> parse_intervention(std::string_view text);

/// Sorted, duplicate-free set of interventions. Always iterated T0, T1, T2.
class InterventionSet {
 public:
  InterventionSet() = default;
  InterventionSet(std::initializer_list<InterventionId> ids) {
    for (auto id : ids) insert(id);
  }

  static InterventionSet all() { return {InterventionId::T0, InterventionId::T1, InterventionId::T2}; }

  void insert(InterventionId id) { bits_ |= mask(id); }
  void erase(InterventionId id) { bits_ &= static_cast<std::uint8_t>(~mask(id)); }
  bool contains(InterventionId id) const { return (bits_ & mask(id)) != 0; }
  std::size_t size() const {
    return static_cast<std::size_t>(contains(InterventionId::T0)) + contains(InterventionId::T1) +
           contains(InterventionId::T2);
  }
  bool empty() const { return bits_ == 0; }

  std::vector<InterventionId> ordered() const {
    std::vector<InterventionId> out;
    for (auto id : kAllInterventions)
      if (contains(id)) out.push_back(id);
    return out;
  }

  /// "t0_t1_t2" style suffix used in run artifact names.
  std::string suffix() const;

  friend bool operator==(InterventionSet, InterventionSet) = default;

 private:
  static constexpr std::uint8_t mask(InterventionId id) {
    return static_cast<std::uint8_t>(1u << index_of(id));
  }
  std::uint8_t bits_ = 0;
};

}  // namespace kgcal
