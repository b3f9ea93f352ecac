#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace dereg {

/// Discretized expression status of a gene.
enum class Ternary : std::int8_t { Under = -1, Normal = 0, Over = 1 };

inline constexpr std::array<Ternary, 3> kTernaryStates{Ternary::Under, Ternary::Normal,
                                                       Ternary::Over};

/// Position of a state in {-1, 0, +1} order; used as the discrete index in factor tables.
constexpr int index_of(Ternary s) { return static_cast<int>(s) + 1; }
constexpr Ternary ternary_from_index(int i) { return static_cast<Ternary>(i - 1); }
constexpr int value_of(Ternary s) { return static_cast<int>(s); }

/// Expected target status given the collective states of its co-activators and
/// co-inhibitors (the LICORN table: an over-expressed inhibitor set always wins,
/// otherwise the activators decide unless both sets are silent or opposed).
constexpr Ternary truth_table(Ternary activators, Ternary inhibitors) {
  // rows: inhibitors, columns: activators, both in {-1, 0, +1} order
  constexpr Ternary kTable[3][3] = {
      {Ternary::Normal, Ternary::Over, Ternary::Over},
      {Ternary::Under, Ternary::Normal, Ternary::Over},
      {Ternary::Under, Ternary::Under, Ternary::Under},
  };
  return kTable[index_of(inhibitors)][index_of(activators)];
}

/// Binary reduction behind the collective state: agreement is kept, anything else is 0.
constexpr Ternary combine(Ternary a, Ternary b) { return a == b ? a : Ternary::Normal; }

/// Collective state of a regulator set: +1 / -1 when every member shares that
/// status, 0 otherwise. The empty set is 0.
constexpr Ternary collective_state(std::span<const Ternary> states) {
  if (states.empty()) return Ternary::Normal;
  Ternary acc = states.front();
  for (Ternary s : states.subspan(1)) acc = combine(acc, s);
  return acc;
}

}  // namespace dereg
