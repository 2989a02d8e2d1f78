#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fmwb/finstruct.hpp"
#include "fmwb/formula.hpp"

namespace fmwb {

struct EfLimits {
  int max_size = 12;
  int max_rounds = 4;
};

struct EfMove {
  bool in_a = true;
  int element = 0;
};

struct EfResult {
  bool equivalent = true;        // Duplicator wins
  int rounds = 0;
  std::optional<EfMove> opening;  // a winning first move for Spoiler
  std::size_t positions = 0;     // memoized positions
};

/// The r-round Ehrenfeucht-Fraisse game on A and B. Throws InputError on a
/// signature mismatch and BoundExceeded beyond the limits.
EfResult ef_play(const FinStructure& a, const FinStructure& b, int r, const EfLimits& limits = {});
bool ef_equivalent(const FinStructure& a, const FinStructure& b, int r, const EfLimits& limits = {});

/// A sentence of quantifier rank <= r true in A and false in B, read off a
/// winning Spoiler strategy (each quantifier's body pruned to a smallest
/// greedy cover of the opponent's replies), or none when A and B agree up to
/// rank r. The result is re-checked on both structures.
std::optional<Formula> distinguishing_sentence(const FinStructure& a, const FinStructure& b, int r,
                                               const EfLimits& limits = {});

/// The rank-r Hintikka sentence of A: B satisfies it iff B agrees with A on
/// all sentences of rank <= r. Needs |A| <= 8 and r <= 3.
Formula hintikka(const FinStructure& a, int r);

}  // namespace fmwb
