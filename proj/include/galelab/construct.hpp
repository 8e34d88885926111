#pragma once

#include <cstdint>

#include "galelab/core.hpp"
#include "galelab/entropy.hpp"
#include "galelab/gambler.hpp"
#include "galelab/stream.hpp"

namespace galelab {

/// How zero (or tiny) blocks are lifted before building a gambler.
struct SmoothingPolicy {
  Rational epsilon_prime = Rational(1, 10);  // max |log2 new − log2 old| on blocks ≥ floor
  Rational floor = Rational(1, 1000);
};

/// The default floor 1/(100·σ^ℓ).
SmoothingPolicy default_smoothing(std::size_t sigma, std::size_t block_length);

/// Plug-in block frequencies at the checkpoint realizing the running-min entropy
/// (ties go to the longest prefix).
Distribution empirical_block_distribution(SymbolStream& stream, std::size_t block_length, BlockMode mode,
                                          std::uint64_t n, const CheckpointSchedule& schedule = {});
/// Frequencies of a whole word (disjoint mode truncates to a multiple of ℓ).
Distribution empirical_block_distribution(const Word& x, std::size_t block_length, BlockMode mode);
Distribution distribution_from_counts(const Alphabet& alphabet, const BlockCounts& counts);

/// Lifts every block below the floor to exactly the floor and rescales the rest,
/// keeping the sum exactly 1.
Distribution rationalize_distribution(const Distribution& dist, const SmoothingPolicy& policy);

/// Single-bet gambler on Σ^{<ℓ} whose cumulative bet on every aligned block w is ℙ(w).
GamblerSpec build_disjoint_gambler(const Distribution& dist);

/// ℓ-bet gambler on Σ^{<ℓ} (shift transitions) whose bets realize ℙ(window) on
/// every sliding window. Bet row r conditions on the last ℓ−1−r symbols, i.e. it
/// bets for the window that opened ℓ−1−r symbols ago; rows whose window would
/// start before the input are fair.
GamblerSpec build_sliding_gambler(const Distribution& dist);

/// States Q × {0..L−1} with a phase counter; bets copied from the base state.
GamblerSpec extend_phase(const GamblerSpec& spec, std::size_t phases);

/// m adjacent copies of every bet row (row (j−1)·m + r copies source row j); c0 ↦ c0^m.
GamblerSpec replicate_bets(const GamblerSpec& spec, std::size_t copies);

}  // namespace galelab
