#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "galelab/core.hpp"
#include "galelab/gale.hpp"
#include "galelab/gambler.hpp"

namespace galelab {

using Rng = std::mt19937_64;

/// Random rational in [0,1] with denominator ≤ max_den; hits 0 and 1 now and then.
Rational random_probability(Rng& rng, unsigned max_den = 16);
/// Random stochastic row of width σ with exact rational entries.
std::vector<Rational> random_row(Rng& rng, std::size_t sigma, unsigned max_den = 16);
/// Random k-bet gambler with 1..max_states states and random rational bets.
GamblerSpec random_gambler(Rng& rng, const Alphabet& alphabet, std::size_t k, std::size_t max_states,
                           bool random_c0 = true);
/// Distribution over Σ^ℓ with every block strictly positive.
Distribution random_positive_distribution(Rng& rng, const Alphabet& alphabet, std::size_t block_length);
/// Binary word of uniformly random length in [0, max_length].
Word random_word(Rng& rng, const Alphabet& alphabet, std::size_t max_length);
/// Gambler that goes all in on one symbol per state in at least one row (other
/// rows fair), so that at s = 1 exactly one branch survives and doubles at each step.
GamblerSpec random_winning_gambler(Rng& rng, std::size_t k, std::size_t max_states);

struct SuiteReport {
  std::string suite;
  std::uint64_t trials = 0;
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  std::optional<std::string> counterexample;
  double seconds = 0.0;

  bool passed() const noexcept { return failures == 0; }
};

nlohmann::json to_json(const SuiteReport& report);

/// Exact gale condition over all w ∈ Σ^{≤depth} for `trials` random 1-bet gamblers.
SuiteReport verify_gale_suite(std::uint64_t trials, std::uint64_t seed, std::size_t depth = 6);
/// Exact gale condition for one given gambler (k must be 1).
SuiteReport verify_gale_spec(const GamblerSpec& spec, const Rational& s, std::size_t depth = 6);
/// Root-supergale inequality on random k-bet gamblers (k ≤ 4) and random words.
SuiteReport verify_root_suite(std::uint64_t trials, std::uint64_t seed, std::uint64_t words_per_gale = 100,
                              std::size_t max_word_length = 8);
/// Kraft inequality over every antichain of depth ≤ 3 and anchors of length ≤ 2.
SuiteReport verify_kraft_suite(std::uint64_t trials, std::uint64_t seed, std::size_t antichain_depth = 3,
                               std::size_t anchor_depth = 2);
/// Cover extraction on random winning product gales.
SuiteReport verify_cover_suite(std::uint64_t trials, std::uint64_t seed);
/// Cumulative-bet exactness of the disjoint and sliding builders plus the
/// phase-extension and replication identities.
SuiteReport verify_construct_suite(std::uint64_t trials, std::uint64_t seed);

SuiteReport run_suite(std::string_view name, std::uint64_t trials, std::uint64_t seed);

}  // namespace galelab
