#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "json.hpp"

#include "galelab/core.hpp"

namespace galelab {

/// A (product) gale presented as a capital function on words.
///
/// evaluate(w) must be deterministic and safe to call concurrently. For a
/// k-product gale the ledger carries all k factors; roots are taken in the
/// log domain as log2(d)/k.
struct GaleOracle {
  Alphabet alphabet = Alphabet::binary();
  Rational s_param = 1;
  std::size_t k_factors = 1;
  std::function<CapitalLedger(const Word&)> evaluate;
};

/// Default tolerance for log-domain inequality checks.
inline constexpr double log2_tolerance = 1e-9;

/// Exact check of mantissa(w) = (1/σ)·Σ_a mantissa(wa).
bool check_gale_condition(const GaleOracle& oracle, const Word& w, double tol = log2_tolerance);

/// d(w0)^{1/k} + d(w1)^{1/k} ≤ 2^s·d(w)^{1/k}, evaluated on log2 values.
bool check_root_supergale(const GaleOracle& oracle, const Word& w, double tol = log2_tolerance);

/// Finite set of words, none a proper prefix of another.
class PrefixSet {
 public:
  PrefixSet() = default;
  /// Throws not_antichain when one member prefixes another.
  explicit PrefixSet(std::vector<Word> members);

  const std::vector<Word>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

 private:
  std::vector<Word> members_;
};

/// Every antichain of {0,1}^{≤max_depth}. f(0)=2, f(d)=f(d-1)²+1.
std::vector<PrefixSet> enumerate_prefix_sets(std::size_t max_depth);
/// Number of antichains enumerate_prefix_sets would produce.
std::uint64_t count_prefix_sets(std::size_t max_depth);

/// Σ_{u∈B} 2^{-s|u|}·d(wu)^{1/k} ≤ d(w)^{1/k}, evaluated on log2 values.
bool check_kraft_inequality(const GaleOracle& oracle, const Word& w, const PrefixSet& prefixes,
                            double tol = log2_tolerance);

/// Minimal words where the capital first reaches 2^{n·k}·a_ℓ.
struct CoverCertificate {
  PrefixSet members;
  double kraft_sum = 0.0;              // Σ 2^{-s|w|}
  double bound = 1.0;                  // 2^{-n_target}
  double threshold_log2 = 0.0;         // log2(2^{n·k}·a_ℓ)
  double a_log2 = 0.0;                 // log2 a_ℓ
  std::size_t n_target = 0;
  std::size_t min_depth = 0;           // shortest member
  std::size_t max_member_depth = 0;
  bool complete = false;               // every live branch was covered before max_depth
  double uncovered_mass = 0.0;         // uniform measure of live words left at max_depth
  std::vector<Word> uncovered;         // live words at max_depth (capped)

  bool valid() const noexcept { return kraft_sum <= bound; }
};

/// Breadth-first search of {0,1}^{≤max_depth} for the prefix set A_ℓ.
/// Requires d(λ) = 1. Throws threshold_never_reached when nothing is covered.
CoverCertificate extract_cover(const GaleOracle& oracle, std::size_t n_target, std::size_t min_length,
                               std::size_t max_depth);

nlohmann::json to_json(const CoverCertificate& cert);

/// Pointwise product of gale oracles over one alphabet and s.
GaleOracle product_oracle(std::vector<GaleOracle> factors);

}  // namespace galelab
