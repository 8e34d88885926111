#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "galelab/core.hpp"
#include "galelab/gale.hpp"
#include "galelab/stream.hpp"

namespace galelab {

using StateId = std::uint32_t;
/// bet_rows[row][symbol]
using BetRows = std::vector<std::vector<Rational>>;

/// Gambler as read from the interchange format: string-labelled states.
struct RawGambler {
  std::string alphabet = "01";
  std::size_t k = 1;
  std::vector<std::string> states;
  std::string q0;
  Rational c0 = 1;
  std::map<std::pair<std::string, char>, std::string> delta;
  std::map<std::string, BetRows> beta;
};

/// Stochastic-row checking can be switched off to load tampered fixtures
/// for negative-control verification runs.
enum class RowCheck { strict, skip };

/// A validated k-bet finite-state gambler (Q, δ, β⃗, q0, c0), densely indexed.
class GamblerSpec {
 public:
  GamblerSpec(Alphabet alphabet, std::size_t k, std::vector<std::string> labels, std::vector<StateId> delta,
              std::vector<BetRows> bets, StateId q0, Rational c0, RowCheck rows = RowCheck::strict);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t sigma() const noexcept { return alphabet_.size(); }
  std::size_t k() const noexcept { return k_; }
  std::size_t state_count() const noexcept { return labels_.size(); }
  const std::string& label(StateId q) const { return labels_.at(q); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<StateId> find_state(const std::string& label) const;
  StateId next(StateId q, Symbol a) const { return delta_[q * sigma() + a]; }
  const BetRows& bets(StateId q) const { return bets_.at(q); }
  const Rational& bet(StateId q, std::size_t row, Symbol a) const { return bets_[q][row][a]; }
  StateId start() const noexcept { return q0_; }
  const Rational& initial_capital() const noexcept { return c0_; }

  /// Π_i σ·β_i(q)[a]: the mantissa multiplier for reading a in state q.
  const Rational& step_factor(StateId q, Symbol a) const { return factors_[q * sigma() + a]; }
  /// log2 of step_factor; -inf for a zero factor.
  double log2_step_factor(StateId q, Symbol a) const { return log_factors_[q * sigma() + a]; }

  /// δ* from q over a word.
  StateId walk(StateId q, std::span<const Symbol> x) const;

  /// Free-form provenance carried through JSON (builders record their inputs here).
  nlohmann::json provenance;

 private:
  Alphabet alphabet_;
  std::size_t k_;
  std::vector<std::string> labels_;
  std::vector<StateId> delta_;
  std::vector<BetRows> bets_;
  StateId q0_;
  Rational c0_;
  std::vector<Rational> factors_;
  std::vector<double> log_factors_;
};

GamblerSpec validate_gambler(const RawGambler& raw, RowCheck rows = RowCheck::strict);

nlohmann::json to_json(const GamblerSpec& spec);
RawGambler raw_gambler_from_json(const nlohmann::json& j);
GamblerSpec gambler_from_json(const nlohmann::json& j, RowCheck rows = RowCheck::strict);
GamblerSpec load_gambler(const std::string& path, RowCheck rows = RowCheck::strict);
void save_gambler(const GamblerSpec& spec, const std::string& path);

/// Exact capital after every prefix of x; ledgers[i] is the capital on x[0:i].
struct Trajectory {
  std::vector<std::uint64_t> prefix_lengths;
  std::vector<CapitalLedger> ledgers;
  StateId final_state = 0;
};

Trajectory run(const GamblerSpec& spec, const Rational& s, const Word& x);
/// Capital on x only (no per-prefix snapshots).
CapitalLedger evaluate_capital(const GamblerSpec& spec, const Rational& s, const Word& x);

/// Log-domain capital sampled at checkpoints, for long inputs.
struct CapitalTrace {
  std::vector<std::uint64_t> prefix_lengths;
  std::vector<double> log2_capital;
  StateId final_state = 0;
  bool ruined = false;
};

/// Runs over the first n symbols of a stream, recording log2 d at every multiple
/// of `stride` and at the end. Uses precomputed per-transition log factors.
CapitalTrace run_log(const GamblerSpec& spec, double s, SymbolStream& stream, std::uint64_t n, std::uint64_t stride);
CapitalTrace run_log(const GamblerSpec& spec, double s, std::span<const Symbol> x, std::uint64_t stride);

/// Π_j β_row(δ*(q, x[0:j]))[x[j]]; with no row given, the product over all k rows.
Rational cumulative_block_bet(const GamblerSpec& spec, StateId q, const Word& x,
                              std::optional<std::size_t> row = std::nullopt);

/// The k-product s-gale induced by the gambler.
GaleOracle induced_oracle(const GamblerSpec& spec, const Rational& s);

/// Single-bet gambler keeping only bet row `row`.
GamblerSpec project_row(const GamblerSpec& spec, std::size_t row);

/// Constant-bet single-state gambler; the building block for fair and all-in fixtures.
GamblerSpec constant_gambler(const Alphabet& alphabet, std::vector<Rational> row, std::size_t k = 1, Rational c0 = 1);

}  // namespace galelab
