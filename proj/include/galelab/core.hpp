#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace galelab {

using Rational = mpq_class;
using Symbol = std::uint8_t;
using BlockCode = std::uint64_t;

enum class ErrorCode {
  bad_alphabet,
  bad_symbol,
  bad_argument,
  sum_not_one,
  bad_block_length,
  negative_weight,
  prefix_too_long,
  zero_marginal,
  length_not_multiple,
  word_too_short,
  empty_counts,
  stream_exhausted,
  table_too_large,
  not_single_factor,
  depth_too_large,
  not_antichain,
  threshold_never_reached,
  row_not_stochastic,
  missing_transition,
  unknown_start_state,
  zero_mass_block,
  floor_too_large,
  distortion_too_large,
  s_below_entropy,
  too_few_checkpoints,
  file_not_readable,
  parse_error,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parses "p/q", "p" or a finite decimal such as "0.25" into a canonical rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& value);
/// log2 of a positive rational, accurate for numerators/denominators far beyond double range.
double log2_of(const Rational& value);

/// Worker threads allowed for fan-out work: GALELAB_THREADS if set, else the core count.
std::size_t thread_budget();

/// Ordered set of single-character glyphs. Copies share one immutable table.
class Alphabet {
 public:
  explicit Alphabet(std::string_view glyphs);
  static Alphabet binary() { return Alphabet("01"); }

  std::size_t size() const noexcept { return impl_->glyphs.size(); }
  char glyph(Symbol s) const { return impl_->glyphs.at(s); }
  const std::string& glyphs() const noexcept { return impl_->glyphs; }
  bool contains(char c) const noexcept { return impl_->index[static_cast<unsigned char>(c)] >= 0; }
  /// Throws bad_symbol when the glyph is not in the alphabet.
  Symbol index_of(char c) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) noexcept {
    return a.impl_ == b.impl_ || a.impl_->glyphs == b.impl_->glyphs;
  }

 private:
  struct Impl {
    std::string glyphs;
    std::array<std::int16_t, 256> index{};
  };
  std::shared_ptr<const Impl> impl_;
};

/// A finite word over an alphabet; x[a:b] is symbols a..b-1.
class Word {
 public:
  explicit Word(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
  Word(Alphabet alphabet, std::vector<Symbol> data);
  static Word parse(const Alphabet& alphabet, std::string_view text);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  Symbol operator[](std::size_t i) const { return data_[i]; }
  std::span<const Symbol> symbols() const noexcept { return data_; }

  Word slice(std::size_t begin, std::size_t end) const;
  Word extended(Symbol s) const;
  Word concat(const Word& other) const;
  void push_back(Symbol s);
  bool is_prefix_of(const Word& other) const noexcept;
  std::string str() const;

  friend bool operator==(const Word& a, const Word& b) noexcept { return a.data_ == b.data_; }
  friend bool operator<(const Word& a, const Word& b) noexcept {
    return a.data_.size() != b.data_.size() ? a.data_.size() < b.data_.size() : a.data_ < b.data_;
  }

 private:
  Alphabet alphabet_;
  std::vector<Symbol> data_;
};

/// Every word of exactly `length` symbols, in lexicographic order.
std::vector<Word> all_words(const Alphabet& alphabet, std::size_t length);
/// Every word of length 0..max_length, shortest first.
std::vector<Word> all_words_up_to(const Alphabet& alphabet, std::size_t max_length);

/// σ^ℓ, throwing table_too_large past 2^40.
std::uint64_t block_space(std::size_t sigma, std::size_t length);
/// Base-σ code of a block, first symbol most significant.
BlockCode encode_block(std::span<const Symbol> block, std::size_t sigma);
Word decode_block(const Alphabet& alphabet, BlockCode code, std::size_t length);

/// Exact-rational probability vector over Σ^ℓ. Absent blocks weigh 0.
class Distribution {
 public:
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t block_length() const noexcept { return block_length_; }
  /// Positive-weight blocks keyed by base-σ code.
  const std::map<BlockCode, Rational>& weights() const noexcept { return weights_; }
  Rational weight(const Word& block) const;
  std::size_t support_size() const noexcept { return weights_.size(); }
  bool fully_supported() const;

 private:
  friend Distribution validate_distribution(const Alphabet&, std::size_t,
                                            const std::vector<std::pair<Word, Rational>>&);
  friend Distribution distribution_from_codes(const Alphabet&, std::size_t,
                                              std::map<BlockCode, Rational>);
  Distribution(Alphabet alphabet, std::size_t block_length) : alphabet_(std::move(alphabet)), block_length_(block_length) {}

  Alphabet alphabet_;
  std::size_t block_length_;
  std::map<BlockCode, Rational> weights_;
};

Distribution validate_distribution(const Alphabet& alphabet, std::size_t block_length,
                                   const std::vector<std::pair<Word, Rational>>& weights);
/// Same checks as validate_distribution, keyed by block code.
Distribution distribution_from_codes(const Alphabet& alphabet, std::size_t block_length,
                                     std::map<BlockCode, Rational> weights);
Distribution uniform_distribution(const Alphabet& alphabet, std::size_t block_length);

/// Σ of weights over blocks extending `prefix`; 1 for the empty prefix.
Rational marginal(const Distribution& dist, const Word& prefix);
/// marginal(v·a) / marginal(v).
Rational conditional_bet(const Distribution& dist, const Word& context, Symbol next);
/// The full conditional row (one entry per symbol) for a context.
std::vector<Rational> conditional_row(const Distribution& dist, const Word& context);

/// Capital of an induced (product) gale, kept as an exact martingale part.
///
/// d(w) = σ^{(s-1)·k·|w|} · mantissa, where mantissa = c0 · Π σ·bet over all k
/// bets at every step. A fair bet leaves the mantissa unchanged, and the gale
/// condition becomes mantissa(w) = (1/σ)·Σ_a mantissa(wa) exactly.
class CapitalLedger {
 public:
  CapitalLedger(Rational s, std::size_t k_bets, std::size_t sigma, Rational mantissa, std::uint64_t steps = 0);

  std::uint64_t step_count() const noexcept { return steps_; }
  const Rational& s_param() const noexcept { return s_; }
  std::size_t k_bets() const noexcept { return k_; }
  std::size_t sigma() const noexcept { return sigma_; }
  const Rational& mantissa() const noexcept { return mantissa_; }
  bool ruined() const { return sgn(mantissa_) == 0; }

  double log2_mantissa() const;
  /// log2 d(w); -inf once the capital is exactly 0.
  double log2_value() const;
  /// log2 of the raw bet product c0·Π bet (σ normalization removed).
  double log2_raw() const;

  /// One symbol's worth of bets: the mantissa is multiplied by `factor`, which
  /// must already include the σ normalization of all k bets.
  void apply(const Rational& factor);

 private:
  std::uint64_t steps_ = 0;
  Rational s_;
  std::size_t k_;
  std::size_t sigma_;
  Rational mantissa_;
};

}  // namespace galelab
