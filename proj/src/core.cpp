#include "galelab/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <limits>

namespace galelab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::bad_alphabet: return "BadAlphabet";
    case ErrorCode::bad_symbol: return "BadSymbol";
    case ErrorCode::bad_argument: return "BadArgument";
    case ErrorCode::sum_not_one: return "SumNotOne";
    case ErrorCode::bad_block_length: return "BadBlockLength";
    case ErrorCode::negative_weight: return "NegativeWeight";
    case ErrorCode::prefix_too_long: return "PrefixTooLong";
    case ErrorCode::zero_marginal: return "ZeroMarginal";
    case ErrorCode::length_not_multiple: return "LengthNotMultiple";
    case ErrorCode::word_too_short: return "WordTooShort";
    case ErrorCode::empty_counts: return "EmptyCounts";
    case ErrorCode::stream_exhausted: return "StreamExhausted";
    case ErrorCode::table_too_large: return "TableTooLarge";
    case ErrorCode::not_single_factor: return "NotSingleFactor";
    case ErrorCode::depth_too_large: return "DepthTooLarge";
    case ErrorCode::not_antichain: return "NotAntichain";
    case ErrorCode::threshold_never_reached: return "ThresholdNeverReached";
    case ErrorCode::row_not_stochastic: return "RowNotStochastic";
    case ErrorCode::missing_transition: return "MissingTransition";
    case ErrorCode::unknown_start_state: return "UnknownStartState";
    case ErrorCode::zero_mass_block: return "ZeroMassBlock";
    case ErrorCode::floor_too_large: return "FloorTooLarge";
    case ErrorCode::distortion_too_large: return "DistortionTooLarge";
    case ErrorCode::s_below_entropy: return "SBelowEntropy";
    case ErrorCode::too_few_checkpoints: return "TooFewCheckpoints";
    case ErrorCode::file_not_readable: return "FileNotReadable";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Unknown";
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; }), s.end());
  if (s.empty()) throw Error(ErrorCode::parse_error, "empty rational");
  Rational out;
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw Error(ErrorCode::parse_error, "mixed decimal/fraction: " + s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t scale = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw Error(ErrorCode::parse_error, "bad decimal: " + s);
    if (digits.front() == '+') digits.erase(0, 1);
    std::string den = "1" + std::string(scale, '0');
    if (out.set_str(digits + "/" + den, 10) != 0) throw Error(ErrorCode::parse_error, "bad decimal: " + s);
  } else {
    if (s.front() == '+') s.erase(0, 1);
    if (out.set_str(s, 10) != 0) throw Error(ErrorCode::parse_error, "bad rational: " + s);
    if (out.get_den() == 0) throw Error(ErrorCode::parse_error, "zero denominator: " + s);
  }
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

namespace {

double log2_of(const mpz_class& z) {
  long exp = 0;
  double m = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log2(std::fabs(m)) + static_cast<double>(exp);
}

}  // namespace

double log2_of(const Rational& value) {
  if (sgn(value) <= 0) {
    if (sgn(value) == 0) return -std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::bad_argument, "log2 of negative rational");
  }
  return log2_of(value.get_num()) - log2_of(value.get_den());
}

std::size_t thread_budget() {
  if (const char* env = std::getenv("GALELAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Alphabet::Alphabet(std::string_view glyphs) {
  auto impl = std::make_shared<Impl>();
  impl->index.fill(-1);
  if (glyphs.size() < 2) throw Error(ErrorCode::bad_alphabet, "alphabet needs at least 2 glyphs");
  if (glyphs.size() > 256) throw Error(ErrorCode::bad_alphabet, "alphabet larger than 256 glyphs");
  for (char c : glyphs) {
    auto& slot = impl->index[static_cast<unsigned char>(c)];
    if (slot >= 0) throw Error(ErrorCode::bad_alphabet, std::string("duplicate glyph '") + c + "'");
    slot = static_cast<std::int16_t>(impl->glyphs.size());
    impl->glyphs.push_back(c);
  }
  impl_ = std::move(impl);
}

Symbol Alphabet::index_of(char c) const {
  auto i = impl_->index[static_cast<unsigned char>(c)];
  if (i < 0) throw Error(ErrorCode::bad_symbol, std::string("glyph '") + c + "' not in alphabet \"" + glyphs() + "\"");
  return static_cast<Symbol>(i);
}

Word::Word(Alphabet alphabet, std::vector<Symbol> data) : alphabet_(std::move(alphabet)), data_(std::move(data)) {
  for (Symbol s : data_)
    if (s >= alphabet_.size()) throw Error(ErrorCode::bad_symbol, "symbol index out of range");
}

Word Word::parse(const Alphabet& alphabet, std::string_view text) {
  std::vector<Symbol> data;
  data.reserve(text.size());
  for (char c : text) data.push_back(alphabet.index_of(c));
  Word w(alphabet);
  w.data_ = std::move(data);
  return w;
}

Word Word::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > data_.size()) throw Error(ErrorCode::bad_argument, "slice out of range");
  Word w(alphabet_);
  w.data_.assign(data_.begin() + static_cast<std::ptrdiff_t>(begin), data_.begin() + static_cast<std::ptrdiff_t>(end));
  return w;
}

Word Word::extended(Symbol s) const {
  Word w = *this;
  w.push_back(s);
  return w;
}

Word Word::concat(const Word& other) const {
  Word w = *this;
  w.data_.insert(w.data_.end(), other.data_.begin(), other.data_.end());
  return w;
}

void Word::push_back(Symbol s) {
  if (s >= alphabet_.size()) throw Error(ErrorCode::bad_symbol, "symbol index out of range");
  data_.push_back(s);
}

bool Word::is_prefix_of(const Word& other) const noexcept {
  return data_.size() <= other.data_.size() && std::equal(data_.begin(), data_.end(), other.data_.begin());
}

std::string Word::str() const {
  std::string out;
  out.reserve(data_.size());
  for (Symbol s : data_) out.push_back(alphabet_.glyph(s));
  return out;
}

std::uint64_t block_space(std::size_t sigma, std::size_t length) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < length; ++i) {
    total *= sigma;
    if (total > (std::uint64_t{1} << 40)) throw Error(ErrorCode::table_too_large, "σ^ℓ exceeds 2^40");
  }
  return total;
}

BlockCode encode_block(std::span<const Symbol> block, std::size_t sigma) {
  BlockCode code = 0;
  for (Symbol s : block) code = code * sigma + s;
  return code;
}

Word decode_block(const Alphabet& alphabet, BlockCode code, std::size_t length) {
  std::vector<Symbol> data(length);
  const auto sigma = alphabet.size();
  for (std::size_t i = length; i-- > 0;) {
    data[i] = static_cast<Symbol>(code % sigma);
    code /= sigma;
  }
  return Word(alphabet, std::move(data));
}

std::vector<Word> all_words(const Alphabet& alphabet, std::size_t length) {
  const auto count = block_space(alphabet.size(), length);
  std::vector<Word> out;
  out.reserve(count);
  for (BlockCode c = 0; c < count; ++c) out.push_back(decode_block(alphabet, c, length));
  return out;
}

std::vector<Word> all_words_up_to(const Alphabet& alphabet, std::size_t max_length) {
  std::vector<Word> out;
  for (std::size_t len = 0; len <= max_length; ++len) {
    auto layer = all_words(alphabet, len);
    out.insert(out.end(), std::make_move_iterator(layer.begin()), std::make_move_iterator(layer.end()));
  }
  return out;
}

Rational Distribution::weight(const Word& block) const {
  if (block.size() != block_length_) throw Error(ErrorCode::bad_block_length, "block " + block.str());
  auto it = weights_.find(encode_block(block.symbols(), alphabet_.size()));
  return it == weights_.end() ? Rational(0) : it->second;
}

bool Distribution::fully_supported() const {
  return weights_.size() == block_space(alphabet_.size(), block_length_);
}

Distribution distribution_from_codes(const Alphabet& alphabet, std::size_t block_length,
                                     std::map<BlockCode, Rational> weights) {
  if (block_length == 0) throw Error(ErrorCode::bad_block_length, "block length must be positive");
  const auto space = block_space(alphabet.size(), block_length);
  Distribution dist(alphabet, block_length);
  Rational sum = 0;
  for (auto& [code, w] : weights) {
    if (code >= space) throw Error(ErrorCode::bad_block_length, "block code out of range");
    if (sgn(w) < 0) throw Error(ErrorCode::negative_weight, decode_block(alphabet, code, block_length).str());
    sum += w;
    if (sgn(w) > 0) dist.weights_.emplace(code, std::move(w));
  }
  if (sum != 1) throw Error(ErrorCode::sum_not_one, to_string(sum));
  return dist;
}

Distribution validate_distribution(const Alphabet& alphabet, std::size_t block_length,
                                   const std::vector<std::pair<Word, Rational>>& weights) {
  if (block_length == 0) throw Error(ErrorCode::bad_block_length, "block length must be positive");
  std::map<BlockCode, Rational> coded;
  for (const auto& [block, w] : weights) {
    if (block.size() != block_length)
      throw Error(ErrorCode::bad_block_length, "\"" + block.str() + "\" has length " + std::to_string(block.size()));
    if (sgn(w) < 0) throw Error(ErrorCode::negative_weight, block.str());
    coded[encode_block(block.symbols(), alphabet.size())] += w;
  }
  return distribution_from_codes(alphabet, block_length, std::move(coded));
}

Distribution uniform_distribution(const Alphabet& alphabet, std::size_t block_length) {
  const auto space = block_space(alphabet.size(), block_length);
  std::map<BlockCode, Rational> weights;
  Rational w(1, static_cast<unsigned long>(space));
  w.canonicalize();
  for (BlockCode c = 0; c < space; ++c) weights.emplace(c, w);
  return distribution_from_codes(alphabet, block_length, std::move(weights));
}

Rational marginal(const Distribution& dist, const Word& prefix) {
  const auto ell = dist.block_length();
  if (prefix.size() > ell) throw Error(ErrorCode::prefix_too_long, prefix.str());
  const auto sigma = dist.alphabet().size();
  const auto span = block_space(sigma, ell - prefix.size());
  const BlockCode lo = encode_block(prefix.symbols(), sigma) * span;
  const BlockCode hi = lo + span;
  Rational sum = 0;
  const auto& w = dist.weights();
  for (auto it = w.lower_bound(lo); it != w.end() && it->first < hi; ++it) sum += it->second;
  return sum;
}

Rational conditional_bet(const Distribution& dist, const Word& context, Symbol next) {
  if (context.size() >= dist.block_length()) throw Error(ErrorCode::prefix_too_long, context.str());
  Rational base = marginal(dist, context);
  if (sgn(base) == 0) throw Error(ErrorCode::zero_marginal, "context \"" + context.str() + "\"");
  Rational out = marginal(dist, context.extended(next)) / base;
  out.canonicalize();
  return out;
}

std::vector<Rational> conditional_row(const Distribution& dist, const Word& context) {
  std::vector<Rational> row;
  row.reserve(dist.alphabet().size());
  for (std::size_t a = 0; a < dist.alphabet().size(); ++a)
    row.push_back(conditional_bet(dist, context, static_cast<Symbol>(a)));
  return row;
}

CapitalLedger::CapitalLedger(Rational s, std::size_t k_bets, std::size_t sigma, Rational mantissa,
                             std::uint64_t steps)
    : steps_(steps), s_(std::move(s)), k_(k_bets), sigma_(sigma), mantissa_(std::move(mantissa)) {
  if (sgn(mantissa_) < 0) throw Error(ErrorCode::bad_argument, "initial capital must be nonnegative");
  if (k_ == 0) throw Error(ErrorCode::bad_argument, "k must be positive");
}

double CapitalLedger::log2_mantissa() const { return log2_of(mantissa_); }

double CapitalLedger::log2_value() const {
  if (ruined()) return -std::numeric_limits<double>::infinity();
  const double per_step = (s_.get_d() - 1.0) * static_cast<double>(k_) * std::log2(static_cast<double>(sigma_));
  return per_step * static_cast<double>(steps_) + log2_mantissa();
}

double CapitalLedger::log2_raw() const {
  if (ruined()) return -std::numeric_limits<double>::infinity();
  return log2_mantissa() -
         static_cast<double>(k_) * static_cast<double>(steps_) * std::log2(static_cast<double>(sigma_));
}

void CapitalLedger::apply(const Rational& factor) {
  if (sgn(factor) < 0) throw Error(ErrorCode::bad_argument, "negative bet factor");
  mantissa_ *= factor;
  ++steps_;
}

}  // namespace galelab
