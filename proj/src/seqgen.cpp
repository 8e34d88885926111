#include "galelab/seqgen.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <random>

namespace galelab {

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::periodic: return "periodic";
    case GeneratorKind::champernowne: return "champernowne";
    case GeneratorKind::bernoulli: return "bernoulli";
    case GeneratorKind::thue_morse: return "thue_morse";
    case GeneratorKind::file: return "file";
  }
  return "unknown";
}

namespace {

constexpr std::string_view digit_glyphs = "0123456789abcdefghijklmnopqrstuvwxyz";

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw Error(ErrorCode::parse_error, std::string("bad ") + what + ": \"" + s + "\"");
  return std::stoull(s);
}

class PeriodicStream final : public SymbolStream {
 public:
  PeriodicStream(Alphabet alphabet, const std::string& pattern) : alphabet_(std::move(alphabet)) {
    for (char c : pattern) pattern_.push_back(alphabet_.index_of(c));
  }
  const Alphabet& alphabet() const noexcept override { return alphabet_; }
  std::size_t read(std::span<Symbol> out) override {
    for (auto& s : out) {
      s = pattern_[pos_];
      pos_ = (pos_ + 1) % pattern_.size();
    }
    return out.size();
  }

 private:
  Alphabet alphabet_;
  std::vector<Symbol> pattern_;
  std::size_t pos_ = 0;
};

// Base-b digits of 0, 1, 2, ... concatenated.
class ChampernowneStream final : public SymbolStream {
 public:
  ChampernowneStream(Alphabet alphabet, unsigned base) : alphabet_(std::move(alphabet)), base_(base) { refill(); }
  const Alphabet& alphabet() const noexcept override { return alphabet_; }
  std::size_t read(std::span<Symbol> out) override {
    for (auto& s : out) {
      if (pos_ == digits_.size()) refill();
      s = digits_[pos_++];
    }
    return out.size();
  }

 private:
  void refill() {
    digits_.clear();
    std::uint64_t v = next_++;
    do {
      digits_.push_back(static_cast<Symbol>(v % base_));
      v /= base_;
    } while (v != 0);
    std::reverse(digits_.begin(), digits_.end());
    pos_ = 0;
  }

  Alphabet alphabet_;
  unsigned base_;
  std::uint64_t next_ = 0;
  std::vector<Symbol> digits_;
  std::size_t pos_ = 0;
};

class BernoulliStream final : public SymbolStream {
 public:
  BernoulliStream(Alphabet alphabet, const Rational& bias, std::uint64_t seed, std::uint64_t stream_id)
      : alphabet_(std::move(alphabet)) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
    engine_.seed(seq);
    // threshold = floor(bias * 2^64)
    mpz_class scaled = bias.get_num();
    scaled <<= 64;
    scaled /= bias.get_den();
    threshold_ = mpz_get_ui(mpz_class(scaled >> 32).get_mpz_t());
    threshold_ = (threshold_ << 32) | mpz_get_ui(mpz_class(scaled & 0xffffffffUL).get_mpz_t());
  }
  const Alphabet& alphabet() const noexcept override { return alphabet_; }
  std::size_t read(std::span<Symbol> out) override {
    for (auto& s : out) s = engine_() < threshold_ ? 1 : 0;
    return out.size();
  }

 private:
  Alphabet alphabet_;
  std::mt19937_64 engine_;
  std::uint64_t threshold_ = 0;
};

class ThueMorseStream final : public SymbolStream {
 public:
  explicit ThueMorseStream(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
  const Alphabet& alphabet() const noexcept override { return alphabet_; }
  std::size_t read(std::span<Symbol> out) override {
    for (auto& s : out) s = static_cast<Symbol>(std::popcount(index_++) & 1);
    return out.size();
  }

 private:
  Alphabet alphabet_;
  std::uint64_t index_ = 0;
};

class FileStream final : public SymbolStream {
 public:
  FileStream(const std::string& path, Alphabet alphabet, bool skip_whitespace)
      : alphabet_(std::move(alphabet)), in_(path, std::ios::binary), skip_ws_(skip_whitespace), path_(path) {
    if (!in_) throw Error(ErrorCode::file_not_readable, path);
  }
  const Alphabet& alphabet() const noexcept override { return alphabet_; }
  std::size_t read(std::span<Symbol> out) override {
    std::size_t n = 0;
    while (n < out.size()) {
      if (buf_pos_ == buf_len_) {
        in_.read(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
        buf_len_ = static_cast<std::size_t>(in_.gcount());
        buf_pos_ = 0;
        if (buf_len_ == 0) break;
      }
      const char c = buffer_[buf_pos_++];
      const std::uint64_t offset = offset_++;
      if (skip_ws_ && std::isspace(static_cast<unsigned char>(c))) continue;
      if (!alphabet_.contains(c))
        throw Error(ErrorCode::bad_symbol, path_ + ": glyph 0x" + hex(c) + " at byte offset " + std::to_string(offset));
      out[n++] = alphabet_.index_of(c);
    }
    return n;
  }

 private:
  static std::string hex(char c) {
    static constexpr char digits[] = "0123456789abcdef";
    const auto u = static_cast<unsigned char>(c);
    return {digits[u >> 4], digits[u & 15]};
  }

  Alphabet alphabet_;
  std::ifstream in_;
  bool skip_ws_;
  std::string path_;
  std::vector<char> buffer_ = std::vector<char>(1 << 16);
  std::size_t buf_pos_ = 0;
  std::size_t buf_len_ = 0;
  std::uint64_t offset_ = 0;
};

class LimitedStream final : public SymbolStream {
 public:
  LimitedStream(std::unique_ptr<SymbolStream> inner, std::uint64_t limit) : inner_(std::move(inner)), left_(limit) {}
  const Alphabet& alphabet() const noexcept override { return inner_->alphabet(); }
  std::size_t read(std::span<Symbol> out) override {
    const auto want = static_cast<std::size_t>(std::min<std::uint64_t>(out.size(), left_));
    if (want == 0) return 0;
    const auto got = inner_->read(out.first(want));
    left_ -= got;
    return got;
  }

 private:
  std::unique_ptr<SymbolStream> inner_;
  std::uint64_t left_;
};

void check_config(const GeneratorConfig& config) {
  if (config.length && *config.length < 1) throw Error(ErrorCode::bad_argument, "generator length must be ≥ 1");
  switch (config.kind) {
    case GeneratorKind::periodic:
      if (config.pattern.empty()) throw Error(ErrorCode::bad_argument, "periodic pattern is empty");
      break;
    case GeneratorKind::champernowne:
      if (config.base < 2 || config.base > digit_glyphs.size())
        throw Error(ErrorCode::bad_argument, "champernowne base must be in 2..36");
      break;
    case GeneratorKind::bernoulli:
      if (sgn(config.bias) <= 0 || config.bias >= 1) throw Error(ErrorCode::bad_argument, "bernoulli bias must lie in (0,1)");
      break;
    case GeneratorKind::thue_morse:
    case GeneratorKind::file:
      break;
  }
}

}  // namespace

GeneratorConfig parse_generator(std::string_view text) {
  const auto parts = split(text, ':');
  GeneratorConfig config;
  const std::string& kind = parts[0];
  if (kind == "periodic") {
    config.kind = GeneratorKind::periodic;
    if (parts.size() != 2) throw Error(ErrorCode::parse_error, "expected periodic:<pattern>");
    config.pattern = parts[1];
  } else if (kind == "champernowne") {
    config.kind = GeneratorKind::champernowne;
    if (parts.size() > 2) throw Error(ErrorCode::parse_error, "expected champernowne[:<base>]");
    if (parts.size() == 2) config.base = static_cast<unsigned>(parse_u64(parts[1], "base"));
  } else if (kind == "bernoulli") {
    config.kind = GeneratorKind::bernoulli;
    if (parts.size() < 2 || parts.size() > 3) throw Error(ErrorCode::parse_error, "expected bernoulli:<p>[:seed<N>]");
    config.bias = parse_rational(parts[1]);
    if (parts.size() == 3) {
      std::string seed = parts[2];
      if (seed.rfind("seed", 0) == 0) seed.erase(0, 4);
      config.seed = parse_u64(seed, "seed");
    }
  } else if (kind == "thue_morse" || kind == "thue-morse" || kind == "thuemorse") {
    config.kind = GeneratorKind::thue_morse;
    if (parts.size() != 1) throw Error(ErrorCode::parse_error, "thue_morse takes no parameters");
  } else if (kind == "file") {
    config.kind = GeneratorKind::file;
    if (parts.size() < 2) throw Error(ErrorCode::parse_error, "expected file:<path>");
    // paths may contain ':'
    config.path = std::string(text.substr(5));
  } else {
    throw Error(ErrorCode::parse_error, "unknown generator kind \"" + kind + "\"");
  }
  check_config(config);
  return config;
}

Alphabet generator_alphabet(const GeneratorConfig& config) {
  switch (config.kind) {
    case GeneratorKind::periodic: {
      std::string glyphs = config.alphabet;
      for (char c : config.pattern)
        if (glyphs.find(c) == std::string::npos) glyphs.push_back(c);
      return Alphabet(glyphs);
    }
    case GeneratorKind::champernowne:
      return Alphabet(digit_glyphs.substr(0, config.base));
    case GeneratorKind::bernoulli:
    case GeneratorKind::thue_morse:
      return Alphabet::binary();
    case GeneratorKind::file:
      return Alphabet(config.alphabet);
  }
  return Alphabet::binary();
}

std::unique_ptr<SymbolStream> generate(const GeneratorConfig& config) {
  check_config(config);
  auto alphabet = generator_alphabet(config);
  std::unique_ptr<SymbolStream> stream;
  switch (config.kind) {
    case GeneratorKind::periodic:
      stream = std::make_unique<PeriodicStream>(alphabet, config.pattern);
      break;
    case GeneratorKind::champernowne:
      stream = std::make_unique<ChampernowneStream>(alphabet, config.base);
      break;
    case GeneratorKind::bernoulli:
      stream = std::make_unique<BernoulliStream>(alphabet, config.bias, config.seed, config.stream_id);
      break;
    case GeneratorKind::thue_morse:
      stream = std::make_unique<ThueMorseStream>(alphabet);
      break;
    case GeneratorKind::file:
      stream = std::make_unique<FileStream>(config.path, alphabet, config.skip_whitespace);
      break;
  }
  if (config.length) stream = std::make_unique<LimitedStream>(std::move(stream), *config.length);
  return stream;
}

std::unique_ptr<SymbolStream> ingest(const std::string& path, const Alphabet& alphabet, bool skip_whitespace) {
  return std::make_unique<FileStream>(path, alphabet, skip_whitespace);
}

nlohmann::json generator_metadata(const GeneratorConfig& config) {
  nlohmann::json meta;
  meta["kind"] = to_string(config.kind);
  meta["alphabet"] = generator_alphabet(config).glyphs();
  if (config.length) meta["length"] = *config.length;
  switch (config.kind) {
    case GeneratorKind::periodic: meta["pattern"] = config.pattern; break;
    case GeneratorKind::champernowne: meta["base"] = config.base; break;
    case GeneratorKind::bernoulli:
      meta["bias"] = to_string(config.bias);
      meta["seed"] = config.seed;
      meta["stream_id"] = config.stream_id;
      meta["algorithm"] = bernoulli_algorithm;
      break;
    case GeneratorKind::thue_morse: break;
    case GeneratorKind::file:
      meta["path"] = config.path;
      meta["skip_whitespace"] = config.skip_whitespace;
      break;
  }
  return meta;
}

}  // namespace galelab
