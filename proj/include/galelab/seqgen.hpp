#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "galelab/core.hpp"
#include "galelab/stream.hpp"

namespace galelab {

enum class GeneratorKind { periodic, champernowne, bernoulli, thue_morse, file };

std::string_view to_string(GeneratorKind kind);

struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::periodic;
  std::string pattern = "01";          // periodic
  unsigned base = 2;                   // champernowne
  Rational bias = Rational(1, 2);      // bernoulli: probability of the second glyph
  std::uint64_t seed = 0;              // bernoulli
  std::uint64_t stream_id = 0;         // bernoulli: split index
  std::string path;                    // file
  std::string alphabet = "01";         // file, periodic
  bool skip_whitespace = true;         // file
  std::optional<std::uint64_t> length; // unset: unbounded (file: until EOF)
};

/// Parses the inline generator syntax, e.g. "periodic:01", "champernowne:2",
/// "bernoulli:1/4:seed42", "thue_morse", "file:data.txt".
GeneratorConfig parse_generator(std::string_view text);

/// Alphabet the configured source emits.
Alphabet generator_alphabet(const GeneratorConfig& config);

/// Deterministic stream for a configuration.
std::unique_ptr<SymbolStream> generate(const GeneratorConfig& config);

/// Streaming file reader. With skip_whitespace off, whitespace is a bad symbol.
std::unique_ptr<SymbolStream> ingest(const std::string& path, const Alphabet& alphabet, bool skip_whitespace = true);

/// Sidecar metadata: the configuration plus the pseudo-random algorithm id.
nlohmann::json generator_metadata(const GeneratorConfig& config);

inline constexpr std::string_view bernoulli_algorithm = "mt19937_64/threshold";

}  // namespace galelab
