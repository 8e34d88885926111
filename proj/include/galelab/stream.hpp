#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "galelab/core.hpp"

namespace galelab {

/// Single-consumer cursor over a (possibly unbounded) symbol sequence.
class SymbolStream {
 public:
  virtual ~SymbolStream() = default;

  virtual const Alphabet& alphabet() const noexcept = 0;
  /// Fills up to out.size() symbols; returns how many were written. 0 means exhausted.
  virtual std::size_t read(std::span<Symbol> out) = 0;
};

/// Streams the symbols of an in-memory word.
class WordStream final : public SymbolStream {
 public:
  explicit WordStream(Word word) : word_(std::move(word)) {}

  const Alphabet& alphabet() const noexcept override { return word_.alphabet(); }
  std::size_t read(std::span<Symbol> out) override;

 private:
  Word word_;
  std::size_t pos_ = 0;
};

/// Reads up to `limit` symbols into a word.
Word take(SymbolStream& stream, std::uint64_t limit);

}  // namespace galelab
