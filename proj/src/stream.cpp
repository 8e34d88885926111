#include "galelab/stream.hpp"

#include <algorithm>

namespace galelab {

std::size_t WordStream::read(std::span<Symbol> out) {
  const auto syms = word_.symbols();
  const std::size_t n = std::min(out.size(), syms.size() - pos_);
  std::copy_n(syms.begin() + static_cast<std::ptrdiff_t>(pos_), n, out.begin());
  pos_ += n;
  return n;
}

Word take(SymbolStream& stream, std::uint64_t limit) {
  std::vector<Symbol> data;
  std::vector<Symbol> buf(1 << 16);
  while (data.size() < limit) {
    const auto want = static_cast<std::size_t>(std::min<std::uint64_t>(buf.size(), limit - data.size()));
    const auto got = stream.read(std::span(buf).first(want));
    if (got == 0) break;
    data.insert(data.end(), buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(got));
  }
  return Word(stream.alphabet(), std::move(data));
}

}  // namespace galelab
