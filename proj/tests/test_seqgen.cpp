#include <cmath>

#include "doctest.h"
#include "oracle.hpp"

#include "galelab/seqgen.hpp"

using namespace galelab;

#ifndef GALELAB_FIXTURES
#define GALELAB_FIXTURES "tests/fixtures"
#endif

namespace {

std::string first(const char* spec, std::uint64_t n) {
  auto s = generate(parse_generator(spec));
  return take(*s, n).str();
}

}  // namespace

TEST_CASE("generator examples") {
  CHECK(first("periodic:01", 6) == "010101");
  CHECK(first("champernowne:2", 10) == "0110111001");
  CHECK(first("thue_morse", 8) == "01101001");
  CHECK(first("thue-morse", 4096) == oracle::thue_morse(4096));
  CHECK(first("champernowne", 5000) == oracle::champernowne2(5000));
}

TEST_CASE("champernowne in other bases uses digit glyphs") {
  CHECK(first("champernowne:3", 12) == "012101112202");
  CHECK(generator_alphabet(parse_generator("champernowne:10")).size() == 10);
}

TEST_CASE("parse_generator") {
  const auto b = parse_generator("bernoulli:1/4:seed42");
  CHECK(b.kind == GeneratorKind::bernoulli);
  CHECK(b.bias == Rational(1, 4));
  CHECK(b.seed == 42);
  CHECK(parse_generator("periodic:abc").pattern == "abc");
  CHECK(parse_generator("file:data.txt").path == "data.txt");
  CHECK_THROWS_AS(parse_generator("bernoulli:0"), Error);
  CHECK_THROWS_AS(parse_generator("bernoulli:1"), Error);
  CHECK_THROWS_AS(parse_generator("champernowne:1"), Error);
  CHECK_THROWS_AS(parse_generator("nonsense"), Error);
}

TEST_CASE("bernoulli streams are reproducible and split by stream id") {
  CHECK(first("bernoulli:1/4:seed9", 10000) == first("bernoulli:1/4:seed9", 10000));
  CHECK(first("bernoulli:1/4:seed9", 10000) != first("bernoulli:1/4:seed10", 10000));
  auto cfg = parse_generator("bernoulli:1/4:seed9");
  cfg.stream_id = 1;
  auto s = generate(cfg);
  CHECK(take(*s, 10000).str() != first("bernoulli:1/4:seed9", 10000));
  const auto meta = generator_metadata(parse_generator("bernoulli:1/4:seed9"));
  CHECK(meta.at("algorithm") == std::string(bernoulli_algorithm));
  CHECK(meta.at("seed") == 9);
}

TEST_CASE("bernoulli frequency") {
  const auto x = first("bernoulli:1/4:seed1", 200000);
  const double ones = static_cast<double>(std::count(x.begin(), x.end(), '1')) / x.size();
  CHECK(std::fabs(ones - 0.25) < 0.005);
}

TEST_CASE("read chunking does not change the stream") {
  auto a = generate(parse_generator("bernoulli:1/3:seed5"));
  auto b = generate(parse_generator("bernoulli:1/3:seed5"));
  std::vector<Symbol> big(4000), small(7);
  CHECK(a->read(big) == 4000);
  std::vector<Symbol> joined;
  while (joined.size() < 4000) {
    const auto got = b->read(std::span(small).first(std::min<std::size_t>(7, 4000 - joined.size())));
    joined.insert(joined.end(), small.begin(), small.begin() + got);
  }
  CHECK(joined == big);
}

TEST_CASE("length limit") {
  auto cfg = parse_generator("periodic:011");
  cfg.length = 5;
  auto s = generate(cfg);
  CHECK(take(*s, 100).str() == "01101");
}

TEST_CASE("champernowne block frequencies") {
  // Every number starts with a 1, so at n = 10^6 (numbers of ~17 bits) blocks
  // rich in ones are over-represented by roughly 1/34; convergence to 2^-ℓ is
  // logarithmic. The generator must match the brute-force count exactly.
  const std::uint64_t n = 1000000;
  const auto x = first("champernowne:2", n);
  REQUIRE(x == oracle::champernowne2(n));
  for (std::size_t ell = 1; ell <= 4; ++ell) {
    const auto counts = oracle::count_blocks(x, ell, true);
    CHECK(counts.size() == (1u << ell));
    double worst = 0;
    for (const auto& [block, c] : counts)
      worst = std::max(worst, std::fabs(static_cast<double>(c) / (n - ell + 1) - std::pow(2.0, -double(ell))));
    CHECK(worst <= 0.035);
  }
  const double ones = static_cast<double>(std::count(x.begin(), x.end(), '1')) / n;
  CHECK(ones == doctest::Approx(0.5 + 1.0 / 34).epsilon(0.01));
}

TEST_CASE("ingest") {
  const std::string dir = GALELAB_FIXTURES;
  auto s = ingest(dir + "/short.txt", Alphabet::binary());
  CHECK(take(*s, 100).str() == "010101101");

  auto strict = ingest(dir + "/short.txt", Alphabet::binary(), false);
  CHECK_THROWS_AS(take(*strict, 100), Error);

  auto bad = ingest(dir + "/bad_symbol.txt", Alphabet::binary());
  try {
    take(*bad, 100);
    FAIL("expected BadSymbol");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::bad_symbol);
    CHECK(std::string(e.what()).find("offset 2") != std::string::npos);
  }
  try {
    ingest(dir + "/missing.txt", Alphabet::binary());
    FAIL("expected FileNotReadable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::file_not_readable);
  }
}
