#include <algorithm>
#include <random>

#include "doctest.h"

#include "galelab/core.hpp"
#include "galelab/verify.hpp"

using namespace galelab;

namespace {

Word w(const char* text) { return Word::parse(Alphabet::binary(), text); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected galelab::Error");
  return ErrorCode::bad_argument;
}

Distribution skewed() {
  return validate_distribution(Alphabet::binary(), 2,
                               {{w("00"), Rational(1, 2)}, {w("01"), Rational(1, 4)}, {w("11"), Rational(1, 4)}});
}

}  // namespace

TEST_CASE("alphabet rejects duplicates and singletons") {
  CHECK(code_of([] { Alphabet("00"); }) == ErrorCode::bad_alphabet);
  CHECK(code_of([] { Alphabet("a"); }) == ErrorCode::bad_alphabet);
  const Alphabet abc("abc");
  CHECK(abc.size() == 3);
  CHECK(abc.index_of('c') == 2);
  CHECK_FALSE(abc.contains('d'));
}

TEST_CASE("word slicing follows half-open indices") {
  const auto x = w("011010");
  CHECK(x.slice(1, 4).str() == "110");
  CHECK(x.slice(3, 3).empty());
  CHECK(w("01").is_prefix_of(x));
  CHECK_FALSE(w("1").is_prefix_of(x));
  CHECK(code_of([] { w("012"); }) == ErrorCode::bad_symbol);
  CHECK(w("1") < w("00"));  // shortlex
}

TEST_CASE("block codes round trip") {
  const Alphabet abc("abc");
  for (const auto& u : all_words(abc, 3)) CHECK(decode_block(abc, encode_block(u.symbols(), 3), 3) == u);
  CHECK(all_words_up_to(Alphabet::binary(), 3).size() == 15);
  CHECK(code_of([] { block_space(2, 64); }) == ErrorCode::table_too_large);
}

TEST_CASE("parse_rational accepts fractions, integers and decimals") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("2") == 2);
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK(code_of([] { parse_rational("1/0"); }) == ErrorCode::parse_error);
  CHECK(code_of([] { parse_rational("x"); }) == ErrorCode::parse_error);
}

TEST_CASE("validate_distribution") {
  const auto bin = Alphabet::binary();
  CHECK(validate_distribution(bin, 1, {{w("0"), Rational(1, 2)}, {w("1"), Rational(1, 2)}}).fully_supported());
  const auto point = validate_distribution(bin, 2, {{w("00"), 1}});
  CHECK(point.support_size() == 1);
  CHECK(point.weight(w("11")) == 0);
  CHECK(code_of([&] { validate_distribution(bin, 1, {{w("0"), Rational(1, 3)}, {w("1"), Rational(1, 3)}}); }) ==
        ErrorCode::sum_not_one);
  CHECK(code_of([&] { validate_distribution(bin, 2, {{w("0"), 1}}); }) == ErrorCode::bad_block_length);
  CHECK(code_of([&] { validate_distribution(bin, 1, {{w("0"), Rational(3, 2)}, {w("1"), Rational(-1, 2)}}); }) ==
        ErrorCode::negative_weight);
}

TEST_CASE("marginal and conditional bets") {
  const auto uni = uniform_distribution(Alphabet::binary(), 2);
  CHECK(marginal(uni, w("0")) == Rational(1, 2));
  CHECK(marginal(skewed(), w("0")) == Rational(3, 4));
  CHECK(marginal(skewed(), w("")) == 1);
  CHECK(code_of([&] { marginal(uni, w("000")); }) == ErrorCode::prefix_too_long);

  CHECK(conditional_bet(uni, w("0"), 1) == Rational(1, 2));
  CHECK(conditional_bet(skewed(), w("0"), 1) == Rational(1, 3));
  const auto only11 = validate_distribution(Alphabet::binary(), 2, {{w("11"), 1}});
  CHECK(code_of([&] { conditional_bet(only11, w("0"), 0); }) == ErrorCode::zero_marginal);
}

TEST_CASE("chain rule and stochastic rows on random distributions") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Alphabet alphabet(trial % 3 == 0 ? "abc" : "01");
    const std::size_t ell = 1 + trial % (alphabet.size() == 3 ? 3 : 5);
    const auto dist = random_positive_distribution(rng, alphabet, ell);
    for (const auto& v : all_words_up_to(alphabet, ell - 1)) {
      Rational sum = 0;
      for (const auto& p : conditional_row(dist, v)) sum += p;
      CHECK(sum == 1);
    }
    for (const auto& block : all_words(alphabet, ell)) {
      Rational product = 1;
      for (std::size_t j = 0; j < ell; ++j) product *= conditional_bet(dist, block.slice(0, j), block[j]);
      CHECK(product == dist.weight(block));
    }
  }
}

TEST_CASE("capital ledger is order independent") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Rational> factors;
    for (int i = 0; i < 12; ++i) factors.push_back(2 * random_probability(rng));
    CapitalLedger a(Rational(1, 2), 1, 2, 1), b(Rational(1, 2), 1, 2, 1);
    for (const auto& f : factors) a.apply(f);
    std::shuffle(factors.begin(), factors.end(), rng);
    for (const auto& f : factors) b.apply(f);
    CHECK(a.mantissa() == b.mantissa());
    CHECK(a.step_count() == 12);
  }
}

TEST_CASE("capital ledger log value") {
  CapitalLedger ledger(1, 1, 2, 1);
  for (int i = 0; i < 3; ++i) ledger.apply(2);
  CHECK(ledger.log2_value() == doctest::Approx(3.0));
  CHECK(ledger.log2_raw() == doctest::Approx(0.0));  // mantissa 8 against 2^3 of fair odds
  ledger.apply(0);
  CHECK(ledger.ruined());
  CHECK(std::isinf(ledger.log2_value()));
  CHECK(log2_of(Rational(1, 1024)) == doctest::Approx(-10.0));
}
