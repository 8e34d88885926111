#include <cmath>

#include "doctest.h"
#include "oracle.hpp"

#include "galelab/construct.hpp"
#include "galelab/seqgen.hpp"
#include "galelab/verify.hpp"

using namespace galelab;

namespace {

const Alphabet bin = Alphabet::binary();
Word w(const std::string& text) { return Word::parse(bin, text); }

Distribution dist2(Rational p00, Rational p01, Rational p10, Rational p11) {
  return validate_distribution(bin, 2, {{w("00"), p00}, {w("01"), p01}, {w("10"), p10}, {w("11"), p11}});
}

Rational power(Rational b, std::size_t e) {
  Rational out = 1;
  while (e--) out *= b;
  return out;
}

}  // namespace

TEST_CASE("empirical_block_distribution") {
  auto periodic = generate(parse_generator("periodic:01"));
  const auto p = empirical_block_distribution(*periodic, 2, BlockMode::disjoint, 4000);
  CHECK(p.support_size() == 1);
  CHECK(p.weight(w("01")) == 1);

  const auto s = empirical_block_distribution(w("0110"), 2, BlockMode::sliding);
  CHECK(s.weight(w("01")) == Rational(1, 3));
  CHECK(s.weight(w("11")) == Rational(1, 3));
  CHECK(s.weight(w("10")) == Rational(1, 3));
  const auto d = empirical_block_distribution(w("0110"), 2, BlockMode::disjoint);
  CHECK(d.weight(w("01")) == Rational(1, 2));
  CHECK(d.weight(w("10")) == Rational(1, 2));
}

TEST_CASE("rationalize_distribution") {
  const auto uni = uniform_distribution(bin, 2);
  CHECK(rationalize_distribution(uni, {Rational(1, 10), Rational(1, 100)}).weights() == uni.weights());

  const auto point = validate_distribution(bin, 2, {{w("01"), 1}});
  const auto smooth = rationalize_distribution(point, {Rational(1, 10), Rational(1, 100)});
  CHECK(smooth.weight(w("01")) == Rational(97, 100));
  CHECK(smooth.weight(w("00")) == Rational(1, 100));
  CHECK(smooth.weight(w("10")) == Rational(1, 100));
  CHECK(smooth.weight(w("11")) == Rational(1, 100));

  try {
    rationalize_distribution(point, {Rational(1, 10), Rational(1, 2)});
    FAIL("expected FloorTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::floor_too_large);
  }
  // a block just above the floor can be pushed below it by the shave; it is pinned too
  const auto fragile = dist2(Rational(1, 99), Rational(98, 99), 0, 0);
  const auto pinned = rationalize_distribution(fragile, {Rational(1, 2), Rational(1, 100)});
  Rational sum = 0;
  for (const auto& [_, v] : pinned.weights()) {
    CHECK(v >= Rational(1, 100));
    sum += v;
  }
  CHECK(sum == 1);
}

TEST_CASE("rationalize_distribution guards the distortion bound") {
  const auto small = dist2(Rational(1, 2), Rational(1, 2), 0, 0);
  try {
    rationalize_distribution(small, {Rational(1, 10), Rational(1, 5)});
    FAIL("expected DistortionTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::distortion_too_large);
  }
}

TEST_CASE("disjoint builder") {
  const auto one = validate_distribution(bin, 1, {{w("0"), Rational(1, 4)}, {w("1"), Rational(3, 4)}});
  const auto g1 = build_disjoint_gambler(one);
  CHECK(g1.state_count() == 1);
  CHECK(g1.bets(0)[0] == std::vector<Rational>{Rational(1, 4), Rational(3, 4)});
  // ℓ=1, ℙ(1)=3/4, s=1 on 1101: d = 2^4·(3/4)^3·(1/4) = 27/16
  CHECK(evaluate_capital(g1, 1, w("1101")).mantissa() == Rational(27, 16));

  const auto g2 = build_disjoint_gambler(uniform_distribution(bin, 2));
  CHECK(g2.state_count() == 3);
  for (StateId q = 0; q < 3; ++q) CHECK(g2.bets(q)[0] == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});

  const auto skew = dist2(Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 8));
  const auto g = build_disjoint_gambler(skew);
  CHECK(cumulative_block_bet(g, g.start(), w("01")) == Rational(1, 4));
  CHECK(build_disjoint_gambler(uniform_distribution(Alphabet("abc"), 3)).state_count() == 13);

  try {
    build_disjoint_gambler(validate_distribution(bin, 2, {{w("01"), 1}}));
    FAIL("expected ZeroMassBlock");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::zero_mass_block);
  }
  CHECK(g.provenance.at("construction") == "disjoint");
}

TEST_CASE("disjoint log-capital identity") {
  Rng rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t ell = 1 + trial % 4;
    const auto dist = random_positive_distribution(rng, bin, ell);
    const auto g = build_disjoint_gambler(dist);
    auto src = generate(parse_generator(("bernoulli:1/3:seed" + std::to_string(trial)).c_str()));
    const auto x = take(*src, 10000 - 10000 % ell);
    const auto counts = oracle::count_blocks(x.str(), ell, false);
    const double s = 0.7;
    double formula = 0;
    for (const auto& [block, n] : counts) formula += n * (s * ell + log2_of(dist.weight(w(block))));
    const double direct = run_log(g, s, x.symbols(), x.size()).log2_capital.back();
    CHECK(direct == doctest::Approx(formula).epsilon(1e-9));
  }
}

TEST_CASE("sliding builder") {
  const auto one = validate_distribution(bin, 1, {{w("0"), Rational(1, 4)}, {w("1"), Rational(3, 4)}});
  CHECK(to_json(build_sliding_gambler(one)).at("beta") == to_json(build_disjoint_gambler(one)).at("beta"));
  CHECK(to_json(build_sliding_gambler(one)).at("delta") == to_json(build_disjoint_gambler(one)).at("delta"));

  const auto uni = build_sliding_gambler(uniform_distribution(bin, 2));
  CHECK(uni.k() == 2);
  CHECK(evaluate_capital(uni, 1, w("0110100110")).mantissa() == 1);

  // X↾5 = 00101: windows 00,01,10,01 plus the open window "1" at the end and
  // one fair warm-up bet, against the fair-odds factor 2^{ℓ·n}.
  const auto skew = dist2(Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 8));
  const auto g = build_sliding_gambler(skew);
  const Rational windows = Rational(1, 2) * Rational(1, 4) * Rational(1, 8) * Rational(1, 4);
  const Rational tail = marginal(skew, w("1"));
  CHECK(evaluate_capital(g, 1, w("00101")).mantissa() == power(4, 5) * windows * tail / 2);
}

TEST_CASE("sliding boundary bound") {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t ell = 2 + trial % 3;
    const auto dist = random_positive_distribution(rng, bin, ell);
    const auto g = build_sliding_gambler(dist);
    auto src = generate(parse_generator(("bernoulli:1/4:seed" + std::to_string(trial)).c_str()));
    const auto x = take(*src, 10000);
    double interior = 0, worst = 0;
    for (const auto& [code, p] : dist.weights()) worst = std::max(worst, std::fabs(log2_of(p)));
    for (const auto& [block, n] : oracle::count_blocks(x.str(), ell, true)) interior += n * log2_of(dist.weight(w(block)));
    // at s = 0 the log-capital is the log of the raw bet product
    const double raw = run_log(g, 0.0, x.symbols(), x.size()).log2_capital.back();
    CHECK(std::fabs(raw - interior) <= 2 * ell * worst);
  }
}

TEST_CASE("extend_phase") {
  Rng rng(41);
  const auto base = random_gambler(rng, bin, 2, 4);
  CHECK(to_json(extend_phase(base, 1)).at("beta") == to_json(base).at("beta"));
  CHECK(extend_phase(base, 5).state_count() == base.state_count() * 5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = random_gambler(rng, bin, 1 + trial % 3, 5);
    const auto x = random_word(rng, bin, 30);
    const auto a = run(spec, Rational(1, 2), x);
    const auto b = run(extend_phase(spec, 3), Rational(1, 2), x);
    for (std::size_t i = 0; i < a.ledgers.size(); ++i) CHECK(a.ledgers[i].mantissa() == b.ledgers[i].mantissa());
  }
  CHECK_THROWS_AS(extend_phase(base, 0), Error);
}

TEST_CASE("replicate_bets") {
  const auto fair = constant_gambler(bin, {Rational(1, 2), Rational(1, 2)});
  CHECK(to_json(replicate_bets(fair, 1)).at("beta") == to_json(fair).at("beta"));
  const auto fair2 = replicate_bets(fair, 2);
  CHECK(fair2.k() == 2);
  const auto x = w("0110100110");
  CHECK(evaluate_capital(fair2, 1, x).mantissa() == 1);

  const auto all_in = constant_gambler(bin, {Rational(0), Rational(1)});
  const auto squared = replicate_bets(all_in, 2);
  CHECK(evaluate_capital(squared, 1, w("111")).mantissa() == 64);
  CHECK(evaluate_capital(squared, 1, w("111")).log2_value() == doctest::Approx(6.0));

  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = random_gambler(rng, bin, 1 + trial % 2, 5);
    const auto m = static_cast<std::size_t>(1 + trial % 3);
    const auto y = random_word(rng, bin, 20);
    CHECK(evaluate_capital(replicate_bets(spec, m), 1, y).mantissa() == power(evaluate_capital(spec, 1, y).mantissa(), m));
  }
}
