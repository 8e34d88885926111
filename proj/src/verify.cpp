#include "galelab/verify.hpp"

#include <chrono>

#include "galelab/construct.hpp"

namespace galelab {

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

void fail(SuiteReport& r, std::string what) {
  ++r.failures;
  if (!r.counterexample) r.counterexample = std::move(what);
}

std::string show(const Word& w) { return w.empty() ? "λ" : w.str(); }

Rational power(const Rational& base, std::size_t e) {
  Rational out = 1;
  for (std::size_t i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

Rational random_probability(Rng& rng, unsigned max_den) {
  const auto den = uniform(rng, 1, max_den);
  Rational p(static_cast<unsigned long>(uniform(rng, 0, den)), static_cast<unsigned long>(den));
  p.canonicalize();
  return p;
}

std::vector<Rational> random_row(Rng& rng, std::size_t sigma, unsigned max_den) {
  // random composition of den into σ nonnegative parts
  const auto den = uniform(rng, 1, max_den);
  std::vector<std::uint64_t> cuts{0, den};
  for (std::size_t i = 0; i + 1 < sigma; ++i) cuts.push_back(uniform(rng, 0, den));
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rational> row;
  for (std::size_t i = 0; i < sigma; ++i) {
    Rational p(static_cast<unsigned long>(cuts[i + 1] - cuts[i]), static_cast<unsigned long>(den));
    p.canonicalize();
    row.push_back(std::move(p));
  }
  std::shuffle(row.begin(), row.end(), rng);
  return row;
}

GamblerSpec random_gambler(Rng& rng, const Alphabet& alphabet, std::size_t k, std::size_t max_states, bool random_c0) {
  const auto nq = uniform(rng, 1, max_states);
  const auto sigma = alphabet.size();
  std::vector<std::string> labels;
  std::vector<StateId> delta;
  std::vector<BetRows> bets;
  for (std::size_t q = 0; q < nq; ++q) {
    labels.push_back("q" + std::to_string(q));
    for (std::size_t a = 0; a < sigma; ++a) delta.push_back(static_cast<StateId>(uniform(rng, 0, nq - 1)));
    BetRows rows;
    for (std::size_t r = 0; r < k; ++r) rows.push_back(random_row(rng, sigma));
    bets.push_back(std::move(rows));
  }
  Rational c0 = 1;
  if (random_c0) {
    c0 = Rational(static_cast<unsigned long>(uniform(rng, 1, 9)), static_cast<unsigned long>(uniform(rng, 1, 9)));
    c0.canonicalize();
  }
  return GamblerSpec(alphabet, k, std::move(labels), std::move(delta), std::move(bets),
                     static_cast<StateId>(uniform(rng, 0, nq - 1)), c0);
}

Distribution random_positive_distribution(Rng& rng, const Alphabet& alphabet, std::size_t block_length) {
  const auto space = block_space(alphabet.size(), block_length);
  std::vector<std::uint64_t> raw(space);
  std::uint64_t total = 0;
  for (auto& v : raw) total += v = uniform(rng, 1, 50);
  std::map<BlockCode, Rational> weights;
  for (BlockCode c = 0; c < space; ++c) {
    Rational w(static_cast<unsigned long>(raw[c]), static_cast<unsigned long>(total));
    w.canonicalize();
    weights.emplace(c, std::move(w));
  }
  return distribution_from_codes(alphabet, block_length, std::move(weights));
}

Word random_word(Rng& rng, const Alphabet& alphabet, std::size_t max_length) {
  const auto n = uniform(rng, 0, max_length);
  std::vector<Symbol> data(n);
  for (auto& s : data) s = static_cast<Symbol>(uniform(rng, 0, alphabet.size() - 1));
  return Word(alphabet, std::move(data));
}

GamblerSpec random_winning_gambler(Rng& rng, std::size_t k, std::size_t max_states) {
  const auto alphabet = Alphabet::binary();
  const auto nq = uniform(rng, 1, max_states);
  std::vector<std::string> labels;
  std::vector<StateId> delta;
  std::vector<BetRows> bets;
  const std::vector<Rational> fair{Rational(1, 2), Rational(1, 2)};
  for (std::size_t q = 0; q < nq; ++q) {
    labels.push_back("q" + std::to_string(q));
    for (std::size_t a = 0; a < 2; ++a) delta.push_back(static_cast<StateId>(uniform(rng, 0, nq - 1)));
    const auto favourite = static_cast<std::size_t>(uniform(rng, 0, 1));
    std::vector<Rational> all_in(2, Rational(0));
    all_in[favourite] = 1;
    BetRows rows;
    const auto forced = uniform(rng, 0, k - 1);
    for (std::size_t r = 0; r < k; ++r) rows.push_back(r == forced || uniform(rng, 0, 1) ? all_in : fair);
    bets.push_back(std::move(rows));
  }
  return GamblerSpec(alphabet, k, std::move(labels), std::move(delta), std::move(bets), 0, 1);
}

nlohmann::json to_json(const SuiteReport& report) {
  nlohmann::json j{{"suite", report.suite},     {"trials", report.trials}, {"checks", report.checks},
                   {"failures", report.failures}, {"passed", report.passed()}, {"seconds", report.seconds}};
  if (report.counterexample) j["counterexample"] = *report.counterexample;
  return j;
}

SuiteReport verify_gale_spec(const GamblerSpec& spec, const Rational& s, std::size_t depth) {
  Stopwatch clock;
  SuiteReport r;
  r.suite = "gale";
  r.trials = 1;
  const auto oracle = induced_oracle(spec, s);
  for (const auto& w : all_words_up_to(spec.alphabet(), depth)) {
    ++r.checks;
    if (!check_gale_condition(oracle, w)) fail(r, "gale condition fails at w = " + show(w));
  }
  r.seconds = clock.seconds();
  return r;
}

SuiteReport verify_gale_suite(std::uint64_t trials, std::uint64_t seed, std::size_t depth) {
  Stopwatch clock;
  SuiteReport r;
  r.suite = "gale";
  Rng rng(seed);
  const auto binary = Alphabet::binary();
  const auto words = all_words_up_to(binary, depth);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto spec = random_gambler(rng, binary, 1, 8);
    const Rational s(static_cast<unsigned long>(uniform(rng, 0, 8)), 8);
    const auto oracle = induced_oracle(spec, s);
    ++r.trials;
    for (const auto& w : words) {
      ++r.checks;
      if (!check_gale_condition(oracle, w)) fail(r, "trial " + std::to_string(t) + ", w = " + show(w));
    }
  }
  r.seconds = clock.seconds();
  return r;
}

SuiteReport verify_root_suite(std::uint64_t trials, std::uint64_t seed, std::uint64_t words_per_gale,
                              std::size_t max_word_length) {
  Stopwatch clock;
  SuiteReport r;
  r.suite = "root";
  Rng rng(seed);
  const auto binary = Alphabet::binary();
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto k = static_cast<std::size_t>(uniform(rng, 1, 4));
    const Rational s(static_cast<unsigned long>(uniform(rng, 0, 8)), 8);
    GaleOracle oracle;
    if (t % 2 == 0) {
      oracle = induced_oracle(random_gambler(rng, binary, k, 8), s);
    } else {
      // product of independent single-bet gambler gales
      std::vector<GaleOracle> factors;
      for (std::size_t i = 0; i < k; ++i) factors.push_back(induced_oracle(random_gambler(rng, binary, 1, 8), s));
      oracle = product_oracle(std::move(factors));
    }
    ++r.trials;
    for (std::uint64_t i = 0; i < words_per_gale; ++i) {
      const auto w = random_word(rng, binary, max_word_length);
      ++r.checks;
      if (!check_root_supergale(oracle, w))
        fail(r, "trial " + std::to_string(t) + " (k=" + std::to_string(k) + "), w = " + show(w));
    }
  }
  r.seconds = clock.seconds();
  return r;
}

SuiteReport verify_kraft_suite(std::uint64_t trials, std::uint64_t seed, std::size_t antichain_depth,
                               std::size_t anchor_depth) {
  Stopwatch clock;
  SuiteReport r;
  r.suite = "kraft";
  Rng rng(seed);
  const auto binary = Alphabet::binary();
  const auto sets = enumerate_prefix_sets(antichain_depth);
  const auto anchors = all_words_up_to(binary, anchor_depth);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto k = static_cast<std::size_t>(uniform(rng, 1, 4));
    const Rational s(static_cast<unsigned long>(uniform(rng, 0, 8)), 8);
    const auto oracle = induced_oracle(random_gambler(rng, binary, k, 6), s);
    ++r.trials;
    for (const auto& w : anchors)
      for (std::size_t b = 0; b < sets.size(); ++b) {
        ++r.checks;
        if (!check_kraft_inequality(oracle, w, sets[b]))
          fail(r, "trial " + std::to_string(t) + ", w = " + show(w) + ", antichain #" + std::to_string(b));
      }
  }
  r.seconds = clock.seconds();
  return r;
}

SuiteReport verify_cover_suite(std::uint64_t trials, std::uint64_t seed) {
  Stopwatch clock;
  SuiteReport r;
  r.suite = "cover";
  Rng rng(seed);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto k = static_cast<std::size_t>(uniform(rng, 1, 3));
    const auto spec = random_winning_gambler(rng, k, 4);
    const auto oracle = induced_oracle(spec, 1);
    const auto n_target = static_cast<std::size_t>(uniform(rng, 1, 3));
    const auto min_length = static_cast<std::size_t>(uniform(rng, 1, 3));
    ++r.trials;
    const std::string tag = "trial " + std::to_string(t);
    try {
      const auto cert = extract_cover(oracle, n_target, min_length, 30);
      ++r.checks;
      if (!cert.complete) fail(r, tag + ": search did not complete");
      if (!cert.valid()) fail(r, tag + ": kraft_sum " + std::to_string(cert.kraft_sum) + " > bound");
      for (const auto& w : cert.members.members()) {
        ++r.checks;
        if (oracle.evaluate(w).log2_value() < cert.threshold_log2) fail(r, tag + ": member " + show(w) + " below threshold");
        for (std::size_t i = 0; i < w.size(); ++i)
          if (oracle.evaluate(w.slice(0, i)).log2_value() >= cert.threshold_log2)
            fail(r, tag + ": member " + show(w) + " has a covered proper prefix");
      }
    } catch (const Error& e) {
      fail(r, tag + ": " + e.what());
    }
  }
  r.seconds = clock.seconds();
  return r;
}

SuiteReport verify_construct_suite(std::uint64_t trials, std::uint64_t seed) {
  Stopwatch clock;
  SuiteReport r;
  r.suite = "construct";
  Rng rng(seed);
  const auto binary = Alphabet::binary();
  const Alphabet ternary("012");
  for (std::uint64_t t = 0; t < trials; ++t) {
    ++r.trials;
    const std::string tag = "trial " + std::to_string(t);
    const bool use_ternary = t % 4 == 3;
    const auto& alphabet = use_ternary ? ternary : binary;
    const auto ell = static_cast<std::size_t>(uniform(rng, 1, use_ternary ? 3 : 5));
    const auto dist = random_positive_distribution(rng, alphabet, ell);
    const auto sigma = alphabet.size();

    const auto disjoint = build_disjoint_gambler(dist);
    for (const auto& w : all_words(alphabet, ell)) {
      ++r.checks;
      if (cumulative_block_bet(disjoint, disjoint.start(), w) != dist.weight(w))
        fail(r, tag + ": disjoint cumulative bet differs on " + show(w));
    }

    // sliding: mantissa = σ^{ℓn}·σ^{-ℓ(ℓ-1)/2}·Π_windows ℙ(w)·Π_open-windows ℙ(prefix)
    const auto sliding = build_sliding_gambler(dist);
    const auto x = random_word(rng, alphabet, 40);
    if (x.size() >= ell) {
      Rational expected = 1;
      for (std::size_t i = 0; i + ell <= x.size(); ++i) expected *= dist.weight(x.slice(i, i + ell));
      for (std::size_t i = x.size() - ell + 1; i < x.size(); ++i) expected *= marginal(dist, x.slice(i, x.size()));
      const auto sigma_ul = static_cast<unsigned long>(sigma);
      Rational scale = power(Rational(sigma_ul), ell * x.size());
      scale /= power(Rational(sigma_ul), ell * (ell - 1) / 2);
      expected *= scale;
      expected.canonicalize();
      ++r.checks;
      if (evaluate_capital(sliding, 1, x).mantissa() != expected)
        fail(r, tag + ": sliding mantissa differs from window product on " + show(x));
    }

    const auto base = random_gambler(rng, alphabet, static_cast<std::size_t>(uniform(rng, 1, 3)), 6);
    const auto y = random_word(rng, alphabet, 30);
    const auto phases = static_cast<std::size_t>(uniform(rng, 1, 5));
    const auto extended = extend_phase(base, phases);
    const auto s = Rational(static_cast<unsigned long>(uniform(rng, 0, 8)), 8);
    const auto t0 = run(base, s, y);
    const auto t1 = run(extended, s, y);
    for (std::size_t i = 0; i < t0.ledgers.size(); ++i) {
      ++r.checks;
      if (t0.ledgers[i].mantissa() != t1.ledgers[i].mantissa() ||
          t0.ledgers[i].step_count() != t1.ledgers[i].step_count())
        fail(r, tag + ": extend_phase trajectory differs at prefix " + std::to_string(i));
    }
    const auto copies = static_cast<std::size_t>(uniform(rng, 1, 3));
    const auto replicated = replicate_bets(base, copies);
    ++r.checks;
    if (evaluate_capital(replicated, s, y).mantissa() != power(evaluate_capital(base, s, y).mantissa(), copies))
      fail(r, tag + ": replicate_bets mantissa is not the m-th power on " + show(y));
  }
  r.seconds = clock.seconds();
  return r;
}

SuiteReport run_suite(std::string_view name, std::uint64_t trials, std::uint64_t seed) {
  if (name == "gale") return verify_gale_suite(trials, seed);
  if (name == "root") return verify_root_suite(trials, seed);
  if (name == "kraft") return verify_kraft_suite(trials, seed);
  if (name == "cover") return verify_cover_suite(trials, seed);
  if (name == "construct") return verify_construct_suite(trials, seed);
  throw Error(ErrorCode::bad_argument, "unknown suite \"" + std::string(name) + "\"");
}

}  // namespace galelab
