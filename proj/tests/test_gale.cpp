#include <set>

#include "doctest.h"

#include "galelab/gale.hpp"
#include "galelab/gambler.hpp"
#include "galelab/verify.hpp"

using namespace galelab;

namespace {

const Alphabet bin = Alphabet::binary();
Word w(const std::string& text) { return Word::parse(bin, text); }

GaleOracle constant(const std::vector<Rational>& row, std::size_t k = 1, Rational s = 1) {
  return induced_oracle(constant_gambler(bin, row, k), s);
}

// Brute-force antichain enumeration: every subset of {0,1}^{≤d} with no member
// prefixing another.
std::set<std::set<std::string>> brute_antichains(std::size_t d) {
  const auto words = all_words_up_to(bin, d);
  std::set<std::set<std::string>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << words.size()); ++mask) {
    std::vector<Word> chosen;
    for (std::size_t i = 0; i < words.size(); ++i)
      if (mask >> i & 1) chosen.push_back(words[i]);
    bool ok = true;
    for (std::size_t i = 0; ok && i < chosen.size(); ++i)
      for (std::size_t j = 0; ok && j < chosen.size(); ++j)
        if (i != j && chosen[i].is_prefix_of(chosen[j])) ok = false;
    if (!ok) continue;
    std::set<std::string> s;
    for (const auto& u : chosen) s.insert(u.empty() ? "λ" : u.str());
    out.insert(s);
  }
  return out;
}

}  // namespace

TEST_CASE("gale condition examples") {
  const auto fair = constant({Rational(1, 2), Rational(1, 2)});
  for (const auto& u : all_words_up_to(bin, 4)) CHECK(check_gale_condition(fair, u));
  const auto all_in = constant({Rational(0), Rational(1)});
  CHECK(check_gale_condition(all_in, w("1")));
  CHECK(check_gale_condition(all_in, w("")));

  GaleOracle length;
  length.evaluate = [](const Word& u) { return CapitalLedger(1, 1, 2, static_cast<unsigned long>(u.size()), u.size()); };
  CHECK_FALSE(check_gale_condition(length, w("")));

  CHECK_THROWS_AS(check_gale_condition(constant({Rational(1, 2), Rational(1, 2)}, 2), w("")), Error);
}

TEST_CASE("gale condition on ternary alphabets") {
  Rng rng(2);
  const Alphabet abc("abc");
  const auto o = induced_oracle(random_gambler(rng, abc, 1, 4), Rational(2, 3));
  for (const auto& u : all_words_up_to(abc, 3)) CHECK(check_gale_condition(o, u));
}

TEST_CASE("root supergale examples") {
  const auto fair = constant({Rational(1, 2), Rational(1, 2)});
  CHECK(check_root_supergale(fair, w("0101")));
  const auto doomed = product_oracle({constant({Rational(0), Rational(1)}), constant({Rational(1), Rational(0)})});
  CHECK(doomed.k_factors == 2);
  CHECK(check_root_supergale(doomed, w("")));
  Rng rng(13);
  std::vector<GaleOracle> three;
  for (int i = 0; i < 3; ++i) three.push_back(induced_oracle(random_gambler(rng, bin, 1, 5), 1));
  const auto product = product_oracle(three);
  for (int i = 0; i < 1000; ++i) CHECK(check_root_supergale(product, random_word(rng, bin, 8)));
}

TEST_CASE("enumerate_prefix_sets") {
  CHECK(enumerate_prefix_sets(0).size() == 2);
  CHECK(enumerate_prefix_sets(1).size() == 5);
  CHECK(enumerate_prefix_sets(2).size() == 26);
  CHECK(count_prefix_sets(3) == 677);
  CHECK(count_prefix_sets(4) == 458330);
  CHECK_THROWS_AS(enumerate_prefix_sets(5), Error);
  for (std::size_t d = 0; d <= 3; ++d) {
    std::set<std::set<std::string>> got;
    for (const auto& b : enumerate_prefix_sets(d)) {
      std::set<std::string> s;
      for (const auto& u : b.members()) s.insert(u.empty() ? "λ" : u.str());
      got.insert(s);
    }
    CHECK(got == brute_antichains(d));
  }
}

TEST_CASE("prefix sets reject chains") { CHECK_THROWS_AS(PrefixSet({w("0"), w("01")}), Error); }

TEST_CASE("kraft inequality examples") {
  const auto fair = constant({Rational(1, 2), Rational(1, 2)});
  CHECK(check_kraft_inequality(fair, w(""), PrefixSet({w("0"), w("1")})));
  CHECK(check_kraft_inequality(fair, w("01"), PrefixSet()));
  Rng rng(17);
  const auto product = induced_oracle(random_gambler(rng, bin, 2, 5), Rational(1, 2));
  const auto sets = enumerate_prefix_sets(3);
  for (const auto& anchor : all_words_up_to(bin, 2))
    for (const auto& b : sets) CHECK(check_kraft_inequality(product, anchor, b));
}

TEST_CASE("kraft inequality detects a supergale violation") {
  // d(w) = 2^{|w|} at s = 0 is far from a gale: Σ_{B={0,1}} d(wu) = 4·d(w)
  GaleOracle growing;
  growing.s_param = 0;
  growing.evaluate = [](const Word& u) {
    Rational m = 1;
    for (std::size_t i = 0; i < u.size(); ++i) m *= 4;
    return CapitalLedger(0, 1, 2, m, u.size());
  };
  CHECK_FALSE(check_kraft_inequality(growing, w(""), PrefixSet({w("0"), w("1")})));
}

TEST_CASE("extract_cover: all-in-on-1 gambler") {
  const auto o = constant({Rational(0), Rational(1)});
  const auto cert = extract_cover(o, 1, 1, 20);
  REQUIRE(cert.members.size() == 1);
  CHECK(cert.members.members()[0].str() == "111");
  CHECK(cert.kraft_sum == doctest::Approx(0.125));
  CHECK(cert.bound == doctest::Approx(0.5));
  CHECK(std::exp2(cert.a_log2) == doctest::Approx(3.0));
  CHECK(std::exp2(cert.threshold_log2) == doctest::Approx(6.0));
  CHECK(cert.complete);
  CHECK(cert.valid());
  const auto j = to_json(cert);
  CHECK(j.at("members") == nlohmann::json::array({"111"}));
  CHECK(j.at("kraft_sum").is_string());
}

TEST_CASE("extract_cover: flat capital never reaches the threshold") {
  try {
    extract_cover(constant({Rational(1, 2), Rational(1, 2)}), 1, 1, 12);
    FAIL("expected ThresholdNeverReached");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::threshold_never_reached);
  }
}

TEST_CASE("extract_cover: members are minimal and the sum is bounded") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto o = induced_oracle(random_winning_gambler(rng, 2, 4), 1);
    const auto cert = extract_cover(o, 2, 1, 30);
    CHECK(cert.complete);
    CHECK(cert.kraft_sum <= 0.25);
    for (const auto& u : cert.members.members()) {
      CHECK(o.evaluate(u).log2_value() >= cert.threshold_log2);
      for (std::size_t i = 0; i < u.size(); ++i) CHECK(o.evaluate(u.slice(0, i)).log2_value() < cert.threshold_log2);
    }
  }
}

TEST_CASE("extract_cover requires unit initial capital") {
  const auto o = induced_oracle(constant_gambler(bin, {Rational(0), Rational(1)}, 1, 2), 1);
  CHECK_THROWS_AS(extract_cover(o, 1, 1, 10), Error);
}
