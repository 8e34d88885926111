#include "galelab/gale.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace galelab {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log2(Σ 2^{t_i}), tolerating -inf terms.
double log2_sum_exp2(const std::vector<double>& terms) {
  double hi = neg_inf;
  for (double t : terms) hi = std::max(hi, t);
  if (hi == neg_inf) return neg_inf;
  double acc = 0.0;
  for (double t : terms) acc += std::exp2(t - hi);
  return hi + std::log2(acc);
}

double root_log2(const GaleOracle& oracle, const Word& w) {
  return oracle.evaluate(w).log2_value() / static_cast<double>(oracle.k_factors);
}

void require_binary(const GaleOracle& oracle, const char* what) {
  if (oracle.alphabet.size() != 2) throw Error(ErrorCode::bad_argument, std::string(what) + " is stated for binary alphabets");
  if (oracle.k_factors == 0) throw Error(ErrorCode::bad_argument, "k_factors must be positive");
}

std::string decimal(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

bool check_gale_condition(const GaleOracle& oracle, const Word& w, double /*tol*/) {
  // Ledgers always carry the exact mantissa, so the tolerance is never needed here.
  if (oracle.k_factors != 1) throw Error(ErrorCode::not_single_factor, "k_factors = " + std::to_string(oracle.k_factors));
  const auto sigma = oracle.alphabet.size();
  Rational children = 0;
  for (std::size_t a = 0; a < sigma; ++a) children += oracle.evaluate(w.extended(static_cast<Symbol>(a))).mantissa();
  children /= static_cast<unsigned long>(sigma);
  return oracle.evaluate(w).mantissa() == children;
}

bool check_root_supergale(const GaleOracle& oracle, const Word& w, double tol) {
  require_binary(oracle, "the root-supergale inequality");
  const double lhs = log2_sum_exp2({root_log2(oracle, w.extended(0)), root_log2(oracle, w.extended(1))});
  if (lhs == neg_inf) return true;
  const double rhs = oracle.s_param.get_d() + root_log2(oracle, w);
  return lhs <= rhs + tol;
}

PrefixSet::PrefixSet(std::vector<Word> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  for (std::size_t i = 0; i < members_.size(); ++i)
    for (std::size_t j = i + 1; j < members_.size(); ++j)
      if (members_[i].is_prefix_of(members_[j]))
        throw Error(ErrorCode::not_antichain, "\"" + members_[i].str() + "\" prefixes \"" + members_[j].str() + "\"");
}

std::uint64_t count_prefix_sets(std::size_t max_depth) {
  if (max_depth > 5) throw Error(ErrorCode::depth_too_large, "count overflows past depth 5");
  std::uint64_t f = 2;
  for (std::size_t d = 1; d <= max_depth; ++d) f = f * f + 1;
  return f;
}

std::vector<PrefixSet> enumerate_prefix_sets(std::size_t max_depth) {
  if (max_depth > 4) throw Error(ErrorCode::depth_too_large, "max_depth must be ≤ 4");
  const auto binary = Alphabet::binary();
  // Antichains of the depth-d tree as symbol sequences relative to its root.
  using Members = std::vector<std::vector<Symbol>>;
  std::vector<Members> level{Members{}, Members{{}}};
  for (std::size_t d = 1; d <= max_depth; ++d) {
    std::vector<Members> next;
    next.reserve(level.size() * level.size() + 1);
    next.push_back(Members{{}});
    for (const auto& left : level)
      for (const auto& right : level) {
        Members m;
        m.reserve(left.size() + right.size());
        for (const auto& u : left) {
          m.push_back({0});
          m.back().insert(m.back().end(), u.begin(), u.end());
        }
        for (const auto& u : right) {
          m.push_back({1});
          m.back().insert(m.back().end(), u.begin(), u.end());
        }
        next.push_back(std::move(m));
      }
    level = std::move(next);
  }
  std::vector<PrefixSet> out;
  out.reserve(level.size());
  for (auto& members : level) {
    std::vector<Word> words;
    words.reserve(members.size());
    for (auto& u : members) words.emplace_back(binary, std::move(u));
    out.emplace_back(std::move(words));
  }
  return out;
}

bool check_kraft_inequality(const GaleOracle& oracle, const Word& w, const PrefixSet& prefixes, double tol) {
  require_binary(oracle, "the Kraft inequality for product gales");
  const double s = oracle.s_param.get_d();
  std::vector<double> terms;
  terms.reserve(prefixes.size());
  for (const auto& u : prefixes.members())
    terms.push_back(-s * static_cast<double>(u.size()) + root_log2(oracle, w.concat(u)));
  const double lhs = log2_sum_exp2(terms);
  if (lhs == neg_inf) return true;
  return lhs <= root_log2(oracle, w) + tol;
}

CoverCertificate extract_cover(const GaleOracle& oracle, std::size_t n_target, std::size_t min_length,
                               std::size_t max_depth) {
  require_binary(oracle, "cover extraction");
  if (max_depth > 40) throw Error(ErrorCode::depth_too_large, "max_depth must be ≤ 40");
  const Word root(oracle.alphabet);
  if (oracle.evaluate(root).mantissa() != 1) throw Error(ErrorCode::bad_argument, "cover extraction needs d(λ) = 1");

  CoverCertificate cert;
  cert.n_target = n_target;
  cert.bound = std::exp2(-static_cast<double>(n_target));

  double max_log2 = neg_inf;
  for (const auto& w : all_words_up_to(oracle.alphabet, min_length))
    max_log2 = std::max(max_log2, oracle.evaluate(w).log2_value());
  // a = 1 + max d(w)
  cert.a_log2 = max_log2 > 0 ? max_log2 + std::log2(1.0 + std::exp2(-max_log2)) : std::log2(1.0 + std::exp2(max_log2));
  cert.threshold_log2 = static_cast<double>(n_target * oracle.k_factors) + cert.a_log2;

  const double s = oracle.s_param.get_d();
  std::vector<Word> members;
  std::deque<Word> frontier{root};
  constexpr std::size_t uncovered_listing = 64;
  while (!frontier.empty()) {
    Word w = std::move(frontier.front());
    frontier.pop_front();
    const auto ledger = oracle.evaluate(w);
    if (ledger.log2_value() >= cert.threshold_log2) {
      cert.kraft_sum += std::exp2(-s * static_cast<double>(w.size()));
      members.push_back(std::move(w));
      continue;
    }
    if (ledger.ruined()) continue;
    if (w.size() == max_depth) {
      cert.uncovered_mass += std::exp2(-static_cast<double>(w.size()));
      if (cert.uncovered.size() < uncovered_listing) cert.uncovered.push_back(std::move(w));
      continue;
    }
    frontier.push_back(w.extended(0));
    frontier.push_back(w.extended(1));
  }
  if (members.empty())
    throw Error(ErrorCode::threshold_never_reached, "no branch within depth " + std::to_string(max_depth) +
                                                        " reaches log2 threshold " + decimal(cert.threshold_log2));
  cert.complete = cert.uncovered_mass == 0.0;
  cert.min_depth = members.front().size();
  cert.max_member_depth = members.back().size();
  cert.members = PrefixSet(std::move(members));
  return cert;
}

nlohmann::json to_json(const CoverCertificate& cert) {
  nlohmann::json j;
  auto& members = j["members"] = nlohmann::json::array();
  for (const auto& w : cert.members.members()) members.push_back(w.str());
  j["kraft_sum"] = decimal(cert.kraft_sum);
  j["bound"] = decimal(cert.bound);
  j["threshold_log2"] = decimal(cert.threshold_log2);
  j["a_log2"] = decimal(cert.a_log2);
  j["n_target"] = cert.n_target;
  j["min_depth"] = cert.min_depth;
  j["max_member_depth"] = cert.max_member_depth;
  j["complete"] = cert.complete;
  j["uncovered_mass"] = decimal(cert.uncovered_mass);
  auto& uncovered = j["uncovered"] = nlohmann::json::array();
  for (const auto& w : cert.uncovered) uncovered.push_back(w.str());
  j["valid"] = cert.valid();
  return j;
}

GaleOracle product_oracle(std::vector<GaleOracle> factors) {
  if (factors.empty()) throw Error(ErrorCode::bad_argument, "product of zero gales");
  GaleOracle out;
  out.alphabet = factors.front().alphabet;
  out.s_param = factors.front().s_param;
  out.k_factors = 0;
  for (const auto& f : factors) {
    if (!(f.alphabet == out.alphabet) || f.s_param != out.s_param)
      throw Error(ErrorCode::bad_argument, "product factors must share alphabet and s");
    out.k_factors += f.k_factors;
  }
  out.evaluate = [factors = std::move(factors), s = out.s_param, k = out.k_factors,
                  sigma = out.alphabet.size()](const Word& w) {
    Rational mantissa = 1;
    for (const auto& f : factors) mantissa *= f.evaluate(w).mantissa();
    return CapitalLedger(s, k, sigma, std::move(mantissa), w.size());
  };
  return out;
}

}  // namespace galelab
