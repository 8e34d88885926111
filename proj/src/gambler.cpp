#include "galelab/gambler.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_map>

namespace galelab {

namespace {

std::string row_name(const std::string& state, std::size_t row) {
  return "state \"" + state + "\" row " + std::to_string(row);
}

Rational rational_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw Error(ErrorCode::parse_error, "rationals must be \"p/q\" strings, got " + v.dump());
}

}  // namespace

GamblerSpec::GamblerSpec(Alphabet alphabet, std::size_t k, std::vector<std::string> labels, std::vector<StateId> delta,
                         std::vector<BetRows> bets, StateId q0, Rational c0, RowCheck rows)
    : alphabet_(std::move(alphabet)), k_(k), labels_(std::move(labels)), delta_(std::move(delta)),
      bets_(std::move(bets)), q0_(q0), c0_(std::move(c0)) {
  const auto sigma = alphabet_.size();
  const auto nq = labels_.size();
  if (k_ == 0) throw Error(ErrorCode::bad_argument, "k must be ≥ 1");
  if (nq == 0) throw Error(ErrorCode::bad_argument, "gambler needs at least one state");
  if (q0_ >= nq) throw Error(ErrorCode::unknown_start_state, "start state index " + std::to_string(q0_));
  if (sgn(c0_) < 0) throw Error(ErrorCode::bad_argument, "initial capital must be nonnegative");
  if (delta_.size() != nq * sigma) throw Error(ErrorCode::missing_transition, "transition table is not |Q|×|Σ|");
  for (std::size_t i = 0; i < delta_.size(); ++i)
    if (delta_[i] >= nq)
      throw Error(ErrorCode::missing_transition, "δ(\"" + labels_[i / sigma] + "\", '" +
                                                     std::string(1, alphabet_.glyph(static_cast<Symbol>(i % sigma))) +
                                                     "') leads to an unknown state");
  if (bets_.size() != nq) throw Error(ErrorCode::row_not_stochastic, "bet table does not cover every state");
  for (std::size_t q = 0; q < nq; ++q) {
    if (bets_[q].size() != k_)
      throw Error(ErrorCode::row_not_stochastic, "state \"" + labels_[q] + "\" has " + std::to_string(bets_[q].size()) +
                                                     " bet rows, expected k = " + std::to_string(k_));
    for (std::size_t r = 0; r < k_; ++r) {
      auto& row = bets_[q][r];
      if (row.size() != sigma) throw Error(ErrorCode::row_not_stochastic, row_name(labels_[q], r) + " has wrong width");
      Rational sum = 0;
      for (auto& b : row) {
        b.canonicalize();
        if (sgn(b) < 0) throw Error(ErrorCode::row_not_stochastic, row_name(labels_[q], r) + " has a negative bet");
        sum += b;
      }
      if (rows == RowCheck::strict && sum != 1)
        throw Error(ErrorCode::row_not_stochastic, row_name(labels_[q], r) + " sums to " + to_string(sum));
    }
  }
  factors_.reserve(nq * sigma);
  log_factors_.reserve(nq * sigma);
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t a = 0; a < sigma; ++a) {
      Rational f = 1;
      for (std::size_t r = 0; r < k_; ++r) f *= bets_[q][r][a] * static_cast<unsigned long>(sigma);
      f.canonicalize();
      log_factors_.push_back(log2_of(f));
      factors_.push_back(std::move(f));
    }
}

std::optional<StateId> GamblerSpec::find_state(const std::string& label) const {
  for (std::size_t q = 0; q < labels_.size(); ++q)
    if (labels_[q] == label) return static_cast<StateId>(q);
  return std::nullopt;
}

StateId GamblerSpec::walk(StateId q, std::span<const Symbol> x) const {
  for (Symbol a : x) q = next(q, a);
  return q;
}

GamblerSpec validate_gambler(const RawGambler& raw, RowCheck rows) {
  Alphabet alphabet(raw.alphabet);
  const auto sigma = alphabet.size();
  std::unordered_map<std::string, StateId> index;
  for (const auto& label : raw.states) {
    if (!index.emplace(label, static_cast<StateId>(index.size())).second)
      throw Error(ErrorCode::bad_argument, "duplicate state \"" + label + "\"");
  }
  auto start = index.find(raw.q0);
  if (start == index.end()) throw Error(ErrorCode::unknown_start_state, "\"" + raw.q0 + "\"");
  for (const auto& [key, target] : raw.delta) {
    if (!index.count(key.first)) throw Error(ErrorCode::missing_transition, "δ names unknown state \"" + key.first + "\"");
    if (!alphabet.contains(key.second))
      throw Error(ErrorCode::bad_symbol, "δ names unknown symbol '" + std::string(1, key.second) + "'");
  }

  std::vector<StateId> delta(raw.states.size() * sigma);
  std::vector<BetRows> bets(raw.states.size());
  for (const auto& label : raw.states) {
    const StateId q = index.at(label);
    for (std::size_t a = 0; a < sigma; ++a) {
      const char glyph = alphabet.glyph(static_cast<Symbol>(a));
      auto it = raw.delta.find({label, glyph});
      if (it == raw.delta.end())
        throw Error(ErrorCode::missing_transition, "δ(\"" + label + "\", '" + std::string(1, glyph) + "') is undefined");
      auto target = index.find(it->second);
      if (target == index.end())
        throw Error(ErrorCode::missing_transition, "δ(\"" + label + "\", '" + std::string(1, glyph) +
                                                       "') leads to unknown state \"" + it->second + "\"");
      delta[q * sigma + a] = target->second;
    }
    auto b = raw.beta.find(label);
    if (b == raw.beta.end()) throw Error(ErrorCode::row_not_stochastic, "state \"" + label + "\" has no bets");
    bets[q] = b->second;
  }
  return GamblerSpec(alphabet, raw.k, raw.states, std::move(delta), std::move(bets), start->second, raw.c0, rows);
}

nlohmann::json to_json(const GamblerSpec& spec) {
  nlohmann::json j;
  auto& alpha = j["alphabet"] = nlohmann::json::array();
  for (char c : spec.alphabet().glyphs()) alpha.push_back(std::string(1, c));
  j["k"] = spec.k();
  j["states"] = spec.labels();
  j["q0"] = spec.label(spec.start());
  j["c0"] = to_string(spec.initial_capital());
  auto& delta = j["delta"] = nlohmann::json::object();
  auto& beta = j["beta"] = nlohmann::json::object();
  for (StateId q = 0; q < spec.state_count(); ++q) {
    for (std::size_t a = 0; a < spec.sigma(); ++a)
      delta[spec.label(q) + "," + std::string(1, spec.alphabet().glyph(static_cast<Symbol>(a)))] =
          spec.label(spec.next(q, static_cast<Symbol>(a)));
    auto& rows = beta[spec.label(q)] = nlohmann::json::array();
    for (const auto& row : spec.bets(q)) {
      auto& r = rows.emplace_back(nlohmann::json::array());
      for (const auto& b : row) r.push_back(to_string(b));
    }
  }
  if (!spec.provenance.is_null()) j["provenance"] = spec.provenance;
  return j;
}

RawGambler raw_gambler_from_json(const nlohmann::json& j) {
  try {
    RawGambler raw;
    raw.alphabet.clear();
    for (const auto& g : j.at("alphabet")) {
      const auto glyph = g.get<std::string>();
      if (glyph.size() != 1) throw Error(ErrorCode::bad_alphabet, "glyphs must be single characters: \"" + glyph + "\"");
      raw.alphabet += glyph;
    }
    raw.k = j.value("k", std::size_t{1});
    raw.states = j.at("states").get<std::vector<std::string>>();
    raw.q0 = j.at("q0").get<std::string>();
    raw.c0 = j.contains("c0") ? rational_from_json(j.at("c0")) : Rational(1);
    for (const auto& [key, target] : j.at("delta").items()) {
      const auto comma = key.rfind(',');
      if (comma == std::string::npos || comma + 2 != key.size())
        throw Error(ErrorCode::parse_error, "delta key must be \"state,symbol\": \"" + key + "\"");
      raw.delta[{key.substr(0, comma), key.back()}] = target.get<std::string>();
    }
    for (const auto& [state, rows] : j.at("beta").items()) {
      BetRows parsed;
      for (const auto& row : rows) {
        auto& out = parsed.emplace_back();
        for (const auto& b : row) out.push_back(rational_from_json(b));
      }
      raw.beta[state] = std::move(parsed);
    }
    return raw;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
}

GamblerSpec gambler_from_json(const nlohmann::json& j, RowCheck rows) {
  auto spec = validate_gambler(raw_gambler_from_json(j), rows);
  if (j.contains("provenance")) spec.provenance = j.at("provenance");
  return spec;
}

GamblerSpec load_gambler(const std::string& path, RowCheck rows) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::file_not_readable, path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, path + ": " + e.what());
  }
  return gambler_from_json(j, rows);
}

void save_gambler(const GamblerSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::file_not_readable, "cannot write " + path);
  out << to_json(spec).dump(2) << '\n';
}

Trajectory run(const GamblerSpec& spec, const Rational& s, const Word& x) {
  if (!(x.alphabet() == spec.alphabet())) throw Error(ErrorCode::bad_argument, "word and gambler alphabets differ");
  Trajectory t;
  t.prefix_lengths.reserve(x.size() + 1);
  t.ledgers.reserve(x.size() + 1);
  CapitalLedger ledger(s, spec.k(), spec.sigma(), spec.initial_capital());
  StateId q = spec.start();
  t.prefix_lengths.push_back(0);
  t.ledgers.push_back(ledger);
  for (std::size_t i = 0; i < x.size(); ++i) {
    ledger.apply(spec.step_factor(q, x[i]));
    q = spec.next(q, x[i]);
    t.prefix_lengths.push_back(i + 1);
    t.ledgers.push_back(ledger);
  }
  t.final_state = q;
  return t;
}

CapitalLedger evaluate_capital(const GamblerSpec& spec, const Rational& s, const Word& x) {
  CapitalLedger ledger(s, spec.k(), spec.sigma(), spec.initial_capital());
  StateId q = spec.start();
  for (Symbol a : x.symbols()) {
    if (ledger.ruined()) {
      // capital stays 0; only the step count matters from here
      ledger = CapitalLedger(s, spec.k(), spec.sigma(), 0, x.size());
      break;
    }
    ledger.apply(spec.step_factor(q, a));
    q = spec.next(q, a);
  }
  return ledger;
}

namespace {

class LogRunner {
 public:
  LogRunner(const GamblerSpec& spec, double s, std::uint64_t stride)
      : spec_(spec), stride_(stride == 0 ? 1 : stride),
        drift_((s - 1.0) * static_cast<double>(spec.k()) * std::log2(static_cast<double>(spec.sigma()))),
        log2_c0_(log2_of(spec.initial_capital())), q_(spec.start()) {
    trace_.prefix_lengths.push_back(0);
    trace_.log2_capital.push_back(current());
  }

  void feed(std::span<const Symbol> chunk) {
    for (Symbol a : chunk) {
      const double f = spec_.log2_step_factor(q_, a);
      if (f == -std::numeric_limits<double>::infinity()) ruined_ = true;
      sum_ += f;
      q_ = spec_.next(q_, a);
      if (++n_ % stride_ == 0) snapshot();
    }
  }

  CapitalTrace finish() {
    if (trace_.prefix_lengths.back() != n_) snapshot();
    trace_.final_state = q_;
    trace_.ruined = ruined_;
    return std::move(trace_);
  }

 private:
  double current() const {
    if (ruined_ || log2_c0_ == -std::numeric_limits<double>::infinity())
      return -std::numeric_limits<double>::infinity();
    return log2_c0_ + drift_ * static_cast<double>(n_) + sum_;
  }
  void snapshot() {
    trace_.prefix_lengths.push_back(n_);
    trace_.log2_capital.push_back(current());
  }

  const GamblerSpec& spec_;
  std::uint64_t stride_;
  double drift_;
  double log2_c0_;
  StateId q_;
  std::uint64_t n_ = 0;
  double sum_ = 0.0;
  bool ruined_ = false;
  CapitalTrace trace_;
};

}  // namespace

CapitalTrace run_log(const GamblerSpec& spec, double s, SymbolStream& stream, std::uint64_t n, std::uint64_t stride) {
  if (!(stream.alphabet() == spec.alphabet())) throw Error(ErrorCode::bad_argument, "stream and gambler alphabets differ");
  LogRunner runner(spec, s, stride);
  std::vector<Symbol> buf(1 << 16);
  std::uint64_t seen = 0;
  while (seen < n) {
    const auto want = static_cast<std::size_t>(std::min<std::uint64_t>(buf.size(), n - seen));
    const auto got = stream.read(std::span(buf).first(want));
    if (got == 0) break;
    runner.feed(std::span<const Symbol>(buf).first(got));
    seen += got;
  }
  return runner.finish();
}

CapitalTrace run_log(const GamblerSpec& spec, double s, std::span<const Symbol> x, std::uint64_t stride) {
  LogRunner runner(spec, s, stride);
  runner.feed(x);
  return runner.finish();
}

Rational cumulative_block_bet(const GamblerSpec& spec, StateId q, const Word& x, std::optional<std::size_t> row) {
  if (q >= spec.state_count()) throw Error(ErrorCode::bad_argument, "state index out of range");
  if (row && *row >= spec.k()) throw Error(ErrorCode::bad_argument, "bet row out of range");
  Rational product = 1;
  for (Symbol a : x.symbols()) {
    if (row) {
      product *= spec.bet(q, *row, a);
    } else {
      for (std::size_t r = 0; r < spec.k(); ++r) product *= spec.bet(q, r, a);
    }
    q = spec.next(q, a);
  }
  product.canonicalize();
  return product;
}

GaleOracle induced_oracle(const GamblerSpec& spec, const Rational& s) {
  GaleOracle oracle;
  oracle.alphabet = spec.alphabet();
  oracle.s_param = s;
  oracle.k_factors = spec.k();
  oracle.evaluate = [spec, s](const Word& w) { return evaluate_capital(spec, s, w); };
  return oracle;
}

GamblerSpec project_row(const GamblerSpec& spec, std::size_t row) {
  if (row >= spec.k()) throw Error(ErrorCode::bad_argument, "bet row out of range");
  std::vector<StateId> delta;
  std::vector<BetRows> bets;
  for (StateId q = 0; q < spec.state_count(); ++q) {
    for (std::size_t a = 0; a < spec.sigma(); ++a) delta.push_back(spec.next(q, static_cast<Symbol>(a)));
    bets.push_back({spec.bets(q)[row]});
  }
  return GamblerSpec(spec.alphabet(), 1, spec.labels(), std::move(delta), std::move(bets), spec.start(),
                     spec.initial_capital(), RowCheck::skip);
}

GamblerSpec constant_gambler(const Alphabet& alphabet, std::vector<Rational> row, std::size_t k, Rational c0) {
  std::vector<StateId> delta(alphabet.size(), 0);
  BetRows rows(k, std::move(row));
  return GamblerSpec(alphabet, k, {"q"}, std::move(delta), {std::move(rows)}, 0, std::move(c0));
}

}  // namespace galelab
