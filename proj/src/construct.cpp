#include "galelab/construct.hpp"

#include <cmath>
#include <set>

namespace galelab {

namespace {

std::string state_label(const Word& w) { return w.str(); }

// Σ^{<ℓ} in shortlex order, with its label → index map implied by the order.
std::vector<Word> short_words(const Alphabet& alphabet, std::size_t block_length) {
  return all_words_up_to(alphabet, block_length - 1);
}

StateId index_of_word(const Word& w, std::size_t sigma) {
  // shortlex rank: Σ_{i<|w|} σ^i + code(w)
  std::uint64_t offset = 0, layer = 1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    offset += layer;
    layer *= sigma;
  }
  return static_cast<StateId>(offset + encode_block(w.symbols(), sigma));
}

void require_positive(const Distribution& dist) {
  if (!dist.fully_supported()) {
    const auto space = block_space(dist.alphabet().size(), dist.block_length());
    for (BlockCode c = 0; c < space; ++c)
      if (!dist.weights().count(c))
        throw Error(ErrorCode::zero_mass_block,
                    "block \"" + decode_block(dist.alphabet(), c, dist.block_length()).str() +
                        "\" has zero mass; smooth the distribution first");
  }
}

std::vector<Rational> fair_row(std::size_t sigma) {
  Rational f(1, static_cast<unsigned long>(sigma));
  f.canonicalize();
  return std::vector<Rational>(sigma, f);
}

nlohmann::json distribution_json(const Distribution& dist) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [code, w] : dist.weights())
    j[decode_block(dist.alphabet(), code, dist.block_length()).str()] = to_string(w);
  return j;
}

}  // namespace

SmoothingPolicy default_smoothing(std::size_t sigma, std::size_t block_length) {
  SmoothingPolicy policy;
  policy.floor = Rational(1, static_cast<unsigned long>(100 * block_space(sigma, block_length)));
  policy.floor.canonicalize();
  return policy;
}

Distribution distribution_from_counts(const Alphabet& alphabet, const BlockCounts& counts) {
  if (counts.window_total == 0) throw Error(ErrorCode::empty_counts, "no windows counted");
  std::map<BlockCode, Rational> weights;
  for (BlockCode c = 0; c < counts.counts.size(); ++c) {
    if (counts.counts[c] == 0) continue;
    Rational w(static_cast<unsigned long>(counts.counts[c]), static_cast<unsigned long>(counts.window_total));
    w.canonicalize();
    weights.emplace(c, std::move(w));
  }
  return distribution_from_codes(alphabet, counts.block_length, std::move(weights));
}

Distribution empirical_block_distribution(SymbolStream& stream, std::size_t block_length, BlockMode mode,
                                          std::uint64_t n, const CheckpointSchedule& schedule) {
  const auto report = entropy_profile(stream, block_length, mode, n, schedule);
  return distribution_from_counts(stream.alphabet(), report.min_counts);
}

Distribution empirical_block_distribution(const Word& x, std::size_t block_length, BlockMode mode) {
  if (mode == BlockMode::disjoint) {
    const auto usable = x.size() - x.size() % block_length;
    if (usable == 0) throw Error(ErrorCode::word_too_short, "no complete block");
    return distribution_from_counts(x.alphabet(), count_disjoint(x.slice(0, usable), block_length));
  }
  return distribution_from_counts(x.alphabet(), count_sliding(x, block_length));
}

Distribution rationalize_distribution(const Distribution& dist, const SmoothingPolicy& policy) {
  const auto sigma = dist.alphabet().size();
  const auto ell = dist.block_length();
  const auto space = block_space(sigma, ell);
  if (sgn(policy.floor) <= 0) throw Error(ErrorCode::bad_argument, "smoothing floor must be positive");
  if (policy.floor * static_cast<unsigned long>(space) > 1)
    throw Error(ErrorCode::floor_too_large, "floor·σ^ℓ = " + to_string(Rational(policy.floor * static_cast<unsigned long>(space))));

  // Blocks below the floor are pinned to it; the rest share the remaining mass
  // in proportion to their original weight. Pinning can push a kept block under
  // the floor, so repeat until stable.
  std::set<BlockCode> pinned;
  for (BlockCode c = 0; c < space; ++c) {
    auto it = dist.weights().find(c);
    if (it == dist.weights().end() || it->second < policy.floor) pinned.insert(c);
  }
  Rational scale;
  while (true) {
    Rational kept_mass = 0;
    for (const auto& [c, w] : dist.weights())
      if (!pinned.count(c)) kept_mass += w;
    const Rational free_mass = 1 - policy.floor * static_cast<unsigned long>(pinned.size());
    if (sgn(kept_mass) == 0) {
      scale = 0;
      break;
    }
    scale = free_mass / kept_mass;
    bool changed = false;
    for (const auto& [c, w] : dist.weights())
      if (!pinned.count(c) && w * scale < policy.floor) {
        pinned.insert(c);
        changed = true;
      }
    if (!changed) break;
  }

  std::map<BlockCode, Rational> out;
  if (pinned.size() == space) {
    // Only possible when floor·σ^ℓ = 1: the uniform distribution.
    for (BlockCode c = 0; c < space; ++c) out.emplace(c, policy.floor);
  } else {
    for (BlockCode c = 0; c < space; ++c) {
      if (pinned.count(c)) {
        out.emplace(c, policy.floor);
        continue;
      }
      Rational w = dist.weights().at(c) * scale;
      w.canonicalize();
      out.emplace(c, std::move(w));
    }
  }
  auto result = distribution_from_codes(dist.alphabet(), ell, std::move(out));

  const double eps = policy.epsilon_prime.get_d();
  for (const auto& [c, w] : dist.weights()) {
    if (w < policy.floor) continue;
    const double distortion = std::fabs(log2_of(result.weights().at(c)) - log2_of(w));
    if (!(distortion < eps))
      throw Error(ErrorCode::distortion_too_large,
                  "block \"" + decode_block(dist.alphabet(), c, ell).str() + "\" moves by " +
                      std::to_string(distortion) + " bits ≥ epsilon_prime");
  }
  return result;
}

GamblerSpec build_disjoint_gambler(const Distribution& dist) {
  require_positive(dist);
  const auto& alphabet = dist.alphabet();
  const auto sigma = alphabet.size();
  const auto ell = dist.block_length();
  const auto states = short_words(alphabet, ell);

  std::vector<std::string> labels;
  std::vector<StateId> delta;
  std::vector<BetRows> bets;
  for (const auto& w : states) {
    labels.push_back(state_label(w));
    for (std::size_t a = 0; a < sigma; ++a) {
      // δ(w,b) = wb below length ℓ−1, back to λ on completing a block
      delta.push_back(w.size() + 1 < ell ? index_of_word(w.extended(static_cast<Symbol>(a)), sigma) : 0);
    }
    bets.push_back({conditional_row(dist, w)});
  }
  GamblerSpec spec(alphabet, 1, std::move(labels), std::move(delta), std::move(bets), 0, 1);
  spec.provenance = {{"construction", "disjoint"}, {"block_length", ell}, {"distribution", distribution_json(dist)}};
  return spec;
}

GamblerSpec build_sliding_gambler(const Distribution& dist) {
  require_positive(dist);
  const auto& alphabet = dist.alphabet();
  const auto sigma = alphabet.size();
  const auto ell = dist.block_length();
  const auto states = short_words(alphabet, ell);

  std::vector<std::string> labels;
  std::vector<StateId> delta;
  std::vector<BetRows> bets;
  for (const auto& w : states) {
    labels.push_back(state_label(w));
    for (std::size_t a = 0; a < sigma; ++a) {
      Word next = w.extended(static_cast<Symbol>(a));
      // the state remembers the last ℓ−1 symbols
      if (next.size() > ell - 1) next = next.slice(next.size() - (ell - 1), next.size());
      delta.push_back(index_of_word(next, sigma));
    }
    BetRows rows;
    rows.reserve(ell);
    for (std::size_t r = 0; r < ell; ++r) {
      const std::size_t context = ell - 1 - r;
      if (context > w.size()) {
        rows.push_back(fair_row(sigma));
      } else {
        rows.push_back(conditional_row(dist, w.slice(w.size() - context, w.size())));
      }
    }
    bets.push_back(std::move(rows));
  }
  GamblerSpec spec(alphabet, ell, std::move(labels), std::move(delta), std::move(bets), 0, 1);
  spec.provenance = {{"construction", "sliding"}, {"block_length", ell}, {"distribution", distribution_json(dist)}};
  return spec;
}

GamblerSpec extend_phase(const GamblerSpec& spec, std::size_t phases) {
  if (phases == 0) throw Error(ErrorCode::bad_argument, "phase count must be ≥ 1");
  const auto nq = spec.state_count();
  const auto sigma = spec.sigma();
  std::vector<std::string> labels;
  std::vector<StateId> delta;
  std::vector<BetRows> bets;
  labels.reserve(nq * phases);
  // (q, n) ↦ q·L + n
  for (StateId q = 0; q < nq; ++q)
    for (std::size_t n = 0; n < phases; ++n) {
      labels.push_back(phases == 1 ? spec.label(q) : spec.label(q) + "#" + std::to_string(n));
      for (std::size_t a = 0; a < sigma; ++a)
        delta.push_back(static_cast<StateId>(spec.next(q, static_cast<Symbol>(a)) * phases + (n + 1) % phases));
      bets.push_back(spec.bets(q));
    }
  GamblerSpec out(spec.alphabet(), spec.k(), std::move(labels), std::move(delta), std::move(bets),
                  static_cast<StateId>(spec.start() * phases), spec.initial_capital());
  out.provenance = {{"construction", "extend_phase"}, {"phases", phases}};
  if (!spec.provenance.is_null()) out.provenance["base"] = spec.provenance;
  return out;
}

GamblerSpec replicate_bets(const GamblerSpec& spec, std::size_t copies) {
  if (copies == 0) throw Error(ErrorCode::bad_argument, "copy count must be ≥ 1");
  std::vector<StateId> delta;
  std::vector<BetRows> bets;
  for (StateId q = 0; q < spec.state_count(); ++q) {
    for (std::size_t a = 0; a < spec.sigma(); ++a) delta.push_back(spec.next(q, static_cast<Symbol>(a)));
    BetRows rows;
    rows.reserve(spec.k() * copies);
    for (const auto& row : spec.bets(q))
      for (std::size_t r = 0; r < copies; ++r) rows.push_back(row);
    bets.push_back(std::move(rows));
  }
  Rational c0 = 1;
  for (std::size_t r = 0; r < copies; ++r) c0 *= spec.initial_capital();
  GamblerSpec out(spec.alphabet(), spec.k() * copies, spec.labels(), std::move(delta), std::move(bets), spec.start(),
                  std::move(c0));
  out.provenance = {{"construction", "replicate_bets"}, {"copies", copies}};
  if (!spec.provenance.is_null()) out.provenance["base"] = spec.provenance;
  return out;
}

}  // namespace galelab
