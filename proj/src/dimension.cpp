#include "galelab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace galelab {

DimensionEstimate estimate_fs_dimension(SymbolStream& stream, std::size_t max_length, BlockMode mode, std::uint64_t n,
                                        const CheckpointSchedule& schedule) {
  if (max_length > max_block_length)
    throw Error(ErrorCode::bad_argument, "L_max must be ≤ " + std::to_string(max_block_length));
  return entropy_rate_estimate(stream, max_length, mode, n, schedule);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::winning: return "winning";
    case Verdict::losing: return "losing";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

double least_squares_slope(std::span<const std::uint64_t> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::bad_argument, "slope needs ≥ 2 paired points");
  for (double v : y)
    if (v == -std::numeric_limits<double>::infinity()) return v;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += static_cast<double>(x[i]);
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = static_cast<double>(x[i]) - mx;
    sxy += dx * (y[i] - my);
    sxx += dx * dx;
  }
  if (sxx == 0) throw Error(ErrorCode::bad_argument, "slope needs distinct x values");
  return sxy / sxx;
}

SuccessReport success_diagnostic(const CapitalTrace& trace, double s, double slope_threshold) {
  const auto count = trace.prefix_lengths.size();
  if (count < 10) throw Error(ErrorCode::too_few_checkpoints, std::to_string(count) + " checkpoints, need ≥ 10");
  SuccessReport report;
  report.s_param = s;
  report.slope_threshold = slope_threshold;
  report.checkpoints = count;
  report.max_log2_capital = *std::max_element(trace.log2_capital.begin(), trace.log2_capital.end());
  report.final_log2_capital = trace.log2_capital.back();
  const auto half = count / 2;
  report.tail_slope = least_squares_slope(std::span(trace.prefix_lengths).subspan(half),
                                          std::span(trace.log2_capital).subspan(half));
  if (report.tail_slope > slope_threshold && report.max_log2_capital > 0) {
    report.verdict = Verdict::winning;
  } else if (report.tail_slope < -slope_threshold) {
    report.verdict = Verdict::losing;
  }
  return report;
}

SuccessReport success_diagnostic(const Trajectory& trajectory, double slope_threshold) {
  if (trajectory.ledgers.empty()) throw Error(ErrorCode::too_few_checkpoints, "empty trajectory");
  CapitalTrace trace;
  trace.prefix_lengths = trajectory.prefix_lengths;
  for (const auto& l : trajectory.ledgers) trace.log2_capital.push_back(l.log2_value());
  trace.final_state = trajectory.final_state;
  trace.ruined = trajectory.ledgers.back().ruined();
  return success_diagnostic(trace, trajectory.ledgers.front().s_param().get_d(), slope_threshold);
}

WinCertificate gale_win_certificate(const Word& x, double s, std::size_t block_length, BlockMode mode,
                                    std::optional<SmoothingPolicy> policy) {
  if (block_length == 0) throw Error(ErrorCode::bad_argument, "block length must be positive");
  const auto& alphabet = x.alphabet();
  const auto sigma = alphabet.size();
  const double log2_sigma = std::log2(static_cast<double>(sigma));
  const double ell = static_cast<double>(block_length);

  WinCertificate cert;
  cert.mode = mode;
  cert.block_length = block_length;
  cert.s_param = s;
  const Word prefix = mode == BlockMode::disjoint ? x.slice(0, x.size() - x.size() % block_length) : x;
  if (prefix.size() < block_length) throw Error(ErrorCode::word_too_short, "prefix shorter than one block");
  cert.n_used = prefix.size();

  const auto counts = mode == BlockMode::disjoint ? count_disjoint(prefix, block_length) : count_sliding(prefix, block_length);
  cert.observed_entropy = block_entropy(counts);
  if (!(s > cert.observed_entropy))
    throw Error(ErrorCode::s_below_entropy,
                "s = " + std::to_string(s) + " is not above H_ℓ = " + std::to_string(cert.observed_entropy));

  WordStream stream(prefix);
  const auto empirical = empirical_block_distribution(stream, block_length, mode, prefix.size());
  const auto dist = rationalize_distribution(empirical, policy.value_or(default_smoothing(sigma, block_length)));
  auto gambler = mode == BlockMode::disjoint ? build_disjoint_gambler(dist) : build_sliding_gambler(dist);

  cert.direct_log2 = run_log(gambler, s, prefix.symbols(), prefix.size()).log2_capital.back();

  double formula = 0.0;
  double worst_block = 0.0;
  for (const auto& [code, w] : dist.weights()) {
    const double lp = log2_of(w);
    worst_block = std::max(worst_block, -lp);
    if (counts.counts[code] > 0) formula += static_cast<double>(counts.counts[code]) * (s * ell * log2_sigma + lp);
  }
  cert.formula_log2 = formula;

  if (mode == BlockMode::sliding) {
    // ℓ−1 extra symbols of exponent, ℓ(ℓ−1)/2 fair warm-up bets, and the ℓ−1
    // windows still open at the end, each holding its prefix marginal.
    const double extra = ell - 1.0;
    double boundary = s * ell * extra * log2_sigma - ell * extra / 2.0 * log2_sigma;
    const auto n = prefix.size();
    for (std::size_t t = n - block_length + 1; t < n; ++t) boundary += log2_of(marginal(dist, prefix.slice(t, n)));
    cert.boundary_log2 = boundary;
    cert.boundary_bound = s * ell * extra * log2_sigma + ell * extra / 2.0 * log2_sigma + extra * worst_block;
  }

  const double gap = std::fabs(cert.direct_log2 - (cert.formula_log2 + cert.boundary_log2));
  cert.grows = cert.direct_log2 > 0;
  cert.passes = gap <= cert.tolerance && cert.grows && std::fabs(cert.boundary_log2) <= cert.boundary_bound + 1e-9;
  cert.distribution = dist;
  cert.gambler = std::move(gambler);
  return cert;
}

EquivalenceReport equivalence_experiment(const StreamFactory& source, std::size_t max_length, std::uint64_t n,
                                         const CheckpointSchedule& schedule) {
  auto estimate = [&](BlockMode mode) {
    auto stream = source();
    return estimate_fs_dimension(*stream, max_length, mode, n, schedule);
  };
  EquivalenceReport report;
  if (thread_budget() > 1) {
    auto sliding = std::async(std::launch::async, estimate, BlockMode::sliding);
    report.disjoint = estimate(BlockMode::disjoint);
    report.sliding = sliding.get();
  } else {
    report.disjoint = estimate(BlockMode::disjoint);
    report.sliding = estimate(BlockMode::sliding);
  }
  for (const auto& [ell, h] : report.disjoint.per_length) {
    const double gap = std::fabs(h - report.sliding.per_length.at(ell));
    report.per_length_gap[ell] = gap;
    report.max_per_length_gap = std::max(report.max_per_length_gap, gap);
  }
  report.estimate_gap = std::fabs(report.disjoint.estimate - report.sliding.estimate);
  return report;
}

nlohmann::json to_json(const SuccessReport& report) {
  return {{"s_param", report.s_param},
          {"slope_threshold", report.slope_threshold},
          {"max_log2_capital", report.max_log2_capital},
          {"final_log2_capital", report.final_log2_capital},
          {"tail_slope", report.tail_slope},
          {"checkpoints", report.checkpoints},
          {"verdict", to_string(report.verdict)}};
}

nlohmann::json to_json(const WinCertificate& cert) {
  nlohmann::json j{{"mode", to_string(cert.mode)},
                   {"block_length", cert.block_length},
                   {"s_param", cert.s_param},
                   {"n_used", cert.n_used},
                   {"observed_entropy", cert.observed_entropy},
                   {"direct_log2", cert.direct_log2},
                   {"formula_log2", cert.formula_log2},
                   {"boundary_log2", cert.boundary_log2},
                   {"boundary_bound", cert.boundary_bound},
                   {"tolerance", cert.tolerance},
                   {"grows", cert.grows},
                   {"passes", cert.passes}};
  if (cert.gambler) j["gambler"] = to_json(*cert.gambler);
  return j;
}

nlohmann::json to_json(const EquivalenceReport& report) {
  nlohmann::json gaps = nlohmann::json::object();
  for (const auto& [ell, g] : report.per_length_gap) gaps[std::to_string(ell)] = g;
  return {{"disjoint", to_json(report.disjoint)},
          {"sliding", to_json(report.sliding)},
          {"per_length_gap", gaps},
          {"max_per_length_gap", report.max_per_length_gap},
          {"estimate_gap", report.estimate_gap}};
}

}  // namespace galelab
