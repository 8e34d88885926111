#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include "json.hpp"

#include "galelab/construct.hpp"
#include "galelab/entropy.hpp"
#include "galelab/gambler.hpp"

namespace galelab {

/// Finite-state dimension estimate: per-ℓ running minima and their minimum.
using DimensionEstimate = RateEstimate;

inline constexpr std::size_t max_block_length = 12;

DimensionEstimate estimate_fs_dimension(SymbolStream& stream, std::size_t max_length, BlockMode mode, std::uint64_t n,
                                        const CheckpointSchedule& schedule = {});

enum class Verdict { winning, losing, indeterminate };
std::string_view to_string(Verdict v);

struct SuccessReport {
  double s_param = 0.0;
  double slope_threshold = 0.01;
  double max_log2_capital = 0.0;
  double final_log2_capital = 0.0;
  double tail_slope = 0.0;  // bits per symbol over the trailing half of checkpoints
  std::size_t checkpoints = 0;
  Verdict verdict = Verdict::indeterminate;
};

inline constexpr double default_slope_threshold = 0.01;

SuccessReport success_diagnostic(const CapitalTrace& trace, double s, double slope_threshold = default_slope_threshold);
SuccessReport success_diagnostic(const Trajectory& trajectory, double slope_threshold = default_slope_threshold);

/// Least-squares slope of y against x; -inf if any y is -inf.
double least_squares_slope(std::span<const std::uint64_t> x, std::span<const double> y);

/// Direct log-capital of the constructed gambler against its closed form.
struct WinCertificate {
  BlockMode mode = BlockMode::disjoint;
  std::size_t block_length = 1;
  double s_param = 0.0;
  std::uint64_t n_used = 0;          // prefix length actually gambled on
  double observed_entropy = 0.0;     // H_ℓ of that prefix
  double direct_log2 = 0.0;          // log2 d from running the gambler
  double formula_log2 = 0.0;         // k·(sℓ + Σ_w P(w)·log2 ℙ(w)), k = number of windows
  double boundary_log2 = 0.0;        // sliding only: warm-up and trailing-window correction
  double boundary_bound = 0.0;       // sliding only: bound on |boundary_log2|
  double tolerance = 1e-6;
  bool grows = false;
  bool passes = false;
  std::optional<Distribution> distribution;
  std::optional<GamblerSpec> gambler;
};

/// Builds ℙ (running-min extraction + smoothing), the matching gambler, runs it on x.
WinCertificate gale_win_certificate(const Word& x, double s, std::size_t block_length, BlockMode mode,
                                    std::optional<SmoothingPolicy> policy = std::nullopt);

using StreamFactory = std::function<std::unique_ptr<SymbolStream>()>;

struct EquivalenceReport {
  DimensionEstimate disjoint;
  DimensionEstimate sliding;
  std::map<std::size_t, double> per_length_gap;  // |disjoint − sliding| at each ℓ
  double max_per_length_gap = 0.0;
  double estimate_gap = 0.0;  // |disjoint.estimate − sliding.estimate|
};

/// Both block modes over independent cursors of the same source.
EquivalenceReport equivalence_experiment(const StreamFactory& source, std::size_t max_length, std::uint64_t n,
                                         const CheckpointSchedule& schedule = {});

nlohmann::json to_json(const SuccessReport& report);
nlohmann::json to_json(const WinCertificate& cert);
nlohmann::json to_json(const EquivalenceReport& report);

}  // namespace galelab
