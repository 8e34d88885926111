#include "galelab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace galelab {

namespace {

constexpr std::uint64_t max_table = std::uint64_t{1} << 24;

std::uint64_t table_size(std::size_t sigma, std::size_t block_length) {
  if (block_length == 0) throw Error(ErrorCode::bad_argument, "block length must be positive");
  const auto space = block_space(sigma, block_length);
  if (space > max_table) throw Error(ErrorCode::table_too_large, "σ^ℓ = " + std::to_string(space) + " exceeds 2^24");
  return space;
}

double entropy_of(const std::vector<std::uint64_t>& counts, std::uint64_t total, std::size_t sigma,
                  std::size_t block_length) {
  if (total == 0) throw Error(ErrorCode::empty_counts, "no complete window");
  double acc = 0.0;
  for (auto c : counts)
    if (c > 0) acc += static_cast<double>(c) * std::log2(static_cast<double>(c));
  const double t = static_cast<double>(total);
  const double bits = std::log2(t) - acc / t;
  const double h = bits / (static_cast<double>(block_length) * std::log2(static_cast<double>(sigma)));
  return std::clamp(h, 0.0, 1.0);
}

std::vector<EntropyReport> profile_lengths(SymbolStream& stream, const std::vector<std::size_t>& lengths,
                                           BlockMode mode, std::uint64_t n, const CheckpointSchedule& schedule) {
  const auto sigma = stream.alphabet().size();
  std::vector<BlockCounter> counters;
  std::vector<EntropyReport> reports(lengths.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    counters.emplace_back(sigma, lengths[i], mode);
    reports[i].block_length = lengths[i];
    reports[i].mode = mode;
    reports[i].burn_in = burn_in_length(sigma, lengths[i]);
  }
  const auto points = schedule.points(n);
  std::vector<bool> past_burn_in(lengths.size(), false);

  auto record = [&](std::uint64_t seen) {
    for (std::size_t i = 0; i < counters.size(); ++i) {
      const auto& c = counters[i];
      if (c.window_total() == 0) {
        if (reports[i].checkpoints.empty())
          throw Error(ErrorCode::stream_exhausted,
                      "no complete ℓ=" + std::to_string(lengths[i]) + " window before the first checkpoint");
        continue;
      }
      const std::uint64_t len = mode == BlockMode::disjoint ? c.window_total() * lengths[i] : seen;
      const double h = c.entropy();
      auto& r = reports[i];
      r.checkpoints.emplace_back(len, h);
      // ties go to the longest prefix
      if (len >= r.burn_in && (!past_burn_in[i] || h <= r.running_min)) {
        past_burn_in[i] = true;
        r.running_min = h;
        r.min_counts = c.snapshot();
      }
    }
  };

  std::vector<Symbol> buf(1 << 16);
  std::uint64_t seen = 0;
  std::size_t next = 0;
  while (next < points.size()) {
    const auto want = static_cast<std::size_t>(std::min<std::uint64_t>(buf.size(), points[next] - seen));
    const auto got = stream.read(std::span(buf).first(want));
    if (got == 0) {
      if (next == 0) throw Error(ErrorCode::stream_exhausted, "stream ended after " + std::to_string(seen) + " symbols");
      if (seen > points[next - 1]) record(seen);
      break;
    }
    for (std::size_t j = 0; j < got; ++j)
      for (auto& c : counters) c.push(buf[j]);
    seen += got;
    if (seen == points[next]) {
      record(seen);
      ++next;
    }
  }

  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (past_burn_in[i]) continue;
    reports[i].running_min = reports[i].checkpoints.back().second;
    reports[i].min_counts = counters[i].snapshot();
  }
  return reports;
}

}  // namespace

std::string_view to_string(BlockMode mode) { return mode == BlockMode::disjoint ? "disjoint" : "sliding"; }

BlockMode parse_block_mode(std::string_view text) {
  if (text == "disjoint" || text == "aligned") return BlockMode::disjoint;
  if (text == "sliding" || text == "non-aligned") return BlockMode::sliding;
  throw Error(ErrorCode::parse_error, "mode must be disjoint or sliding");
}

std::uint64_t BlockCounts::count(const Word& block) const {
  if (block.size() != block_length) throw Error(ErrorCode::bad_block_length, block.str());
  return counts.at(encode_block(block.symbols(), sigma));
}

BlockCounts count_disjoint(const Word& x, std::size_t block_length) {
  if (block_length == 0) throw Error(ErrorCode::bad_argument, "block length must be positive");
  if (x.size() % block_length != 0)
    throw Error(ErrorCode::length_not_multiple,
                "|x| = " + std::to_string(x.size()) + " is not a multiple of " + std::to_string(block_length));
  BlockCounter counter(x.alphabet().size(), block_length, BlockMode::disjoint);
  for (auto s : x.symbols()) counter.push(s);
  return counter.snapshot();
}

BlockCounts count_sliding(const Word& x, std::size_t block_length) {
  if (block_length == 0) throw Error(ErrorCode::bad_argument, "block length must be positive");
  if (x.size() < block_length)
    throw Error(ErrorCode::word_too_short,
                "|x| = " + std::to_string(x.size()) + " < ℓ = " + std::to_string(block_length));
  BlockCounter counter(x.alphabet().size(), block_length, BlockMode::sliding);
  for (auto s : x.symbols()) counter.push(s);
  return counter.snapshot();
}

double block_entropy(const BlockCounts& counts) {
  return entropy_of(counts.counts, counts.window_total, counts.sigma, counts.block_length);
}

BlockCounter::BlockCounter(std::size_t sigma, std::size_t block_length, BlockMode mode)
    : sigma_(sigma), block_length_(block_length), mode_(mode), space_(table_size(sigma, block_length)),
      counts_(space_, 0) {}

double BlockCounter::entropy() const { return entropy_of(counts_, total_, sigma_, block_length_); }

BlockCounts BlockCounter::snapshot() const {
  return BlockCounts{block_length_, mode_, sigma_, counts_, total_};
}

std::vector<std::uint64_t> CheckpointSchedule::points(std::uint64_t n) const {
  if (n == 0) throw Error(ErrorCode::bad_argument, "prefix length must be positive");
  if (first == 0 || !(ratio > 1.0)) throw Error(ErrorCode::bad_argument, "schedule needs first ≥ 1 and ratio > 1");
  std::vector<std::uint64_t> out;
  for (std::size_t j = 0;; ++j) {
    const double v = std::ceil(static_cast<double>(first) * std::pow(ratio, static_cast<double>(j)));
    if (v >= static_cast<double>(n)) break;
    const auto p = static_cast<std::uint64_t>(v);
    if (out.empty() || p > out.back()) out.push_back(p);
  }
  out.push_back(n);
  return out;
}

std::uint64_t burn_in_length(std::size_t sigma, std::size_t block_length) {
  return 100 * block_space(sigma, block_length);
}

EntropyReport entropy_profile(SymbolStream& stream, std::size_t block_length, BlockMode mode, std::uint64_t n,
                              const CheckpointSchedule& schedule) {
  return profile_lengths(stream, {block_length}, mode, n, schedule).front();
}

RateEstimate entropy_rate_estimate(SymbolStream& stream, std::size_t max_length, BlockMode mode, std::uint64_t n,
                                   const CheckpointSchedule& schedule) {
  if (max_length == 0) throw Error(ErrorCode::bad_argument, "L_max must be positive");
  if (n < max_length) throw Error(ErrorCode::bad_argument, "n must be at least L_max");
  RateEstimate out;
  out.mode = mode;
  std::vector<std::size_t> lengths(max_length);
  for (std::size_t i = 0; i < max_length; ++i) lengths[i] = i + 1;
  out.reports = profile_lengths(stream, lengths, mode, n, schedule);
  out.estimate = 1.0;
  for (const auto& r : out.reports) {
    out.per_length[r.block_length] = r.running_min;
    out.estimate = std::min(out.estimate, r.running_min);
    if (!r.checkpoints.empty()) out.n_used = std::max(out.n_used, r.checkpoints.back().first);
  }
  return out;
}

nlohmann::json to_json(const EntropyReport& report) {
  nlohmann::json j;
  j["block_length"] = report.block_length;
  j["mode"] = to_string(report.mode);
  j["burn_in"] = report.burn_in;
  j["running_min"] = report.running_min;
  auto& cps = j["checkpoints"] = nlohmann::json::array();
  for (const auto& [len, h] : report.checkpoints) cps.push_back({{"prefix_len", len}, {"H_value", h}});
  return j;
}

nlohmann::json to_json(const RateEstimate& estimate) {
  nlohmann::json j;
  j["mode"] = to_string(estimate.mode);
  j["estimate"] = estimate.estimate;
  j["n_used"] = estimate.n_used;
  auto& per = j["per_length"] = nlohmann::json::object();
  for (const auto& [ell, h] : estimate.per_length) per[std::to_string(ell)] = h;
  auto& reps = j["reports"] = nlohmann::json::array();
  for (const auto& r : estimate.reports) reps.push_back(to_json(r));
  return j;
}

std::string to_csv(const EntropyReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "prefix_len,H_value\n";
  for (const auto& [len, h] : report.checkpoints) out << len << ',' << h << '\n';
  return out.str();
}

}  // namespace galelab
