#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "galelab/core.hpp"
#include "galelab/stream.hpp"

namespace galelab {

enum class BlockMode { disjoint, sliding };

std::string_view to_string(BlockMode mode);
BlockMode parse_block_mode(std::string_view text);

/// Occurrence counts of ℓ-blocks, dense over Σ^ℓ.
struct BlockCounts {
  std::size_t block_length = 0;
  BlockMode mode = BlockMode::disjoint;
  std::size_t sigma = 2;
  std::vector<std::uint64_t> counts;  // indexed by BlockCode
  std::uint64_t window_total = 0;

  std::uint64_t count(const Word& block) const;
};

BlockCounts count_disjoint(const Word& x, std::size_t block_length);
BlockCounts count_sliding(const Word& x, std::size_t block_length);

/// Normalized plug-in entropy in [0,1], with 0·log 0 = 0.
double block_entropy(const BlockCounts& counts);

/// Incremental block counter; O(1) per symbol in both modes.
class BlockCounter {
 public:
  BlockCounter(std::size_t sigma, std::size_t block_length, BlockMode mode);

  void push(Symbol s) {
    ++seen_;
    code_ = (code_ * sigma_ + s) % space_;
    if (mode_ == BlockMode::sliding) {
      if (seen_ >= block_length_) {
        ++counts_[code_];
        ++total_;
      }
    } else if (seen_ % block_length_ == 0) {
      ++counts_[code_];
      ++total_;
      code_ = 0;
    }
  }

  std::uint64_t symbols_seen() const noexcept { return seen_; }
  std::uint64_t window_total() const noexcept { return total_; }
  double entropy() const;
  BlockCounts snapshot() const;

 private:
  std::size_t sigma_;
  std::size_t block_length_;
  BlockMode mode_;
  std::uint64_t space_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t seen_ = 0;
  std::uint64_t total_ = 0;
  BlockCode code_ = 0;
};

/// Geometric prefix-length schedule n_j = ceil(first·ratio^j), always ending at n.
struct CheckpointSchedule {
  std::uint64_t first = 1000;
  double ratio = 1.5;

  std::vector<std::uint64_t> points(std::uint64_t n) const;
};

/// Symbols that must be seen before a checkpoint counts toward the running minimum.
std::uint64_t burn_in_length(std::size_t sigma, std::size_t block_length);

struct EntropyReport {
  std::size_t block_length = 0;
  BlockMode mode = BlockMode::disjoint;
  std::vector<std::pair<std::uint64_t, double>> checkpoints;  // (prefix length, H_ℓ)
  double running_min = 1.0;
  std::uint64_t burn_in = 0;
  /// Counts at the checkpoint that realized running_min (final checkpoint
  /// when none lies past burn_in).
  BlockCounts min_counts;
};

/// H_ℓ at each checkpoint of the first `n` symbols of a stream.
EntropyReport entropy_profile(SymbolStream& stream, std::size_t block_length, BlockMode mode, std::uint64_t n,
                              const CheckpointSchedule& schedule = {});

/// Per-ℓ running minima for ℓ = 1..max_length and their minimum.
struct RateEstimate {
  BlockMode mode = BlockMode::disjoint;
  std::map<std::size_t, double> per_length;
  double estimate = 1.0;
  std::uint64_t n_used = 0;
  std::vector<EntropyReport> reports;
};

/// Single pass over the stream with one counter per block length.
RateEstimate entropy_rate_estimate(SymbolStream& stream, std::size_t max_length, BlockMode mode, std::uint64_t n,
                                   const CheckpointSchedule& schedule = {});

nlohmann::json to_json(const EntropyReport& report);
nlohmann::json to_json(const RateEstimate& estimate);
/// Columns: prefix_len,H_value
std::string to_csv(const EntropyReport& report);

}  // namespace galelab
