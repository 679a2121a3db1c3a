#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sops/block_space.hpp"

namespace sops {

enum class BlockPolicy { kFull, kRoundRobin, kRandomCovering };
enum class LagPolicy { kZero, kFixed, kRandom };

struct ScheduleConfig {
  BlockPolicy policy = BlockPolicy::kFull;
  int P = 0;  // coverage window: every P+1 consecutive rounds activate all
  int T = 0;  // max lag
  std::uint64_t seed = 1;
  LagPolicy lag_policy = LagPolicy::kZero;
  int fixed_lag = 0;  // for kFixed, clamped at iteration 0, must be <= T
  int chunk = 1;      // group size for kRoundRobin
};

BlockPolicy block_policy_from_string(const std::string& s);
LagPolicy lag_policy_from_string(const std::string& s);
std::string to_string(BlockPolicy p);
std::string to_string(LagPolicy p);

/// Deterministic block-activation and lag source. Activation sequences
/// are cached lazily; extension is not synchronized, so concurrent use is
/// limited to a single driving solver (readers of already-generated
/// prefixes are fine).
class Schedule {
 public:
  Schedule(ScheduleConfig cfg, int n_primal, int n_dual);

  const ScheduleConfig& config() const { return cfg_; }
  int P() const { return cfg_.P; }
  int T() const { return cfg_.T; }

  // (I_n, K_n): nonempty sorted index subsets; I_0, K_0 are always full
  std::pair<std::vector<int>, std::vector<int>> blocks_at(long n) const;

  // pi_i(n), omega_k(n) in [max(0, n - T), n]
  long lag_primal(int i, long n) const;
  long lag_dual(int k, long n) const;

 private:
  std::vector<int> subset_at(long n, int set_size, std::uint64_t tag,
                             std::vector<std::vector<int>>& cache,
                             std::vector<long>& last_seen) const;
  long lag_at(std::uint64_t tag, int index, long n) const;

  ScheduleConfig cfg_;
  int n_primal_;
  int n_dual_;
  mutable std::vector<std::vector<int>> cache_i_, cache_k_;
  mutable std::vector<long> last_seen_i_, last_seen_k_;
};

/// Ring of the last T+1 published states, indexed by iteration number.
class HistoryBuffer {
 public:
  explicit HistoryBuffer(int T);

  // n must be horizon+1 (or 0 for the first push)
  void push(long n, StateX state);
  // valid for m in [max(0, horizon - T), horizon]
  const StateX& get(long m) const;
  long horizon() const { return horizon_; }

 private:
  int window_;
  long horizon_ = -1;
  std::vector<StateX> ring_;
};

}  // namespace sops
