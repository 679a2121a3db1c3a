#include "sops/schedule.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sops {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

std::vector<int> all_indices(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

BlockPolicy block_policy_from_string(const std::string& s) {
  if (s == "full") return BlockPolicy::kFull;
  if (s == "round_robin") return BlockPolicy::kRoundRobin;
  if (s == "random_covering") return BlockPolicy::kRandomCovering;
  throw std::invalid_argument("unknown block policy '" + s + "'");
}

LagPolicy lag_policy_from_string(const std::string& s) {
  if (s == "zero") return LagPolicy::kZero;
  if (s == "fixed") return LagPolicy::kFixed;
  if (s == "random") return LagPolicy::kRandom;
  throw std::invalid_argument("unknown lag policy '" + s + "'");
}

std::string to_string(BlockPolicy p) {
  switch (p) {
    case BlockPolicy::kFull: return "full";
    case BlockPolicy::kRoundRobin: return "round_robin";
    case BlockPolicy::kRandomCovering: return "random_covering";
  }
  return "?";
}

std::string to_string(LagPolicy p) {
  switch (p) {
    case LagPolicy::kZero: return "zero";
    case LagPolicy::kFixed: return "fixed";
    case LagPolicy::kRandom: return "random";
  }
  return "?";
}

Schedule::Schedule(ScheduleConfig cfg, int n_primal, int n_dual)
    : cfg_(cfg), n_primal_(n_primal), n_dual_(n_dual) {
  if (n_primal < 1 || n_dual < 1) {
    throw std::invalid_argument("Schedule: empty index set");
  }
  if (cfg_.P < 0 || cfg_.T < 0) {
    throw std::invalid_argument("Schedule: P and T must be >= 0");
  }
  if (cfg_.lag_policy == LagPolicy::kFixed &&
      (cfg_.fixed_lag < 0 || cfg_.fixed_lag > cfg_.T)) {
    throw std::invalid_argument("Schedule: fixed lag must lie in [0, T]");
  }
  if (cfg_.lag_policy == LagPolicy::kZero && cfg_.T < 0) {
    throw std::invalid_argument("Schedule: bad T");
  }
  if (cfg_.policy == BlockPolicy::kRoundRobin) {
    if (cfg_.chunk < 1) {
      throw std::invalid_argument("Schedule: round_robin chunk must be >= 1");
    }
    auto groups = [&](int size) { return (size + cfg_.chunk - 1) / cfg_.chunk; };
    int need = std::max(groups(n_primal_), groups(n_dual_)) - 1;
    if (cfg_.P < need) {
      throw std::invalid_argument(
          "Schedule: round_robin with chunk " + std::to_string(cfg_.chunk) +
          " needs P >= " + std::to_string(need));
    }
  }
  last_seen_i_.assign(n_primal_, 0);
  last_seen_k_.assign(n_dual_, 0);
}

std::vector<int> Schedule::subset_at(long n, int set_size, std::uint64_t tag,
                                     std::vector<std::vector<int>>& cache,
                                     std::vector<long>& last_seen) const {
  if (n == 0 || cfg_.policy == BlockPolicy::kFull) {
    return all_indices(set_size);
  }
  if (cfg_.policy == BlockPolicy::kRoundRobin) {
    int groups = (set_size + cfg_.chunk - 1) / cfg_.chunk;
    int g = static_cast<int>((n - 1) % groups);
    std::vector<int> out;
    for (int j = g * cfg_.chunk; j < std::min((g + 1) * cfg_.chunk, set_size);
         ++j) {
      out.push_back(j);
    }
    return out;
  }
  // random_covering: sequential construction, cached from iteration 1 on
  while (static_cast<long>(cache.size()) < n) {
    long m = static_cast<long>(cache.size()) + 1;  // next iteration to fill
    std::uint64_t h = mix(mix(cfg_.seed, tag), static_cast<std::uint64_t>(m));
    std::vector<int> chosen;
    for (int j = 0; j < set_size; ++j) {
      bool in = (splitmix64(h + static_cast<std::uint64_t>(j)) & 1u) != 0;
      // any index unseen for P consecutive iterations is forced in
      if (m - last_seen[j] >= cfg_.P + 1) in = true;
      if (in) {
        chosen.push_back(j);
        last_seen[j] = m;
      }
    }
    if (chosen.empty()) {
      int j = static_cast<int>(splitmix64(h ^ 0xabcdULL) %
                               static_cast<std::uint64_t>(set_size));
      chosen.push_back(j);
      last_seen[j] = m;
    }
    cache.push_back(std::move(chosen));
  }
  return cache[n - 1];
}

std::pair<std::vector<int>, std::vector<int>> Schedule::blocks_at(
    long n) const {
  if (n < 0) throw std::invalid_argument("blocks_at: n must be >= 0");
  return {subset_at(n, n_primal_, 0x49ULL, cache_i_, last_seen_i_),
          subset_at(n, n_dual_, 0x4bULL, cache_k_, last_seen_k_)};
}

long Schedule::lag_at(std::uint64_t tag, int index, long n) const {
  switch (cfg_.lag_policy) {
    case LagPolicy::kZero:
      return n;
    case LagPolicy::kFixed:
      return std::max(0L, n - cfg_.fixed_lag);
    case LagPolicy::kRandom: {
      long span = std::min<long>(cfg_.T, n);
      std::uint64_t h = mix(mix(cfg_.seed, tag),
                            mix(static_cast<std::uint64_t>(index) + 1,
                                static_cast<std::uint64_t>(n)));
      return n - static_cast<long>(h % static_cast<std::uint64_t>(span + 1));
    }
  }
  return n;
}

long Schedule::lag_primal(int i, long n) const {
  if (n < 0 || i < 0 || i >= n_primal_) {
    throw std::invalid_argument("lag_primal: bad arguments");
  }
  return lag_at(0x70ULL, i, n);
}

long Schedule::lag_dual(int k, long n) const {
  if (n < 0 || k < 0 || k >= n_dual_) {
    throw std::invalid_argument("lag_dual: bad arguments");
  }
  return lag_at(0x77ULL, k, n);
}

HistoryBuffer::HistoryBuffer(int T) : window_(T + 1) {
  if (T < 0) throw std::invalid_argument("HistoryBuffer: T must be >= 0");
  ring_.resize(window_);
}

void HistoryBuffer::push(long n, StateX state) {
  if (n != horizon_ + 1) {
    throw std::logic_error("HistoryBuffer: non-sequential push");
  }
  ring_[n % window_] = std::move(state);
  horizon_ = n;
}

const StateX& HistoryBuffer::get(long m) const {
  if (m < 0 || m > horizon_ || m < horizon_ - (window_ - 1)) {
    throw std::out_of_range("HistoryBuffer: iteration " + std::to_string(m) +
                            " not retained (horizon " +
                            std::to_string(horizon_) + ")");
  }
  return ring_[m % window_];
}

}  // namespace sops
