#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace rmc {

/// Thrown when an exhaustive scan would enumerate more items than the caller
/// allowed. `required` carries the exact count so it can be reported.
struct BudgetExceeded : std::runtime_error {
  std::uint64_t required;
  BudgetExceeded(std::uint64_t required_, std::uint64_t budget)
      : std::runtime_error("scan requires " + std::to_string(required_) +
                           " items, budget is " + std::to_string(budget)),
        required(required_) {}
};

/// Execution knobs shared by all exhaustive scans.
struct Exec {
  int workers = 1;
  std::uint64_t budget = 100'000'000;  // max enumerated items per scan
  std::function<void(std::uint64_t, std::uint64_t)> progress;  // (done, total)
};

inline void check_budget(std::uint64_t required, const Exec& ex) {
  if (required > ex.budget) throw BudgetExceeded(required, ex.budget);
}

/// splitmix64. The algorithm is fixed so that seeded draws reproduce
/// bit-for-bit across platforms and releases.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform-ish value in [0, bound). Uses plain reduction; the tiny modulo
  /// bias is irrelevant here and keeps the stream easy to reproduce.
  std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }

 private:
  std::uint64_t state_;
};

/// Splits [0,total) into fixed 2^16-item chunks, evaluates chunks on
/// `ex.workers` threads and merges the per-chunk results in chunk order.
/// Chunk boundaries do not depend on the worker count, so any associative
/// merge gives results that are stable under it. Reductions used throughout
/// this library are max/exists with smallest-index tie-breaks, which are also
/// partition-invariant.
template <typename R, typename ChunkFn, typename MergeFn>
R scan_reduce(std::uint64_t total, const Exec& ex, R init, ChunkFn chunk, MergeFn merge) {
  if (total == 0) return init;
  constexpr std::uint64_t kGrain = std::uint64_t(1) << 16;
  const std::uint64_t nchunks = (total + kGrain - 1) / kGrain;
  int workers = ex.workers > 0 ? ex.workers : 1;
  if (static_cast<std::uint64_t>(workers) > nchunks) workers = static_cast<int>(nchunks);

  auto chunk_range = [&](std::uint64_t c) {
    std::uint64_t b = c * kGrain;
    std::uint64_t e = std::min(total, b + kGrain);
    return std::pair<std::uint64_t, std::uint64_t>(b, e);
  };

  if (workers == 1) {
    R acc = init;
    std::uint64_t done = 0;
    for (std::uint64_t c = 0; c < nchunks; ++c) {
      auto [b, e] = chunk_range(c);
      acc = merge(std::move(acc), chunk(b, e));
      done = e;
      if (ex.progress) ex.progress(done, total);
    }
    return acc;
  }

  std::vector<R> results(nchunks, init);
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> done{0};
  std::mutex progress_mu;
  auto worker = [&]() {
    for (;;) {
      std::uint64_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      auto [b, e] = chunk_range(c);
      results[c] = chunk(b, e);
      std::uint64_t d = done.fetch_add(e - b) + (e - b);
      if (ex.progress) {
        std::lock_guard<std::mutex> lk(progress_mu);
        ex.progress(d, total);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  R acc = init;
  for (std::uint64_t c = 0; c < nchunks; ++c) acc = merge(std::move(acc), std::move(results[c]));
  return acc;
}

}  // namespace rmc
