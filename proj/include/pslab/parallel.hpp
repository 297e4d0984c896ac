#pragma once

// Deterministic chunked map/reduce.
//
// A range [begin, end) is cut into fixed-size chunks. Each chunk is mapped
// independently (possibly on different threads) and the per-chunk results
// are combined strictly in chunk order, so the result depends only on the
// chunk size, never on the thread count or scheduling.

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pslab {

inline constexpr std::uint64_t kDefaultChunk = std::uint64_t{1} << 16;

/// Neumaier-compensated accumulator.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if (abs_(sum_) >= abs_(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  T value() const { return sum_ + comp_; }

 private:
  static T abs_(T v) { return v < 0 ? -v : v; }
  T sum_{};
  T comp_{};
};

/// Complex accumulator built from two compensated real sums.
template <typename T>
class CompensatedComplexSum {
 public:
  void add(std::complex<T> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  void add(const CompensatedComplexSum& other) {
    re_.add(other.re_);
    im_.add(other.im_);
  }
  std::complex<T> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<T> re_;
  CompensatedSum<T> im_;
};

class Executor {
 public:
  explicit Executor(unsigned threads = 1, std::uint64_t chunk = kDefaultChunk)
      : threads_(threads == 0 ? 1 : threads), chunk_(chunk == 0 ? 1 : chunk) {}

  static const Executor& serial() {
    static const Executor e{1};
    return e;
  }

  unsigned threads() const { return threads_; }
  std::uint64_t chunk() const { return chunk_; }

  /// Maps every chunk [lo, hi) of [begin, end) through `map` and returns
  /// the per-chunk results in chunk order.
  template <typename Map>
  auto map_chunks(std::uint64_t begin, std::uint64_t end, Map&& map) const
      -> std::vector<decltype(map(begin, end))> {
    using R = decltype(map(begin, end));
    if (end <= begin) return {};
    const std::uint64_t n_chunks = (end - begin + chunk_ - 1) / chunk_;
    std::vector<R> out(n_chunks);
    auto run_chunk = [&](std::uint64_t i) {
      const std::uint64_t lo = begin + i * chunk_;
      const std::uint64_t hi = std::min(end, lo + chunk_);
      out[i] = map(lo, hi);
    };
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(threads_, n_chunks));
    if (workers <= 1) {
      for (std::uint64_t i = 0; i < n_chunks; ++i) run_chunk(i);
      return out;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::uint64_t i = next.fetch_add(1);
          if (i >= n_chunks) return;
          try {
            run_chunk(i);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next.store(n_chunks);
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
  }

  /// map_chunks followed by an in-order left fold with `combine`.
  template <typename T, typename Map, typename Combine>
  T map_reduce(std::uint64_t begin, std::uint64_t end, T init, Map&& map,
               Combine&& combine) const {
    auto parts = map_chunks(begin, end, std::forward<Map>(map));
    for (auto& p : parts) combine(init, p);
    return init;
  }

 private:
  unsigned threads_;
  std::uint64_t chunk_;
};

}  // namespace pslab
