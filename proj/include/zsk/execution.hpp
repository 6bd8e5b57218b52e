#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "zsk/compensated.hpp"
#include "zsk/error.hpp"

namespace zsk {

/*
  Reduction layout for group-indexed series. The index range is cut into
  chunks of `chunk` consecutive indices; each chunk is summed on its own
  compensated accumulator and the chunk results are merged in ascending chunk
  order. The result therefore depends on `chunk` but never on `threads`.
*/
struct Execution {
  unsigned threads = 1;
  std::int64_t chunk = 1 << 14;

  void validate() const {
    if (threads == 0) throw domain_error("execution: threads must be >= 1");
    if (chunk < 1) throw domain_error("execution: chunk must be >= 1");
  }
};

/// Sums term(i) for i in [first, last]; returns the merged accumulator.
template <typename Value, typename Term>
accumulator_for_t<Value> chunked_sum(std::int64_t first, std::int64_t last, Term&& term,
                                     const Execution& exec) {
  exec.validate();
  using Acc = accumulator_for_t<Value>;
  Acc total;
  if (last < first) return total;

  const std::int64_t count = last - first + 1;
  const std::int64_t chunks = (count + exec.chunk - 1) / exec.chunk;
  std::vector<Acc> partial(static_cast<std::size_t>(chunks));

  auto run_chunk = [&](std::int64_t c) {
    const std::int64_t lo = first + c * exec.chunk;
    const std::int64_t hi = std::min(last, lo + exec.chunk - 1);
    Acc acc;
    for (std::int64_t i = lo; i <= hi; ++i) acc.add(term(i));
    partial[static_cast<std::size_t>(c)] = acc;
  };

  const auto workers = static_cast<std::int64_t>(
      std::min<std::int64_t>(exec.threads, chunks));
  if (workers <= 1) {
    for (std::int64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::int64_t c = w; c < chunks; c += workers) run_chunk(c);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (const auto& acc : partial) total.merge(acc);
  return total;
}

/// Evaluates fn(i) for i in [0, n) into a vector, in parallel; order of the
/// output is the index order regardless of thread count.
template <typename Value, typename Fn>
std::vector<Value> parallel_map(std::int64_t n, Fn&& fn, unsigned threads) {
  std::vector<Value> out(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
  if (n <= 0) return out;
  const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(std::max(threads, 1u), n));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::int64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::int64_t i = w; i < n; i += workers) out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Thread count from the ZSK_THREADS environment variable, or 1.
inline unsigned default_threads() {
  if (const char* env = std::getenv("ZSK_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v <= 1024) return static_cast<unsigned>(v);
  }
  return 1;
}

}  // namespace zsk
