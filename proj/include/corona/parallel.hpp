#pragma once

// Deterministic fork-join over an index range. Work is cut into fixed chunks
// independent of the thread count, and results are combined in chunk order,
// so outputs do not depend on the number of workers.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace corona {

/// Worker count: the flag if positive, else CORONA_WITNESS_JOBS, else 1.
inline unsigned resolve_jobs(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("CORONA_WITNESS_JOBS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    throw std::invalid_argument(std::string("CORONA_WITNESS_JOBS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

/// Calls body(chunk_begin, chunk_end, chunk_index) for consecutive chunks of
/// [0, count). Chunks are claimed dynamically; the first exception thrown by
/// any chunk is rethrown after all workers stop.
template <class Body>
void parallel_chunks(std::int64_t count, std::int64_t chunk, unsigned jobs, Body&& body) {
  if (count <= 0) return;
  chunk = std::max<std::int64_t>(1, chunk);
  const std::int64_t chunks = (count + chunk - 1) / chunk;
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::int64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(c * chunk, std::min(count, (c + 1) * chunk), c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(chunks);
      }
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::min<std::int64_t>(chunks, 1 << 16))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(n);
    for (unsigned i = 0; i < n; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);
}

/// Maps each chunk to a value and folds the values in chunk order.
template <class T, class Map, class Fold>
T parallel_reduce(std::int64_t count, std::int64_t chunk, unsigned jobs, T init, Map&& map, Fold&& fold) {
  if (count <= 0) return init;
  chunk = std::max<std::int64_t>(1, chunk);
  std::vector<T> parts(static_cast<std::size_t>((count + chunk - 1) / chunk), init);
  parallel_chunks(count, chunk, jobs, [&](std::int64_t b, std::int64_t e, std::int64_t c) {
    parts[static_cast<std::size_t>(c)] = map(b, e);
  });
  T acc = std::move(init);
  for (auto& p : parts) acc = fold(std::move(acc), std::move(p));
  return acc;
}

}  // namespace corona
