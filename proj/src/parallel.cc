#include "hofa/parallel.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace hofa {
namespace {

constexpr int kMaxChunks = 64;
constexpr uint64_t kMinChunk = 4096;

int default_workers() {
  if (const char* env = std::getenv("HOFA_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<int>& workers() {
  static std::atomic<int> value{default_workers()};
  return value;
}

}  // namespace

int worker_count() { return workers().load(); }

void set_worker_count(int threads) { workers().store(std::max(1, threads)); }

int chunk_count(uint64_t total) { return chunk_count(total, kMinChunk); }

int chunk_count(uint64_t total, uint64_t min_chunk) {
  if (total == 0) return 0;
  min_chunk = std::max<uint64_t>(min_chunk, 1);
  uint64_t chunks = (total + min_chunk - 1) / min_chunk;
  return static_cast<int>(std::min<uint64_t>(chunks, kMaxChunks));
}

void for_each_chunk(uint64_t total, const std::function<void(uint64_t, uint64_t, int)>& body) {
  for_each_chunk(total, kMinChunk, body);
}

void for_each_chunk(uint64_t total, uint64_t min_chunk, const std::function<void(uint64_t, uint64_t, int)>& body) {
  const int chunks = chunk_count(total, min_chunk);
  if (chunks == 0) return;
  auto bounds = [&](int c) {
    return std::pair<uint64_t, uint64_t>{total * c / chunks, total * (c + 1) / chunks};
  };
  const int threads = std::min(worker_count(), chunks);
  if (threads <= 1) {
    for (int c = 0; c < chunks; ++c) {
      auto [b, e] = bounds(c);
      body(b, e, c);
    }
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int c = next++; c < chunks; c = next++) {
        auto [b, e] = bounds(c);
        body(b, e, c);
      }
    });
  }
  for (auto& th : pool) th.join();
}

std::complex<double> parallel_sum(uint64_t total, const std::function<std::complex<double>(uint64_t)>& term) {
  std::vector<ComplexSum> partial(chunk_count(total));
  for_each_chunk(total, [&](uint64_t b, uint64_t e, int c) {
    ComplexSum s;
    for (uint64_t i = b; i < e; ++i) s.add(term(i));
    partial[c] = s;
  });
  ComplexSum total_sum;
  for (const auto& s : partial) total_sum.merge(s);
  return total_sum.value();
}

}  // namespace hofa
