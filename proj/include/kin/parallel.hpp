#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace kin {

// Fork-join helper. Work is split into fixed-size chunks so that results of
// chunked reductions do not depend on the worker count: chunk partials are
// always combined in chunk-index order on the calling thread.
class WorkerPool {
 public:
  explicit WorkerPool(int workers = 1) : workers_(std::max(1, workers)) {}

  int workers() const { return workers_; }

  static constexpr int kChunk = 256;

  void parallel_for(int n, const std::function<void(int, int)>& body) const {
    if (n <= 0) return;
    const int nchunks = (n + kChunk - 1) / kChunk;
    if (workers_ == 1 || nchunks == 1) {
      body(0, n);
      return;
    }
    std::atomic<int> next{0};
    auto run = [&]() {
      for (;;) {
        const int c = next.fetch_add(1);
        if (c >= nchunks) break;
        body(c * kChunk, std::min(n, (c + 1) * kChunk));
      }
    };
    std::vector<std::thread> ts;
    ts.reserve(workers_ - 1);
    for (int i = 0; i + 1 < workers_; ++i) ts.emplace_back(run);
    run();
    for (auto& t : ts) t.join();
  }

  // Deterministic chunked reduction: partial[c] is filled independently per
  // chunk, then summed in chunk order.
  double reduce_sum(int n, const std::function<double(int, int)>& chunk_sum) const {
    if (n <= 0) return 0.0;
    const int nchunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(nchunks, 0.0);
    if (workers_ == 1 || nchunks == 1) {
      for (int c = 0; c < nchunks; ++c)
        partial[c] = chunk_sum(c * kChunk, std::min(n, (c + 1) * kChunk));
    } else {
      std::atomic<int> next{0};
      auto run = [&]() {
        for (;;) {
          const int c = next.fetch_add(1);
          if (c >= nchunks) break;
          partial[c] = chunk_sum(c * kChunk, std::min(n, (c + 1) * kChunk));
        }
      };
      std::vector<std::thread> ts;
      ts.reserve(workers_ - 1);
      for (int i = 0; i + 1 < workers_; ++i) ts.emplace_back(run);
      run();
      for (auto& t : ts) t.join();
    }
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
  }

 private:
  int workers_;
};

}  // namespace kin
