#ifndef HOFA_PARALLEL_H_
#define HOFA_PARALLEL_H_

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace hofa {

// Neumaier-compensated complex sum.
class ComplexSum {
 public:
  void add(std::complex<double> z) {
    add_part(re_, re_c_, z.real());
    add_part(im_, im_c_, z.imag());
  }
  void merge(const ComplexSum& o) {
    add(o.value());
  }
  std::complex<double> value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
};

// Worker threads used by exact enumerations. Defaults to $HOFA_THREADS, else
// the hardware concurrency. Results never depend on this value.
int worker_count();
void set_worker_count(int threads);

// Splits [0, total) into a fixed number of chunks (independent of the worker
// count) and runs body(begin, end, chunk) on each. Chunks are processed in
// parallel; callers combine per-chunk results in chunk order.
int chunk_count(uint64_t total);
void for_each_chunk(uint64_t total, const std::function<void(uint64_t, uint64_t, int)>& body);
// Same, with chunks of at least min_chunk items, for loops whose items are
// expensive.
int chunk_count(uint64_t total, uint64_t min_chunk);
void for_each_chunk(uint64_t total, uint64_t min_chunk, const std::function<void(uint64_t, uint64_t, int)>& body);

// Deterministic parallel sum of term(i) over [0, total).
std::complex<double> parallel_sum(uint64_t total, const std::function<std::complex<double>(uint64_t)>& term);

}  // namespace hofa

#endif  // HOFA_PARALLEL_H_
