#ifndef HOFA_STATS_H_
#define HOFA_STATS_H_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>

#include "hofa/mode.h"
#include "hofa/parallel.h"

namespace hofa {

// Running mean and standard error of complex samples.
class SampleStats {
 public:
  void add(std::complex<double> z) {
    sum_.add(z);
    sq_ += std::norm(z);
    ++count_;
  }
  void merge(const SampleStats& o) {
    sum_.merge(o.sum_);
    sq_ += o.sq_;
    count_ += o.count_;
  }
  Estimate estimate() const {
    Estimate e;
    e.exact = false;
    e.samples = count_;
    if (count_ == 0) return e;
    e.value = sum_.value() / static_cast<double>(count_);
    if (count_ > 1) {
      const double n = static_cast<double>(count_);
      const double var = std::max(0.0, (sq_ - n * std::norm(e.value)) / (n - 1));
      e.std_error = std::sqrt(var / n);
    }
    return e;
  }

 private:
  ComplexSum sum_;
  double sq_ = 0;
  uint64_t count_ = 0;
};

}  // namespace hofa

#endif  // HOFA_STATS_H_
