#pragma once

#include <complex>
#include <cstdint>
#include <string>

namespace ptx {

// Welford accumulator for the mean and variance of one real quantity, with
// Chan et al. pairwise merge.
class RunningStats {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStats& other);

  std::int64_t count() const { return count_; }
  double mean() const { return mean_; }
  // Unbiased (n - 1) sample variance; zero below two samples.
  double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
  double sd() const;

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Moments of a complex sample w as reported for self-energies.
struct MomentSummary {
  std::int64_t count = 0;
  std::complex<double> mean;
  double re_sd = 0.0;
  double im_sd = 0.0;
  double abs2_mean = 0.0;
  double abs2_sd = 0.0;
  std::complex<double> square_mean;  // <w^2>
  double square_re_sd = 0.0;
  double square_im_sd = 0.0;
  // Pearson correlation of Re w and Im w; zero when either SD vanishes.
  double cross_corr = 0.0;
};

class ComplexMomentAccumulator {
 public:
  void add(std::complex<double> w);
  void merge(const ComplexMomentAccumulator& other);
  MomentSummary summary() const;
  std::int64_t count() const { return re_.count(); }

 private:
  RunningStats re_;
  RunningStats im_;
  RunningStats abs2_;
  RunningStats square_re_;
  RunningStats square_im_;
  double co_moment_ = 0.0;  // sum of (re - mean_re)(im - mean_im)
};

}  // namespace ptx
