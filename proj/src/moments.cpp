#include "ptx/moments.hpp"

#include <cmath>

namespace ptx {

void RunningStats::merge(const RunningStats& other) {
  if (other.count_ == 0) {
    return;
  }
  if (count_ == 0) {
    *this = other;
    return;
  }
  const auto na = static_cast<double>(count_);
  const auto nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  count_ += other.count_;
}

double RunningStats::sd() const { return std::sqrt(variance()); }

void ComplexMomentAccumulator::add(std::complex<double> w) {
  const double dx = w.real() - re_.mean();
  re_.add(w.real());
  im_.add(w.imag());
  co_moment_ += dx * (w.imag() - im_.mean());
  abs2_.add(std::norm(w));
  const std::complex<double> sq = w * w;
  square_re_.add(sq.real());
  square_im_.add(sq.imag());
}

void ComplexMomentAccumulator::merge(const ComplexMomentAccumulator& other) {
  if (other.count() == 0) {
    return;
  }
  const auto na = static_cast<double>(count());
  const auto nb = static_cast<double>(other.count());
  const double dx = other.re_.mean() - re_.mean();
  const double dy = other.im_.mean() - im_.mean();
  co_moment_ += other.co_moment_ + dx * dy * na * nb / (na + nb);
  re_.merge(other.re_);
  im_.merge(other.im_);
  abs2_.merge(other.abs2_);
  square_re_.merge(other.square_re_);
  square_im_.merge(other.square_im_);
}

MomentSummary ComplexMomentAccumulator::summary() const {
  MomentSummary s;
  s.count = count();
  s.mean = {re_.mean(), im_.mean()};
  s.re_sd = re_.sd();
  s.im_sd = im_.sd();
  s.abs2_mean = abs2_.mean();
  s.abs2_sd = abs2_.sd();
  s.square_mean = {square_re_.mean(), square_im_.mean()};
  s.square_re_sd = square_re_.sd();
  s.square_im_sd = square_im_.sd();
  if (s.count > 1 && s.re_sd > 0.0 && s.im_sd > 0.0) {
    s.cross_corr = co_moment_ / static_cast<double>(s.count - 1) / (s.re_sd * s.im_sd);
  }
  return s;
}

}  // namespace ptx
