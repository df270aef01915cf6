#include "zk/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <numbers>

#include "zk/error.hpp"

namespace zk {

namespace {
// FFTW planning is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Impl {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  explicit Impl(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    const int ni = static_cast<int>(n);
    fwd = fftw_plan_dft_r2c_1d(ni, real, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(ni, spec, real, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(spec);
  }
};

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n == 0) throw ConfigError("FFT length must be positive");
  impl_ = std::make_unique<Impl>(n);
}
RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  if (in.size() != n_ || out.size() != spectrum_size()) throw ShapeError("RealFft::forward size");
  std::copy(in.begin(), in.end(), impl_->real);
  fftw_execute(impl_->fwd);
  const auto* s = reinterpret_cast<const std::complex<double>*>(impl_->spec);
  std::copy(s, s + spectrum_size(), out.begin());
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  if (in.size() != spectrum_size() || out.size() != n_) throw ShapeError("RealFft::inverse size");
  auto* s = reinterpret_cast<std::complex<double>*>(impl_->spec);
  std::copy(in.begin(), in.end(), s);
  fftw_execute(impl_->inv);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = impl_->real[k] * scale;
}

struct ComplexFft::Impl {
  fftw_complex* a = nullptr;
  fftw_complex* b = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  explicit Impl(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    a = fftw_alloc_complex(n);
    b = fftw_alloc_complex(n);
    const int ni = static_cast<int>(n);
    fwd = fftw_plan_dft_1d(ni, a, b, FFTW_FORWARD, FFTW_ESTIMATE);
    inv = fftw_plan_dft_1d(ni, a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(a);
    fftw_free(b);
  }
};

ComplexFft::ComplexFft(std::size_t n) : n_(n) {
  if (n == 0) throw ConfigError("FFT length must be positive");
  impl_ = std::make_unique<Impl>(n);
}
ComplexFft::~ComplexFft() = default;
ComplexFft::ComplexFft(ComplexFft&&) noexcept = default;
ComplexFft& ComplexFft::operator=(ComplexFft&&) noexcept = default;

void ComplexFft::forward(std::span<const std::complex<double>> in,
                         std::span<std::complex<double>> out) {
  if (in.size() != n_ || out.size() != n_) throw ShapeError("ComplexFft::forward size");
  auto* a = reinterpret_cast<std::complex<double>*>(impl_->a);
  std::copy(in.begin(), in.end(), a);
  fftw_execute(impl_->fwd);
  const auto* b = reinterpret_cast<const std::complex<double>*>(impl_->b);
  std::copy(b, b + n_, out.begin());
}

void ComplexFft::inverse(std::span<const std::complex<double>> in,
                         std::span<std::complex<double>> out) {
  if (in.size() != n_ || out.size() != n_) throw ShapeError("ComplexFft::inverse size");
  auto* a = reinterpret_cast<std::complex<double>*>(impl_->a);
  std::copy(in.begin(), in.end(), a);
  fftw_execute(impl_->inv);
  const auto* b = reinterpret_cast<const std::complex<double>*>(impl_->b);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = b[k] * scale;
}

double dft_frequency(std::size_t k, std::size_t n, double h) {
  const double kk = (2 * k <= n) ? static_cast<double>(k)
                                 : static_cast<double>(k) - static_cast<double>(n);
  return 2.0 * std::numbers::pi * kk / (static_cast<double>(n) * h);
}

}  // namespace zk
