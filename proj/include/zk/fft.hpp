#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace zk {

/// Real <-> half-complex DFT of fixed length (FFTW, estimate plans).
/// forward: X_k = sum_n x_n e^{-2 pi i k n / N}, k = 0..N/2.
/// inverse: x_n = (1/N) sum_k X_k e^{+2 pi i k n / N} (normalized).
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

/// Complex DFT of fixed length with the same sign/normalization conventions.
class ComplexFft {
 public:
  explicit ComplexFft(std::size_t n);
  ~ComplexFft();
  ComplexFft(ComplexFft&&) noexcept;
  ComplexFft& operator=(ComplexFft&&) noexcept;
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  std::size_t size() const noexcept { return n_; }

  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
  void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

/// Angular frequency of DFT bin k for n samples spaced by h (bins above n/2 are negative).
double dft_frequency(std::size_t k, std::size_t n, double h);

}  // namespace zk
