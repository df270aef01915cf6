#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace zk {

/// Uniform grid x_i = i * dx, i = 0..n-1, on [0, x_max].
class XGrid {
 public:
  XGrid() = default;
  XGrid(std::size_t n, double x_max);

  std::size_t size() const noexcept { return n_; }
  double x_max() const noexcept { return x_max_; }
  double dx() const noexcept { return dx_; }
  double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx_; }

 private:
  std::size_t n_ = 0;
  double x_max_ = 0.0;
  double dx_ = 0.0;
};

/// Solution on the half-strip grid, stored by y-mode: value(l, i) = u_l(x_i),
/// the coefficient of the l-th eigenfunction (zero-based) at x_i.
class Field {
 public:
  Field() = default;
  Field(std::size_t n_modes, std::size_t n_x);

  std::size_t modes() const noexcept { return n_modes_; }
  std::size_t points() const noexcept { return n_x_; }

  double& operator()(std::size_t l, std::size_t i) noexcept { return data_[l * n_x_ + i]; }
  double operator()(std::size_t l, std::size_t i) const noexcept { return data_[l * n_x_ + i]; }

  std::span<double> mode(std::size_t l) noexcept { return {data_.data() + l * n_x_, n_x_}; }
  std::span<const double> mode(std::size_t l) const noexcept {
    return {data_.data() + l * n_x_, n_x_};
  }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  void fill(double v);
  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  /// this += s * other
  void axpy(double s, const Field& other);

  bool all_finite() const noexcept;
  double max_abs() const noexcept;

 private:
  std::size_t n_modes_ = 0;
  std::size_t n_x_ = 0;
  std::vector<double> data_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

}  // namespace zk
