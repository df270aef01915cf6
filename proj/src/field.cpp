#include "zk/field.hpp"

#include <algorithm>
#include <cmath>

#include "zk/error.hpp"

namespace zk {

XGrid::XGrid(std::size_t n, double x_max) : n_(n), x_max_(x_max) {
  if (n < 2) throw ConfigError("x-grid needs at least 2 points");
  if (!(x_max > 0.0)) throw ConfigError("x-grid length must be positive");
  dx_ = x_max / static_cast<double>(n - 1);
}

Field::Field(std::size_t n_modes, std::size_t n_x)
    : n_modes_(n_modes), n_x_(n_x), data_(n_modes * n_x, 0.0) {}

void Field::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Field& Field::operator+=(const Field& other) {
  if (other.data_.size() != data_.size()) throw ShapeError("field shape mismatch in +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (other.data_.size() != data_.size()) throw ShapeError("field shape mismatch in -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

void Field::axpy(double s, const Field& other) {
  if (other.data_.size() != data_.size()) throw ShapeError("field shape mismatch in axpy");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * other.data_[k];
}

bool Field::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

}  // namespace zk
