#include "zk/eigenbasis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "zk/error.hpp"

namespace zk {

namespace {
constexpr double pi = std::numbers::pi;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}
}  // namespace

BoundaryCase parse_boundary_case(std::string_view text) {
  const std::string t = lower(text);
  if (t == "a" || t == "dirichletdirichlet" || t == "dirichlet") return BoundaryCase::DirichletDirichlet;
  if (t == "b" || t == "neumannneumann" || t == "neumann") return BoundaryCase::NeumannNeumann;
  if (t == "c" || t == "dirichletneumann" || t == "mixed") return BoundaryCase::DirichletNeumann;
  if (t == "d" || t == "periodic") return BoundaryCase::Periodic;
  throw ConfigError("unknown boundary case '" + std::string(text) + "'");
}

std::string_view boundary_case_letter(BoundaryCase c) {
  switch (c) {
    case BoundaryCase::DirichletDirichlet: return "a";
    case BoundaryCase::NeumannNeumann: return "b";
    case BoundaryCase::DirichletNeumann: return "c";
    case BoundaryCase::Periodic: return "d";
  }
  return "?";
}

std::size_t minimal_node_count(BoundaryCase c, std::size_t l_max) {
  switch (c) {
    case BoundaryCase::DirichletDirichlet: return l_max;
    case BoundaryCase::NeumannNeumann: return l_max + 1;
    case BoundaryCase::DirichletNeumann: return l_max;
    case BoundaryCase::Periodic: return 2 * (l_max / 2) + 1;
  }
  return l_max;
}

EigenBasis build_basis(BoundaryCase c, double width, std::size_t l_max, std::size_t n_nodes) {
  if (!(width > 0.0) || !std::isfinite(width)) throw ConfigError("strip width L must be positive");
  if (l_max == 0) throw ConfigError("l_max must be at least 1");
  const std::size_t n_min = minimal_node_count(c, l_max);
  if (n_nodes == 0) n_nodes = n_min;
  if (n_nodes < n_min) {
    throw ConfigError("node count " + std::to_string(n_nodes) + " below minimum " +
                      std::to_string(n_min) + " for l_max = " + std::to_string(l_max));
  }

  EigenBasis basis;
  basis.case_ = c;
  basis.width_ = width;
  basis.lambdas_.resize(l_max);
  basis.freqs_.resize(l_max);
  basis.phases_.resize(l_max);
  basis.amps_.assign(l_max, std::sqrt(2.0 / width));

  // psi = amp * sin(freq * y + phase); phase pi/2 turns sine into cosine.
  for (std::size_t m = 0; m < l_max; ++m) {
    const double md = static_cast<double>(m);
    double freq = 0.0;
    double phase = 0.0;
    switch (c) {
      case BoundaryCase::DirichletDirichlet:
        freq = (md + 1.0) * pi / width;
        break;
      case BoundaryCase::NeumannNeumann:
        freq = md * pi / width;
        phase = pi / 2;
        if (m == 0) basis.amps_[m] = 1.0 / std::sqrt(width);
        break;
      case BoundaryCase::DirichletNeumann:
        freq = (md + 0.5) * pi / width;
        break;
      case BoundaryCase::Periodic:
        if (m == 0) {
          basis.amps_[m] = 1.0 / std::sqrt(width);
          phase = pi / 2;
        } else {
          const std::size_t k = (m + 1) / 2;
          freq = 2.0 * pi * static_cast<double>(k) / width;
          phase = (m % 2 == 1) ? pi / 2 : 0.0;
        }
        break;
    }
    basis.freqs_[m] = freq;
    basis.phases_[m] = phase;
    basis.lambdas_[m] = freq * freq;
  }

  const double nd = static_cast<double>(n_nodes);
  basis.nodes_.resize(n_nodes);
  basis.weights_.resize(n_nodes);
  for (std::size_t j = 0; j < n_nodes; ++j) {
    const double jd = static_cast<double>(j);
    switch (c) {
      case BoundaryCase::DirichletDirichlet:
        basis.nodes_[j] = (jd + 1.0) * width / (nd + 1.0);
        basis.weights_[j] = width / (nd + 1.0);
        break;
      case BoundaryCase::NeumannNeumann:
        basis.nodes_[j] = jd * width / (nd - 1.0);
        basis.weights_[j] = width / (nd - 1.0);
        if (j == 0 || j + 1 == n_nodes) basis.weights_[j] *= 0.5;
        break;
      case BoundaryCase::DirichletNeumann:
        basis.nodes_[j] = (jd + 0.5) * width / nd;
        basis.weights_[j] = width / nd;
        break;
      case BoundaryCase::Periodic:
        basis.nodes_[j] = jd * width / nd;
        basis.weights_[j] = width / nd;
        break;
    }
  }

  basis.synthesis_.resize(static_cast<Eigen::Index>(n_nodes), static_cast<Eigen::Index>(l_max));
  for (std::size_t j = 0; j < n_nodes; ++j) {
    for (std::size_t m = 0; m < l_max; ++m) {
      basis.synthesis_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m)) =
          basis.evaluate(m, basis.nodes_[j]);
    }
  }
  const Eigen::Map<const Eigen::VectorXd> w(basis.weights_.data(),
                                            static_cast<Eigen::Index>(n_nodes));
  basis.analysis_ = (w.asDiagonal() * basis.synthesis_).transpose();
  return basis;
}

double EigenBasis::evaluate(std::size_t mode, double y, int order) const {
  if (mode >= size()) throw ShapeError("mode index out of range");
  if (order < 0) throw DomainError("negative derivative order");
  const double f = freqs_[mode];
  const double scale = (order == 0) ? 1.0 : std::pow(f, order);
  return amps_[mode] * scale * std::sin(f * y + phases_[mode] + order * pi / 2);
}

std::vector<double> EigenBasis::analyze(std::span<const double> values) const {
  if (values.size() != node_count()) {
    throw ShapeError("analyze: got " + std::to_string(values.size()) + " samples, basis has " +
                     std::to_string(node_count()) + " nodes");
  }
  const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
  std::vector<double> out(size());
  Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())).noalias() =
      analysis_ * v;
  return out;
}

std::vector<double> EigenBasis::synthesize(std::span<const double> coeffs) const {
  if (coeffs.size() > size()) {
    throw ShapeError("synthesize: " + std::to_string(coeffs.size()) + " coefficients for " +
                     std::to_string(size()) + " modes");
  }
  const auto k = static_cast<Eigen::Index>(coeffs.size());
  const Eigen::Map<const Eigen::VectorXd> c(coeffs.data(), k);
  std::vector<double> out(node_count());
  Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())).noalias() =
      synthesis_.leftCols(k) * c;
  return out;
}

double steklov_lambda1(const EigenBasis& basis) {
  const auto l = basis.eigenvalues();
  return *std::min_element(l.begin(), l.end());
}

}  // namespace zk
