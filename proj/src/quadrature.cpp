#include "tribeam/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tribeam {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
// orthogonal-polynomial recurrence, weights mu0 * v0^2 from the first
// eigenvector components.
QuadratureRule golub_welsch(const Eigen::VectorXd& diag,
                            const Eigen::VectorXd& sub, double mu0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const int n = static_cast<int>(diag.size());
  QuadratureRule r;
  r.node.resize(n);
  r.weight.resize(n);
  for (int j = 0; j < n; ++j) {
    r.node[j] = es.eigenvalues()[j];
    const double v0 = es.eigenvectors()(0, j);
    r.weight[j] = mu0 * v0 * v0;
  }
  return r;
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite needs n >= 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int j = 1; j < n; ++j) sub[j - 1] = std::sqrt(j / 2.0);
  return golub_welsch(diag, sub, std::sqrt(std::numbers::pi));
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int j = 1; j < n; ++j) sub[j - 1] = j / std::sqrt(4.0 * j * j - 1.0);
  return golub_welsch(diag, sub, 2.0);
}

KernelNodes gaussian_kernel_nodes(double fwhm, int n) {
  KernelNodes k;
  if (fwhm <= 0.0) {
    k.offset = {0.0};
    k.weight = {1.0};
    return k;
  }
  const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  QuadratureRule r = gauss_hermite(n);
  double wsum = 0.0;
  for (double w : r.weight) wsum += w;
  k.offset.resize(n);
  k.weight.resize(n);
  for (int j = 0; j < n; ++j) {
    k.offset[j] = std::numbers::sqrt2 * sigma * r.node[j];
    k.weight[j] = r.weight[j] / wsum;
  }
  return k;
}

KernelNodes triangular_kernel_nodes(double fwhm, int n) {
  KernelNodes k;
  if (fwhm <= 0.0) {
    k.offset = {0.0};
    k.weight = {1.0};
    return k;
  }
  const double a = fwhm;  // half-base; triangle half-height sits at a/2
  QuadratureRule r = gauss_legendre(n);
  k.offset.reserve(2 * n);
  k.weight.reserve(2 * n);
  double wsum = 0.0;
  for (int half = 0; half < 2; ++half) {
    const double sign = half == 0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      const double u = sign * a * (r.node[j] + 1.0) / 2.0;
      const double density = (1.0 - std::abs(u) / a) / a;
      k.offset.push_back(u);
      k.weight.push_back(r.weight[j] * (a / 2.0) * density);
      wsum += k.weight.back();
    }
  }
  for (double& w : k.weight) w /= wsum;
  return k;
}

}  // namespace tribeam
