#pragma once

#include <vector>

namespace tribeam {

struct QuadratureRule {
  std::vector<double> node, weight;
};

// Nodes/weights for integral e^{-x^2} f(x) dx over the real line.
QuadratureRule gauss_hermite(int n);

// Nodes/weights for integral of f over [-1, 1].
QuadratureRule gauss_legendre(int n);

// Discretization of a normalized averaging kernel: sum of weights is 1 and
// offsets are absolute deviations from the kernel center. fwhm <= 0 collapses
// to a single delta node.
struct KernelNodes {
  std::vector<double> offset, weight;
};

KernelNodes gaussian_kernel_nodes(double fwhm, int n);

// Symmetric triangle of the given FWHM (base extends to +-fwhm), integrated
// with an n-point Gauss-Legendre rule on each half.
KernelNodes triangular_kernel_nodes(double fwhm, int n);

}  // namespace tribeam
