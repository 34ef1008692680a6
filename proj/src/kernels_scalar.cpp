#include <cmath>

#include "kernels_impl.hpp"

namespace tribeam::kernels::detail {

namespace {

// Arrays carry one guard cell on each side (index 0 and n+1) that stays zero,
// so the neighbor sums need no branches.
constexpr int kPad = kMaxOrders + 2;

inline void rhs(const double* vart, double kappa, const double* yr,
                const double* yi, double* dr, double* di, int n) {
  for (int i = 1; i <= n; ++i) {
    dr[i] = -(vart[i - 1] * yi[i] + kappa * (yi[i - 1] + yi[i + 1]));
    di[i] = vart[i - 1] * yr[i] + kappa * (yr[i - 1] + yr[i + 1]);
  }
}

}  // namespace

void rk4_tridiag_scalar(const double* vart, double kappa, double h, long nsteps,
                        double* re, double* im, int n) {
  double yr[kPad] = {}, yi[kPad] = {};
  double tr[kPad] = {}, ti[kPad] = {};
  double k1r[kPad] = {}, k1i[kPad] = {};
  double k2r[kPad] = {}, k2i[kPad] = {};
  double k3r[kPad] = {}, k3i[kPad] = {};
  double k4r[kPad] = {}, k4i[kPad] = {};

  for (int i = 0; i < n; ++i) {
    yr[i + 1] = re[i];
    yi[i + 1] = im[i];
  }

  const double h2 = 0.5 * h;
  const double h6 = h / 6.0;
  for (long s = 0; s < nsteps; ++s) {
    rhs(vart, kappa, yr, yi, k1r, k1i, n);
    for (int i = 1; i <= n; ++i) {
      tr[i] = yr[i] + h2 * k1r[i];
      ti[i] = yi[i] + h2 * k1i[i];
    }
    rhs(vart, kappa, tr, ti, k2r, k2i, n);
    for (int i = 1; i <= n; ++i) {
      tr[i] = yr[i] + h2 * k2r[i];
      ti[i] = yi[i] + h2 * k2i[i];
    }
    rhs(vart, kappa, tr, ti, k3r, k3i, n);
    for (int i = 1; i <= n; ++i) {
      tr[i] = yr[i] + h * k3r[i];
      ti[i] = yi[i] + h * k3i[i];
    }
    rhs(vart, kappa, tr, ti, k4r, k4i, n);
    for (int i = 1; i <= n; ++i) {
      yr[i] += h6 * (k1r[i] + 2.0 * (k2r[i] + k3r[i]) + k4r[i]);
      yi[i] += h6 * (k1i[i] + 2.0 * (k2i[i] + k3i[i]) + k4i[i]);
    }
  }

  for (int i = 0; i < n; ++i) {
    re[i] = yr[i + 1];
    im[i] = yi[i + 1];
  }
}

void fringe_row_scalar(std::complex<double> am, std::complex<double> c0,
                       std::complex<double> ap, double b, double x0, double dx,
                       double* out, int n) {
  // am*e^{-i t} + ap*e^{i t} + c0 = (A c + B s + C) + i (D c + E s + F)
  const double A = am.real() + ap.real();
  const double B = am.imag() - ap.imag();
  const double C = c0.real();
  const double D = am.imag() + ap.imag();
  const double E = ap.real() - am.real();
  const double F = c0.imag();
  for (int j = 0; j < n; ++j) {
    const double t = b * (x0 + j * dx);
    const double c = std::cos(t);
    const double s = std::sin(t);
    const double rr = A * c + B * s + C;
    const double ii = D * c + E * s + F;
    out[j] = rr * rr + ii * ii;
  }
}

}  // namespace tribeam::kernels::detail
