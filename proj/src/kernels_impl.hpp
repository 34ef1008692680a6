#pragma once

#include <complex>

// Per-backend entry points, linked together and selected at runtime by
// kernels_dispatch.cpp. Both rk4 variants tolerate n up to kMaxOrders.

namespace tribeam::kernels::detail {

inline constexpr int kMaxOrders = 61;

void rk4_tridiag_scalar(const double* vart, double kappa, double h, long nsteps,
                        double* re, double* im, int n);
void fringe_row_scalar(std::complex<double> am, std::complex<double> c0,
                       std::complex<double> ap, double b, double x0, double dx,
                       double* out, int n);

#ifdef TRIBEAM_HAVE_AVX2
void rk4_tridiag_avx2(const double* vart, double kappa, double h, long nsteps,
                      double* re, double* im, int n);
void fringe_row_avx2(std::complex<double> am, std::complex<double> c0,
                     std::complex<double> ap, double b, double x0, double dx,
                     double* out, int n);
#endif

}  // namespace tribeam::kernels::detail
