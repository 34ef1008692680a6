#pragma once

#include <complex>

namespace tribeam::kernels {

// Backends share bit-identical semantics up to floating-point reassociation;
// equivalence is enforced by property tests at tolerances far below every
// contract tolerance in the library.
enum class Backend { scalar, avx2 };

bool backend_available(Backend b);
Backend active_backend();
// Overrides auto-detection for the whole process. Throws std::invalid_argument
// if the requested backend is not available on this machine. Not intended to
// be called concurrently with running kernels.
void set_backend(Backend b);
const char* backend_name(Backend b);

// In-place classical RK4 for the tridiagonal order-coupling system
//   dA_m/dz = i*vart[m]*A_m + i*kappa*(A_{m-1} + A_{m+1}),
// with hard-zero boundary orders. re/im hold the n amplitudes; nsteps uniform
// steps of size h are taken. n must be <= 61.
void rk4_tridiag(const double* vart, double kappa, double h, long nsteps,
                 double* re, double* im, int n);

// out[j] = |am*exp(-i*b*x_j) + c0 + ap*exp(i*b*x_j)|^2 on x_j = x0 + j*dx.
void fringe_row(std::complex<double> am, std::complex<double> c0,
                std::complex<double> ap, double b, double x0, double dx,
                double* out, int n);

}  // namespace tribeam::kernels
