#include "tribeam/kernels.hpp"

#include <atomic>
#include <stdexcept>

#include "kernels_impl.hpp"

namespace tribeam::kernels {

namespace {

Backend detect() {
#ifdef TRIBEAM_HAVE_AVX2
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Backend::avx2;
#endif
  return Backend::scalar;
}

std::atomic<Backend>& state() {
  static std::atomic<Backend> b{detect()};
  return b;
}

}  // namespace

bool backend_available(Backend b) {
  if (b == Backend::scalar) return true;
#ifdef TRIBEAM_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() { return state().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument("kernel backend not available on this machine");
  state().store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void rk4_tridiag(const double* vart, double kappa, double h, long nsteps,
                 double* re, double* im, int n) {
  if (n < 1 || n > detail::kMaxOrders)
    throw std::invalid_argument("rk4_tridiag: order count out of range");
#ifdef TRIBEAM_HAVE_AVX2
  if (active_backend() == Backend::avx2) {
    detail::rk4_tridiag_avx2(vart, kappa, h, nsteps, re, im, n);
    return;
  }
#endif
  detail::rk4_tridiag_scalar(vart, kappa, h, nsteps, re, im, n);
}

void fringe_row(std::complex<double> am, std::complex<double> c0,
                std::complex<double> ap, double b, double x0, double dx,
                double* out, int n) {
  if (n < 0) throw std::invalid_argument("fringe_row: negative length");
#ifdef TRIBEAM_HAVE_AVX2
  if (active_backend() == Backend::avx2) {
    detail::fringe_row_avx2(am, c0, ap, b, x0, dx, out, n);
    return;
  }
#endif
  detail::fringe_row_scalar(am, c0, ap, b, x0, dx, out, n);
}

}  // namespace tribeam::kernels
