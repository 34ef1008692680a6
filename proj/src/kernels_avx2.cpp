#ifdef TRIBEAM_HAVE_AVX2

#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace tribeam::kernels::detail {

namespace {

// Vector layout: amplitudes live at offset 4 of 32-byte aligned buffers, with
// four zero guard doubles on each side so the unaligned neighbor loads never
// leave the buffer. Slack lanes past n are forced back to zero through a
// multiplicative mask on every stage derivative; otherwise the first slack
// lane would couple to the last real order and act as a spurious extra order.
constexpr int kOff = 4;
constexpr int kVec = (kMaxOrders + 3) / 4 * 4;
constexpr int kBuf = kOff + kVec + 4;

struct Work {
  alignas(32) double yr[kBuf] = {}, yi[kBuf] = {};
  alignas(32) double tr[kBuf] = {}, ti[kBuf] = {};
  alignas(32) double k1r[kBuf] = {}, k1i[kBuf] = {};
  alignas(32) double k2r[kBuf] = {}, k2i[kBuf] = {};
  alignas(32) double k3r[kBuf] = {}, k3i[kBuf] = {};
  alignas(32) double k4r[kBuf] = {}, k4i[kBuf] = {};
  alignas(32) double vt[kBuf] = {}, mask[kBuf] = {};
};

inline void stage(const Work& w, double kappa, const double* yr,
                  const double* yi, double* dr, double* di, int nb) {
  const __m256d kap = _mm256_set1_pd(kappa);
  const __m256d zero = _mm256_setzero_pd();
  for (int t = 0; t < nb; ++t) {
    const int i = kOff + 4 * t;
    const __m256d v = _mm256_load_pd(w.vt + i);
    const __m256d m = _mm256_load_pd(w.mask + i);
    const __m256d ci = _mm256_load_pd(yi + i);
    const __m256d ni = _mm256_add_pd(_mm256_loadu_pd(yi + i - 1),
                                     _mm256_loadu_pd(yi + i + 1));
    const __m256d cr = _mm256_load_pd(yr + i);
    const __m256d nr = _mm256_add_pd(_mm256_loadu_pd(yr + i - 1),
                                     _mm256_loadu_pd(yr + i + 1));
    __m256d a = _mm256_fmadd_pd(kap, ni, _mm256_mul_pd(v, ci));
    __m256d b = _mm256_fmadd_pd(kap, nr, _mm256_mul_pd(v, cr));
    _mm256_store_pd(dr + i, _mm256_mul_pd(_mm256_sub_pd(zero, a), m));
    _mm256_store_pd(di + i, _mm256_mul_pd(b, m));
  }
}

inline void axpy(const double* y, double a, const double* k, double* out, int nb) {
  const __m256d av = _mm256_set1_pd(a);
  for (int t = 0; t < nb; ++t) {
    const int i = kOff + 4 * t;
    _mm256_store_pd(out + i, _mm256_fmadd_pd(av, _mm256_load_pd(k + i),
                                             _mm256_load_pd(y + i)));
  }
}

}  // namespace

void rk4_tridiag_avx2(const double* vart, double kappa, double h, long nsteps,
                      double* re, double* im, int n) {
  Work w;
  for (int i = 0; i < n; ++i) {
    w.yr[kOff + i] = re[i];
    w.yi[kOff + i] = im[i];
    w.vt[kOff + i] = vart[i];
    w.mask[kOff + i] = 1.0;
  }
  const int nb = (n + 3) / 4;
  const double h2 = 0.5 * h;
  const double h6 = h / 6.0;
  const __m256d h6v = _mm256_set1_pd(h6);
  const __m256d two = _mm256_set1_pd(2.0);

  for (long s = 0; s < nsteps; ++s) {
    stage(w, kappa, w.yr, w.yi, w.k1r, w.k1i, nb);
    axpy(w.yr, h2, w.k1r, w.tr, nb);
    axpy(w.yi, h2, w.k1i, w.ti, nb);
    stage(w, kappa, w.tr, w.ti, w.k2r, w.k2i, nb);
    axpy(w.yr, h2, w.k2r, w.tr, nb);
    axpy(w.yi, h2, w.k2i, w.ti, nb);
    stage(w, kappa, w.tr, w.ti, w.k3r, w.k3i, nb);
    axpy(w.yr, h, w.k3r, w.tr, nb);
    axpy(w.yi, h, w.k3i, w.ti, nb);
    stage(w, kappa, w.tr, w.ti, w.k4r, w.k4i, nb);
    for (int t = 0; t < nb; ++t) {
      const int i = kOff + 4 * t;
      __m256d sr = _mm256_fmadd_pd(
          two,
          _mm256_add_pd(_mm256_load_pd(w.k2r + i), _mm256_load_pd(w.k3r + i)),
          _mm256_add_pd(_mm256_load_pd(w.k1r + i), _mm256_load_pd(w.k4r + i)));
      __m256d si = _mm256_fmadd_pd(
          two,
          _mm256_add_pd(_mm256_load_pd(w.k2i + i), _mm256_load_pd(w.k3i + i)),
          _mm256_add_pd(_mm256_load_pd(w.k1i + i), _mm256_load_pd(w.k4i + i)));
      _mm256_store_pd(w.yr + i,
                      _mm256_fmadd_pd(h6v, sr, _mm256_load_pd(w.yr + i)));
      _mm256_store_pd(w.yi + i,
                      _mm256_fmadd_pd(h6v, si, _mm256_load_pd(w.yi + i)));
    }
  }

  for (int i = 0; i < n; ++i) {
    re[i] = w.yr[kOff + i];
    im[i] = w.yi[kOff + i];
  }
}

void fringe_row_avx2(std::complex<double> am, std::complex<double> c0,
                     std::complex<double> ap, double b, double x0, double dx,
                     double* out, int n) {
  const double A = am.real() + ap.real();
  const double B = am.imag() - ap.imag();
  const double C = c0.real();
  const double D = am.imag() + ap.imag();
  const double E = ap.real() - am.real();
  const double F = c0.imag();
  const __m256d Av = _mm256_set1_pd(A), Bv = _mm256_set1_pd(B);
  const __m256d Cv = _mm256_set1_pd(C), Dv = _mm256_set1_pd(D);
  const __m256d Ev = _mm256_set1_pd(E), Fv = _mm256_set1_pd(F);

  // Lanes advance together by a fixed rotation; the anchor is recomputed from
  // libm every 128 points to stop the recurrence drift from accumulating.
  const double step = 4.0 * b * dx;
  const __m256d rc = _mm256_set1_pd(std::cos(step));
  const __m256d rs = _mm256_set1_pd(std::sin(step));

  alignas(32) double cb[4], sb[4];
  __m256d c = _mm256_setzero_pd(), s = _mm256_setzero_pd();
  int j = 0;
  const int nv = n & ~3;
  for (; j < nv; j += 4) {
    if ((j & 127) == 0) {
      for (int l = 0; l < 4; ++l) {
        const double t = b * (x0 + (j + l) * dx);
        cb[l] = std::cos(t);
        sb[l] = std::sin(t);
      }
      c = _mm256_load_pd(cb);
      s = _mm256_load_pd(sb);
    }
    const __m256d rr =
        _mm256_fmadd_pd(Av, c, _mm256_fmadd_pd(Bv, s, Cv));
    const __m256d ii =
        _mm256_fmadd_pd(Dv, c, _mm256_fmadd_pd(Ev, s, Fv));
    _mm256_storeu_pd(out + j,
                     _mm256_fmadd_pd(rr, rr, _mm256_mul_pd(ii, ii)));
    const __m256d cn =
        _mm256_fmsub_pd(c, rc, _mm256_mul_pd(s, rs));
    s = _mm256_fmadd_pd(s, rc, _mm256_mul_pd(c, rs));
    c = cn;
  }
  if (j < n)
    fringe_row_scalar(am, c0, ap, b, x0 + j * dx, dx, out + j, n - j);
}

}  // namespace tribeam::kernels::detail

#endif  // TRIBEAM_HAVE_AVX2
