// AVX2+FMA kernel variants.  This translation unit is compiled with
// -mavx2 -mfma; callers must check avx2_available() before dispatching here.

#include "tpi/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace tpi::kernels::detail {

std::complex<double> complex_dot_avx2(const double* a_re, const double* a_im,
                                      const double* b_re, const double* b_im,
                                      std::size_t n) {
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ar = _mm256_loadu_pd(a_re + i);
        const __m256d ai = _mm256_loadu_pd(a_im + i);
        const __m256d br = _mm256_loadu_pd(b_re + i);
        const __m256d bi = _mm256_loadu_pd(b_im + i);
        acc_re = _mm256_fmadd_pd(ar, br, acc_re);
        acc_re = _mm256_fnmadd_pd(ai, bi, acc_re);
        acc_im = _mm256_fmadd_pd(ar, bi, acc_im);
        acc_im = _mm256_fmadd_pd(ai, br, acc_im);
    }
    alignas(32) double lane_re[4], lane_im[4];
    _mm256_store_pd(lane_re, acc_re);
    _mm256_store_pd(lane_im, acc_im);
    double sr = lane_re[0] + lane_re[1] + lane_re[2] + lane_re[3];
    double si = lane_im[0] + lane_im[1] + lane_im[2] + lane_im[3];
    for (; i < n; ++i) {
        sr += a_re[i] * b_re[i] - a_im[i] * b_im[i];
        si += a_re[i] * b_im[i] + a_im[i] * b_re[i];
    }
    return {sr, si};
}

void axpby_avx2(double c1, double* x_re, double* x_im, double c2,
                const double* f_re, const double* f_im, std::size_t n) {
    const __m256d vc1 = _mm256_set1_pd(c1);
    const __m256d vc2 = _mm256_set1_pd(c2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xr = _mm256_mul_pd(vc1, _mm256_loadu_pd(x_re + i));
        __m256d xi = _mm256_mul_pd(vc1, _mm256_loadu_pd(x_im + i));
        xr = _mm256_fmadd_pd(vc2, _mm256_loadu_pd(f_re + i), xr);
        xi = _mm256_fmadd_pd(vc2, _mm256_loadu_pd(f_im + i), xi);
        _mm256_storeu_pd(x_re + i, xr);
        _mm256_storeu_pd(x_im + i, xi);
    }
    for (; i < n; ++i) {
        x_re[i] = c1 * x_re[i] + c2 * f_re[i];
        x_im[i] = c1 * x_im[i] + c2 * f_im[i];
    }
}

}  // namespace tpi::kernels::detail

#else  // no AVX2 at compile time: delegate to the scalar reference

namespace tpi::kernels::detail {

std::complex<double> complex_dot_avx2(const double* a_re, const double* a_im,
                                      const double* b_re, const double* b_im,
                                      std::size_t n) {
    return complex_dot_scalar(a_re, a_im, b_re, b_im, n);
}

void axpby_avx2(double c1, double* x_re, double* x_im, double c2,
                const double* f_re, const double* f_im, std::size_t n) {
    axpby_scalar(c1, x_re, x_im, c2, f_re, f_im, n);
}

}  // namespace tpi::kernels::detail

#endif
