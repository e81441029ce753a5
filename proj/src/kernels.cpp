#include "tpi/kernels.hpp"

namespace tpi::kernels {

namespace {
Backend detect() {
#if defined(__x86_64__) || defined(__i386__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return Backend::avx2;
#endif
    return Backend::scalar;
}
Backend g_backend = detect();
}  // namespace

bool avx2_available() { return detect() == Backend::avx2; }

Backend active_backend() { return g_backend; }

void force_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_available())
        b = Backend::scalar;
    g_backend = b;
}

std::complex<double> complex_dot(const double* a_re, const double* a_im,
                                 const double* b_re, const double* b_im,
                                 std::size_t n) {
    if (g_backend == Backend::avx2)
        return detail::complex_dot_avx2(a_re, a_im, b_re, b_im, n);
    return detail::complex_dot_scalar(a_re, a_im, b_re, b_im, n);
}

void axpby(double c1, double* x_re, double* x_im, double c2,
           const double* f_re, const double* f_im, std::size_t n) {
    if (g_backend == Backend::avx2)
        detail::axpby_avx2(c1, x_re, x_im, c2, f_re, f_im, n);
    else
        detail::axpby_scalar(c1, x_re, x_im, c2, f_re, f_im, n);
}

}  // namespace tpi::kernels
