#include "tpi/kernels.hpp"

namespace tpi::kernels::detail {

std::complex<double> complex_dot_scalar(const double* a_re, const double* a_im,
                                        const double* b_re, const double* b_im,
                                        std::size_t n) {
    double sr = 0.0, si = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sr += a_re[i] * b_re[i] - a_im[i] * b_im[i];
        si += a_re[i] * b_im[i] + a_im[i] * b_re[i];
    }
    return {sr, si};
}

void axpby_scalar(double c1, double* x_re, double* x_im, double c2,
                  const double* f_re, const double* f_im, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        x_re[i] = c1 * x_re[i] + c2 * f_re[i];
        x_im[i] = c1 * x_im[i] + c2 * f_im[i];
    }
}

}  // namespace tpi::kernels::detail
