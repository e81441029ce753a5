#pragma once
// Data-parallel inner-loop kernels used by the speckle Monte Carlo engine.
//
// Each kernel has a scalar reference implementation and an AVX2+FMA variant;
// the active backend is chosen at runtime from CPU capabilities and can be
// forced for testing.  The variants are equivalence-tested against each other.

#include <complex>
#include <cstddef>

namespace tpi::kernels {

enum class Backend { scalar, avx2 };

// Backend selected for subsequent kernel calls.  Defaults to the best
// instruction set the CPU supports.
Backend active_backend();
void force_backend(Backend b);
bool avx2_available();

// sum_i (a_re[i] + i a_im[i]) * (b_re[i] + i b_im[i])
std::complex<double> complex_dot(const double* a_re, const double* a_im,
                                 const double* b_re, const double* b_im,
                                 std::size_t n);

// elementwise x <- c1 * x + c2 * f, applied to both quadratures
void axpby(double c1, double* x_re, double* x_im,
           double c2, const double* f_re, const double* f_im,
           std::size_t n);

namespace detail {
std::complex<double> complex_dot_scalar(const double*, const double*,
                                        const double*, const double*,
                                        std::size_t);
std::complex<double> complex_dot_avx2(const double*, const double*,
                                      const double*, const double*,
                                      std::size_t);
void axpby_scalar(double, double*, double*, double, const double*,
                  const double*, std::size_t);
void axpby_avx2(double, double*, double*, double, const double*,
                const double*, std::size_t);
}  // namespace detail

}  // namespace tpi::kernels
