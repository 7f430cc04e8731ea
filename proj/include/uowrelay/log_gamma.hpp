#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace uowrelay::specfun {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// log(sin(pi z)), stable for large |Im z|.  Branch may differ from the
// principal one by 2*pi*i*k; callers only ever exponentiate the result.
inline cplx log_sin_pi(cplx z) {
    if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
    // sin(pi z) = -exp(-i pi z) (1 - exp(2 i pi z)) / (2i),  |exp(2 i pi z)| <= 1
    cplx i_pi_z(-kPi * z.imag(), kPi * z.real());
    cplx rest = std::log(cplx(1.0) - std::exp(2.0 * i_pi_z));
    return -i_pi_z + cplx(-0.6931471805599453, 1.5707963267948966) + rest;
}

// Principal-path complex log-gamma: Lanczos (g = 7) on Re z >= 0.5,
// reflection below.  exp(log_gamma(z)) == Gamma(z); the imaginary part in
// the reflection region may differ from other conventions by 2*pi*k.
inline cplx log_gamma(cplx z) {
    static const double c[9] = {
        0.99999999999980993,
        676.5203681218851,   -1259.1392167224028,
        771.32342877765313,  -176.61502916214059,
        12.507343278686905,  -0.13857109526572012,
        9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        if (z.imag() == 0.0 && z.real() == std::floor(z.real()))
            throw std::domain_error("log_gamma: pole at non-positive integer");
        return std::log(cplx(kPi)) - log_sin_pi(z) - log_gamma(cplx(1.0) - z);
    }
    cplx zz = z - 1.0;
    cplx x = c[0];
    for (int k = 1; k < 9; ++k) x += c[k] / (zz + double(k));
    cplx t = zz + 7.5;
    return 0.9189385332046727 + (zz + 0.5) * std::log(t) - t + std::log(x);
}

inline double log_gamma(double x) {
    if (x <= 0.0 && x == std::floor(x))
        throw std::domain_error("log_gamma: pole at non-positive integer");
    return std::lgamma(x);
}

} // namespace uowrelay::specfun
