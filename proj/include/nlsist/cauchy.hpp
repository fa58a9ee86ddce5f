#pragma once

#include <vector>

#include "nlsist/fft.hpp"
#include "nlsist/quadrature.hpp"

namespace nlsist {

/// Boundary values of the Cauchy transform along the real line, discretized
/// as Fourier multipliers on the grid's periodization:
///   C+ keeps positive frequencies (weight 1/2 at k = 0 and Nyquist),
///   C- = C+ - 1.
/// Half-weighting the shared bins keeps the Plemelj identity C+ - C- = 1
/// exact in floating point and gives second-order periodization error.
inline ComplexField cauchy_project(const ComplexField& f, int sign) {
    if (sign != +1 && sign != -1) throw std::invalid_argument("cauchy_project: sign must be +-1");
    const std::size_t n = f.size();
    std::vector<complex> hat = f.values;
    dft_inplace(hat, FFTW_FORWARD);
    // FFTW bin layout: m=0 DC, 1..n/2-1 positive, n/2 Nyquist, n/2+1..n-1 negative.
    const std::size_t ny = n / 2;
    for (std::size_t m = 0; m < n; ++m) {
        double p;  // multiplier for C+
        if (m == 0 || m == ny)
            p = 0.5;
        else if (m < ny)
            p = 1.0;
        else
            p = 0.0;
        if (sign < 0) p -= 1.0;
        hat[m] *= p;
    }
    dft_inplace(hat, FFTW_BACKWARD);
    ComplexField out(f.grid);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) out.values[m] = hat[m] * inv;
    return out;
}

/// Independent quadrature route: C+-f(z_j) = +-f_j/2 + (1/2 pi i) PV int f/(s-z_j).
/// Interior points use the subtraction rule from pv_integral; used as a
/// cross-check of the multiplier route and as the dense operator's kernel.
inline ComplexField cauchy_project_quadrature(const ComplexField& f, int sign) {
    if (sign != +1 && sign != -1)
        throw std::invalid_argument("cauchy_project_quadrature: sign must be +-1");
    ComplexField out(f.grid);
    const complex half(0.5 * sign, 0.0);
    const complex kernel = complex(0.0, 1.0) / (2.0 * std::acos(-1.0));  // 1/(2 pi i) = -i/2pi
    for (std::size_t j = 1; j + 1 < f.size(); ++j)
        out.values[j] = half * f.values[j] - kernel * pv_integral(f, f.grid.node(j));
    // Endpoints: the fields fed through here decay below the quadrature error
    // at the boundary, so the one-sided values are taken from the neighbors.
    if (f.size() >= 2) {
        out.values[0] = out.values[1];
        out.values[f.size() - 1] = out.values[f.size() - 2];
    }
    return out;
}

/// Smooth cosine taper: multiplies the outer `fraction` of the grid on each
/// side by a half-cosine ramp down to zero. Applied to reflection data before
/// jump factors are formed so periodized projections see a continuous field.
inline ComplexField taper_edges(const ComplexField& f, double fraction = 0.05) {
    ComplexField out = f;
    const std::size_t n = f.size();
    const auto ramp = static_cast<std::size_t>(fraction * static_cast<double>(n));
    const double pi = std::acos(-1.0);
    for (std::size_t i = 0; i < ramp && i < n; ++i) {
        double w = 0.5 * (1.0 - std::cos(pi * static_cast<double>(i) / static_cast<double>(ramp)));
        out.values[i] *= w;
        out.values[n - 1 - i] *= w;
    }
    return out;
}

}  // namespace nlsist
