#pragma once

#include "nlsist/fft.hpp"
#include "nlsist/quadrature.hpp"

namespace nlsist {

/// Discrete weighted Sobolev norms. The H^{1,1} norm used throughout is
///   h11 = (||f||_2^2 + ||x f||_2^2 + ||f'||_2^2)^{1/2}
/// with the derivative taken spectrally; this is equivalent (with constants
/// between 1 and sqrt(2)) to the (1+|x|) weight formulation.
struct SobolevNorms {
    double l2 = 0.0;
    double weighted_l2 = 0.0;
    double deriv_l2 = 0.0;
    double h11 = 0.0;
};

inline SobolevNorms h_norms(const ComplexField& f) {
    require_finite(f, "h_norms");
    SobolevNorms n;
    n.l2 = std::sqrt(trapezoid_abs2(f));

    ComplexField xf(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) xf.values[i] = f.grid.node(i) * f.values[i];
    n.weighted_l2 = std::sqrt(trapezoid_abs2(xf));

    n.deriv_l2 = std::sqrt(trapezoid_abs2(spectral_derivative(f)));
    n.h11 = std::sqrt(n.l2 * n.l2 + n.weighted_l2 * n.weighted_l2 + n.deriv_l2 * n.deriv_l2);
    return n;
}

/// Reflection coefficient with its cached sup norm rho and H^{1,1} norm eta.
/// The defocusing condition rho < 1 is enforced at construction, and
/// rho <= eta holds for the discrete norms (sup^2 <= ||f|| ||f'||).
struct ReflectionData {
    ComplexField r;
    double rho = 0.0;
    double eta = 0.0;

    ReflectionData() = default;
    explicit ReflectionData(ComplexField field) : r(std::move(field)) {
        require_finite(r, "ReflectionData");
        rho = r.sup_norm();
        if (rho >= 1.0)
            throw std::domain_error("ReflectionData: sup|r| must be < 1 (defocusing data)");
        eta = h_norms(r).h11;
    }
};

}  // namespace nlsist
