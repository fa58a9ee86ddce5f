#pragma once

#include "nlsist/grid.hpp"

namespace nlsist {

/// Trapezoid rule on the field's grid. Fields handled here decay below
/// roundoff at the edges, so the endpoint halving is a formality.
inline complex trapezoid(const ComplexField& f) {
    complex s(0.0, 0.0);
    for (const auto& v : f.values) s += v;
    s -= 0.5 * (f.values.front() + f.values.back());
    return s * f.grid.spacing;
}

inline double trapezoid_abs2(const ComplexField& f) {
    double s = 0.0;
    for (const auto& v : f.values) s += std::norm(v);
    s -= 0.5 * (std::norm(f.values.front()) + std::norm(f.values.back()));
    return s * f.grid.spacing;
}

inline double trapezoid_abs(const ComplexField& f) {
    double s = 0.0;
    for (const auto& v : f.values) s += std::abs(v);
    s -= 0.5 * (std::abs(f.values.front()) + std::abs(f.values.back()));
    return s * f.grid.spacing;
}

/// Principal-value integral  PV \int f(z)/(z - z0) dz  over the grid interval
/// by singularity subtraction: the smooth part (f(z)-f(z0))/(z-z0) goes
/// through the trapezoid rule and the removed piece integrates to the exact
/// log term.
inline complex pv_integral(const ComplexField& samples, double z0) {
    require_finite(samples, "pv_integral");
    const Grid1D& g = samples.grid;
    if (!g.contains_interior(z0))
        throw std::domain_error("pv_integral: singularity must lie strictly inside the grid");

    const complex f0 = interpolate(samples, z0);
    // Roundoff in node(i) is of order eps * |node|; anything within this
    // tolerance of z0 is the singular node, and dividing by such a dz would
    // amplify roundoff in f(z) - f(z0) catastrophically.
    const double tol = 1e-9 * std::max({1.0, std::abs(g.origin), std::abs(g.back())});
    ComplexField smooth(g);
    for (std::size_t i = 0; i < g.count; ++i) {
        double dz = g.node(i) - z0;
        if (std::abs(dz) < tol) {
            // Node coincides with the singularity: the subtracted integrand
            // tends to f'(z0); use a centered difference.
            std::size_t lo = (i == 0) ? 0 : i - 1;
            std::size_t hi = (i + 1 < g.count) ? i + 1 : i;
            smooth.values[i] =
                (samples.values[hi] - samples.values[lo]) / (g.node(hi) - g.node(lo));
        } else {
            smooth.values[i] = (samples.values[i] - f0) / dz;
        }
    }
    complex out = trapezoid(smooth);
    out += f0 * std::log((g.back() - z0) / (z0 - g.origin));
    return out;
}

/// Plain Cauchy-kernel integral \int f(s)/(s - z) ds for z off the grid line.
inline complex cauchy_integral_offaxis(const ComplexField& samples, complex z) {
    ComplexField k(samples.grid);
    for (std::size_t i = 0; i < samples.size(); ++i)
        k.values[i] = samples.values[i] / (samples.grid.node(i) - z);
    return trapezoid(k);
}

}  // namespace nlsist
