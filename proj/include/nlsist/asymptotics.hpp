#pragma once

#include "nlsist/quadrature.hpp"
#include "nlsist/rhp.hpp"

namespace nlsist {

/// Free evolution of the reflection coefficient: r(t, z) = r(0, z) e^{-i t z^2}.
/// Reconstructing the evolved data at time 0 is identical to reconstructing
/// the original data at time t, since the solve phase is theta = x z - t z^2.
inline ComplexField evolve_linear(const ComplexField& r, double t) {
    ComplexField out(r.grid);
    for (std::size_t i = 0; i < r.grid.count; ++i) {
        const double z = r.grid.node(i);
        out.values[i] = r.values[i] * std::exp(complex(0.0, -t * z * z));
    }
    return out;
}

/// nu(z0) = -(1/2 pi) log(1 - |r(z0)|^2), the modulation exponent at the
/// stationary point.
inline double nu_exponent(const ComplexField& r, double z0) {
    const complex rz = (z0 > r.grid.origin && z0 < r.grid.back()) ? interpolate(r, z0)
                                                                  : complex(0.0, 0.0);
    const double m2 = std::norm(rz);
    if (m2 >= 1.0) throw std::domain_error("nu_exponent: |r| must stay below 1");
    return -std::log1p(-m2) / (2.0 * std::acos(-1.0));
}

/// log Gamma(z) for Re z > 0 by the Lanczos approximation (g = 7, 9 terms).
inline complex log_gamma(complex z) {
    static const double coeff[9] = {0.99999999999980993,  676.5203681218851,
                                    -1259.1392167224028,  771.32342877765313,
                                    -176.61502916214059,  12.507343278686905,
                                    -0.13857109526572012, 9.9843695780195716e-6,
                                    1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // reflection: log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
        const double pi = std::acos(-1.0);
        return std::log(pi / std::sin(pi * z)) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    complex x = coeff[0];
    for (int i = 1; i < 9; ++i) x += coeff[i] / (z + static_cast<double>(i));
    const complex t = z + 7.5;
    const double half_log_2pi = 0.5 * std::log(2.0 * std::acos(-1.0));
    return half_log_2pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

/// arg Gamma(i nu). Gamma(i nu) = Gamma(1 + i nu) / (i nu), so the argument
/// is arg Gamma(1 + i nu) - sign(nu) pi/2; the nu -> 0 limit is -pi/2.
inline double arg_gamma_inu(double nu) {
    const double half_pi = 0.5 * std::acos(-1.0);
    if (nu == 0.0) return -half_pi;
    const double s = (nu > 0.0) ? 1.0 : -1.0;
    return log_gamma(complex(1.0, nu)).imag() - s * half_pi;
}

/// arg Gamma(i nu) on the principal branch.
inline double log_gamma_arg(double nu) { return arg_gamma_inu(nu); }

/// The phase integral (1/pi) \int_{-inf}^{z0} log(z0 - z) d log(1 - |r(z)|^2),
/// evaluated after one integration by parts so no logarithmic endpoint
/// singularity reaches the quadrature:
///   I = -log(z0 - a) (L(a) - L(z0)) + \int_a^{z0} (L(z) - L(z0))/(z0 - z) dz
/// with L = log(1 - |r|^2) and a the left edge of the reflection grid,
/// where L is negligible because r has decayed.
inline double phase_integral(const ComplexField& r, double z0) {
    const Grid1D& g = r.grid;
    if (z0 <= g.origin || z0 >= g.back())
        throw std::domain_error("phase_integral: z0 must lie inside the reflection grid");
    const double pi = std::acos(-1.0);

    auto lval = [&r](double z) {
        const double m2 = std::norm(interpolate(r, z));
        if (m2 >= 1.0) throw std::domain_error("phase_integral: |r| must stay below 1");
        return std::log1p(-m2);
    };
    const double l0 = lval(z0);
    const double la = std::log1p(-std::norm(r.values.front()));

    // integrate the smooth quotient on the nodes left of z0, then the
    // fractional cell up to z0 with the midpoint rule
    double acc = 0.0;
    std::size_t last = 0;
    double prev = (la - l0) / (z0 - g.origin);
    for (std::size_t i = 1; i < g.count && g.node(i) < z0; ++i) {
        const double z = g.node(i);
        const double cur = (std::log1p(-std::norm(r.values[i])) - l0) / (z0 - z);
        acc += 0.5 * (prev + cur) * g.spacing;
        prev = cur;
        last = i;
    }
    const double zl = g.node(last);
    const double rest = z0 - zl;
    if (rest > 1e-12 * g.spacing) {
        const double zm = 0.5 * (zl + z0);
        const double lm = lval(zm);
        // quotient at the midpoint; at z -> z0 it tends to -L'(z0), finite
        acc += rest * (lm - l0) / (z0 - zm);
    }
    return (-std::log(z0 - g.origin) * (la - l0) + acc) / pi;
}

/// Long-time profile parameters at the stationary point z0 = x/(2t).
struct AsymptoticProfile {
    double z0 = 0.0;
    double nu = 0.0;
    double alpha_abs = 0.0;
    double alpha_arg = 0.0;
    complex alpha;
    complex q;  ///< t^{-1/2} alpha e^{i x^2/(4t) - i nu log(2t)}
    bool degenerate = false;  ///< r(z0) = 0: arg r undefined, profile vanishes
};

inline AsymptoticProfile asymptotic_profile(const ComplexField& r, double x, double t,
                                            double t_min = 1.0) {
    if (t < t_min)
        throw std::domain_error("asymptotic_profile: the long-time formula needs t >= t_min");
    AsymptoticProfile p;
    p.z0 = stationary_point(x, t);
    p.nu = nu_exponent(r, p.z0);
    p.alpha_abs = std::sqrt(0.5 * p.nu);
    const bool inside = (p.z0 > r.grid.origin && p.z0 < r.grid.back());
    const complex rz = inside ? interpolate(r, p.z0) : complex(0.0);
    if (rz == complex(0.0)) {
        p.degenerate = true;  // nu = 0 forces |alpha| = 0, so qas = 0
        return p;
    }
    const double pi = std::acos(-1.0);
    // The arg r sign and the constant are pinned against the solved potential:
    // this library's r = conj(b)/a is the conjugate of the textbook reflection
    // (flipping arg r) and the reconstruction carries an overall minus sign
    // (shifting the constant by -pi, so pi/4 becomes -3 pi/4).
    p.alpha_arg = phase_integral(r, p.z0) - 0.75 * pi + arg_gamma_inu(p.nu) - std::arg(rz);
    p.alpha = p.alpha_abs * std::exp(complex(0.0, p.alpha_arg));
    const double mod = x * x / (4.0 * t) - p.nu * std::log(2.0 * t);
    p.q = p.alpha * std::exp(complex(0.0, mod)) / std::sqrt(t);
    return p;
}

namespace detail {

/// L = log(1 - |r|^2) restricted to the nodes left of z0 (the cut of delta),
/// plus the fractional remainder [last node, z0].
struct CutSamples {
    ComplexField l;       ///< L on the node range ending at or before z0
    double rest = 0.0;    ///< length of the fractional cell up to z0
    complex rest_mid;     ///< L at the midpoint of the fractional cell
};

inline CutSamples cut_log_samples(const ComplexField& r, double z0) {
    const Grid1D& g = r.grid;
    auto lof = [](double m2) {
        if (m2 >= 1.0) throw std::domain_error("delta_fn: |r| must stay below 1");
        return std::log1p(-m2);
    };
    std::size_t count = 0;
    while (count < g.count && g.node(count) <= z0) ++count;
    if (count < 2) throw std::domain_error("delta_fn: cut must cover part of the reflection grid");
    CutSamples cs{ComplexField(Grid1D{g.origin, g.spacing, count}), 0.0, complex(0.0)};
    for (std::size_t i = 0; i < count; ++i) cs.l.values[i] = lof(std::norm(r.values[i]));
    const double zl = g.node(count - 1);
    if (z0 < g.back() && z0 - zl > 1e-12 * g.spacing) {
        cs.rest = z0 - zl;
        cs.rest_mid = lof(std::norm(interpolate(r, 0.5 * (zl + z0))));
    }
    return cs;
}

}  // namespace detail

/// The scalar factor delta(z) = exp( (1/2 pi i) int_{-inf}^{z0} L(s)/(s - z) ds )
/// with L = log(1 - |r|^2), analytic off the cut (-inf, z0]. The tail beyond
/// the reflection grid is dropped (r has decayed there, so L is negligible).
/// For z off the cut; boundary values on the cut come from delta_fn_boundary.
inline complex delta_fn(const ComplexField& r, double z0, complex z) {
    if (z0 <= r.grid.origin) return complex(1.0);  // cut misses the data support
    const detail::CutSamples cs = detail::cut_log_samples(r, z0);
    ComplexField quot(cs.l.grid);
    for (std::size_t i = 0; i < quot.size(); ++i)
        quot.values[i] = cs.l.values[i] / (quot.grid.node(i) - z);
    complex integral = trapezoid(quot);
    if (cs.rest > 0.0)
        integral += cs.rest * cs.rest_mid / (0.5 * (cs.l.grid.back() + z0) - z);
    const double pi = std::acos(-1.0);
    return std::exp(integral / complex(0.0, 2.0 * pi));
}

/// Boundary value of delta on the cut from above (sign = +1) or below
/// (sign = -1): principal value plus half residue,
///   delta_+- = exp( PV/(2 pi i) +- L(z)/2 ).
inline complex delta_fn_boundary(const ComplexField& r, double z0, double z, int sign) {
    if (!(z < z0)) throw std::domain_error("delta_fn_boundary: need z < z0 on the cut");
    if (sign != 1 && sign != -1) throw std::invalid_argument("delta_fn_boundary: sign is +-1");
    const detail::CutSamples cs = detail::cut_log_samples(r, z0);
    if (!cs.l.grid.contains_interior(z))
        throw std::domain_error("delta_fn_boundary: z must lie inside the sampled cut");
    complex integral = pv_integral(cs.l, z);
    if (cs.rest > 0.0)
        integral += cs.rest * cs.rest_mid / (0.5 * (cs.l.grid.back() + z0) - z);
    const double pi = std::acos(-1.0);
    const double m2 = std::norm(interpolate(r, z));
    if (m2 >= 1.0) throw std::domain_error("delta_fn_boundary: |r| must stay below 1");
    const double half_l = 0.5 * std::log1p(-m2);
    return std::exp(integral / complex(0.0, 2.0 * pi) + static_cast<double>(sign) * half_l);
}

/// Scalar factorization of 1 - |r|^2 across the contour: the boundary values
/// delta+- = delta_pv (1 - |r|^2)^{+-1/2} where
///   delta_pv(z) = exp( (1/2 pi i) PV \int log(1 - |r(s)|^2) / (s - z) ds ).
/// Computed from the multiplier projections: (C+ + C-)/2 is exactly the
/// principal-value part.
struct DeltaBoundary {
    ComplexField plus;
    ComplexField minus;
};

inline DeltaBoundary delta_boundary(const ComplexField& r, std::size_t pad_factor = 8) {
    // Embed L = log(1 - |r|^2) in a grid padded by `pad_factor` so the
    // multiplier projections' periodization error (quadratic in 1/length)
    // stays below the quadrature error of independent routes.
    const std::size_t n = r.grid.count;
    const std::size_t total = n * pad_factor;
    const std::size_t off = (total - n) / 2;
    Grid1D padded(r.grid.origin - static_cast<double>(off) * r.grid.spacing, r.grid.spacing,
                  total);
    ComplexField lfield(padded);
    for (std::size_t i = 0; i < n; ++i) {
        const double m2 = std::norm(r.values[i]);
        if (m2 >= 1.0) throw std::domain_error("delta_boundary: |r| must stay below 1");
        lfield.values[off + i] = std::log1p(-m2);
    }
    const ComplexField cp = cauchy_project(lfield, +1);
    const ComplexField cm = cauchy_project(lfield, -1);
    DeltaBoundary d{ComplexField(r.grid), ComplexField(r.grid)};
    for (std::size_t i = 0; i < n; ++i) {
        const complex pv = 0.5 * (cp.values[off + i] + cm.values[off + i]);
        const complex half_l = 0.5 * lfield.values[off + i];
        d.plus.values[i] = std::exp(pv + half_l);
        d.minus.values[i] = std::exp(pv - half_l);
    }
    return d;
}

}  // namespace nlsist
