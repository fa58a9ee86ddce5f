#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nlsist/fit.hpp"
#include "nlsist/perturbation.hpp"

namespace nlsist {

/// Fourth-order central finite difference on the field's own grid (one-sided
/// second-order stencils at the boundary). Used to differentiate fields that
/// are not small at the grid edges, where a spectral derivative would ring.
inline ComplexField derivative_fd4(const ComplexField& f) {
    const std::size_t n = f.size();
    if (n < 5) throw std::invalid_argument("derivative_fd4: need at least 5 nodes");
    const double h = f.grid.spacing;
    ComplexField d(f.grid);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d.values[i] = (f.values[i - 2] - 8.0 * f.values[i - 1] + 8.0 * f.values[i + 1] -
                       f.values[i + 2]) /
                      (12.0 * h);
    d.values[0] = (-3.0 * f.values[0] + 4.0 * f.values[1] - f.values[2]) / (2.0 * h);
    d.values[1] = (f.values[2] - f.values[0]) / (2.0 * h);
    d.values[n - 2] = (f.values[n - 1] - f.values[n - 3]) / (2.0 * h);
    d.values[n - 1] = (3.0 * f.values[n - 1] - 4.0 * f.values[n - 2] + f.values[n - 3]) / (2.0 * h);
    return d;
}

/// The conjugated perturbation matrix LtG = -i * offdiag(beta, -conj(beta))
/// with
///   beta = a |q|^l (ix - 2t d/dx) q
///        + l a |q|^{l-2} q Re(conj(q) (ix - 2t d/dx) q)
///        + |q|^l q (ix - 2t d/dx) a.
/// q_x is supplied by the caller; the profile derivative is spectral (the
/// profile decays at the grid edges, or is constant with zero derivative).
inline Matrix2Field ltilde_g(const ComplexField& q, const ComplexField& q_x,
                             const PerturbationSpec& spec, double t) {
    spec.validate();
    require_finite(q, "ltilde_g");
    require_finite(q_x, "ltilde_g");
    if (q.grid.count != q_x.grid.count || q.grid.origin != q_x.grid.origin)
        throw std::invalid_argument("ltilde_g: q and q_x must share a grid");

    const ComplexField a_field =
        ComplexField::sample(q.grid, [&](double x) { return complex(spec.profile.a(x), 0.0); });
    const ComplexField a_x = spectral_derivative(a_field);

    Matrix2Field G(q.grid);
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double x = q.grid.node(i);
        const complex ix(0.0, x);
        const double a = a_field.values[i].real();
        const complex qv = q.values[i];
        const double aq = std::abs(qv);
        const complex lq = ix * qv - 2.0 * t * q_x.values[i];       // (ix - 2t d/dx) q
        const complex la = ix * a - 2.0 * t * a_x.values[i];        // (ix - 2t d/dx) a
        const double ql = std::pow(aq, spec.ell);
        const double qlm2 = std::pow(aq, spec.ell - 2.0);
        const complex beta = a * ql * lq +
                             spec.ell * a * qlm2 * qv * std::real(std::conj(qv) * lq) +
                             ql * qv * la;
        G.values[i] = Mat2{complex(0.0), complex(0.0, -1.0) * beta,
                           complex(0.0, 1.0) * std::conj(beta), complex(0.0)};
    }
    return G;
}

enum class DecayQuantity { LG_l2, LG_l1, F_h11, DeltaF_h11 };

/// Configuration for decay_probe. `r` is the base reflection data (pushed
/// along the integrable flow by the explicit phase); `r_pair` is a nearby
/// second datum for the Delta quantities.
struct DecayProbeConfig {
    ReflectionData r;
    ReflectionData r_pair;
    PerturbationSpec spec;
    Grid1D xgrid = Grid1D::over(-7.0, 7.0, 64);
    std::vector<double> times = {1.0, 2.0, 4.0, 8.0, 16.0};
    RhpOptions rhp;
};

namespace detail {

/// Off-diagonal magnitude norms of a Matrix2Field: entrywise |beta| reduced
/// in L2 or L1 over the grid.
inline double matrix_offdiag_norm(const Matrix2Field& G, int p) {
    ComplexField mag(G.grid);
    for (std::size_t i = 0; i < G.values.size(); ++i)
        mag.values[i] = std::abs(G.values[i](0, 1));
    if (p == 2) return std::sqrt(trapezoid_abs2(mag));
    return trapezoid_abs(mag);
}

inline double decay_value(DecayQuantity quantity, double t, const DecayProbeConfig& cfg) {
    switch (quantity) {
        case DecayQuantity::LG_l2:
        case DecayQuantity::LG_l1: {
            const ComplexField q = reconstruct_field(cfg.r.r, cfg.xgrid, t, cfg.rhp);
            const ComplexField qx = derivative_fd4(q);
            const Matrix2Field G = ltilde_g(q, qx, cfg.spec, t);
            return matrix_offdiag_norm(G, quantity == DecayQuantity::LG_l2 ? 2 : 1);
        }
        case DecayQuantity::F_h11: {
            const ComplexField F = f_functional(t, cfg.r, cfg.spec, cfg.xgrid);
            return h_norms(F).h11;
        }
        case DecayQuantity::DeltaF_h11: {
            const ComplexField F1 = f_functional(t, cfg.r, cfg.spec, cfg.xgrid);
            const ComplexField F2 = f_functional(t, cfg.r_pair, cfg.spec, cfg.xgrid);
            ComplexField d(F1.grid);
            for (std::size_t i = 0; i < d.size(); ++i)
                d.values[i] = F1.values[i] - F2.values[i];
            return h_norms(d).h11;
        }
    }
    throw std::invalid_argument("decay_probe: unknown quantity");
}

}  // namespace detail

/// Measure `quantity` along a dyadic t-sweep and fit its log-log decay rate.
inline DecayFit decay_probe(DecayQuantity quantity, const DecayProbeConfig& cfg) {
    if (cfg.times.size() < 2) throw std::invalid_argument("decay_probe: need >= 2 times");
    std::vector<double> values;
    values.reserve(cfg.times.size());
    for (double t : cfg.times) {
        const double v = detail::decay_value(quantity, t, cfg);
        if (!(v > 0.0)) throw std::domain_error("decay_probe: nonpositive measured value");
        values.push_back(v);
    }
    return fit_loglog(cfg.times, values);
}

/// Result of the uniform-boundedness probe for the solution boundary values.
struct MInfinityProbe {
    double max = 0.0;                 ///< max over the sweep of sup_z |m+| entries
    std::vector<double> per_time;     ///< max over the x sweep at each t
    DecayFit fit;                     ///< log-log fit of per_time vs t
};

/// Sweep (x, t) cells with x = factor * t, solve the full RHP at each cell,
/// and record sup_z of the largest |m+| entry. Uniform boundedness in t
/// means fit.exponent >= -0.05 (no growth trend; exponent is the decay rate).
inline MInfinityProbe m_infinity_probe(const ReflectionData& rd,
                                       const std::vector<double>& times,
                                       const std::vector<double>& x_factors = {0.0, 2.0, 4.0},
                                       const RhpOptions& opt = {}) {
    if (rd.rho >= 1.0) throw std::domain_error("m_infinity_probe: need sup|r| < 1");
    if (times.size() < 2) throw std::invalid_argument("m_infinity_probe: need >= 2 times");
    MInfinityProbe probe;
    for (double t : times) {
        double worst = 0.0;
        for (double f : x_factors) {
            const double x = f * t;
            const Grid1D g = rhp_solve_grid(rd.r.grid, x, t, opt.pad, opt.points_per_wave,
                                            opt.min_nodes, opt.max_nodes);
            const ComplexField rg = resample_reflection(rd.r, g, opt.taper_fraction);
            const JumpFactors w = jump_factors(rg, x, t);
            const MuSolution s = solve_mu(w, opt.tol);
            worst = std::max(worst, m_infinity(s));
        }
        probe.per_time.push_back(worst);
        probe.max = std::max(probe.max, worst);
    }
    probe.fit = fit_loglog(times, probe.per_time);
    return probe;
}

/// A-priori resolvent bound (1+rho)((1+rho) Minf^2 + 1) against which the
/// measured operator norm of (1 - C_w)^{-1} is compared.
inline double k2_bound(double rho, double m_inf) {
    return (1.0 + rho) * ((1.0 + rho) * m_inf * m_inf + 1.0);
}

}  // namespace nlsist
