#pragma once

#include <cmath>
#include <random>

#include "nlsist/cauchy.hpp"
#include "nlsist/gmres.hpp"
#include "nlsist/norms.hpp"
#include "nlsist/scattering.hpp"

namespace nlsist {

/// Oscillatory phase theta(x,t,z) = x z - t z^2 driving the jump matrices.
inline double phase(double x, double t, double z) { return x * z - t * z * z; }

/// Stationary point of the phase, z0 = x / (2 t).
inline double stationary_point(double x, double t) {
    if (t == 0.0) throw std::domain_error("stationary_point: t must be nonzero");
    return x / (2.0 * t);
}

/// Lower/upper factor data on the solve contour:
///   wm(z) = r(z) e^{i theta}   (the (1,2) entry of w-),
///   wp(z) = -conj(r(z)) e^{-i theta}   (the (2,1) entry of w+).
struct JumpFactors {
    Grid1D grid;
    std::vector<complex> wm;
    std::vector<complex> wp;
};

/// Resample a reflection coefficient onto a solve grid: cubic interpolation
/// inside its native support (edges tapered to zero first), zero outside.
inline ComplexField resample_reflection(const ComplexField& r, const Grid1D& g,
                                        double taper_fraction = 0.05) {
    const ComplexField rt = taper_edges(r, taper_fraction);
    ComplexField out(g);
    for (std::size_t i = 0; i < g.count; ++i) {
        const double z = g.node(i);
        out.values[i] = (z > r.grid.origin && z < r.grid.back()) ? interpolate(rt, z)
                                                                 : complex(0.0, 0.0);
    }
    return out;
}

inline JumpFactors jump_factors(const ComplexField& r_on_grid, double x, double t) {
    JumpFactors w;
    w.grid = r_on_grid.grid;
    w.wm.resize(w.grid.count);
    w.wp.resize(w.grid.count);
    for (std::size_t i = 0; i < w.grid.count; ++i) {
        const double z = w.grid.node(i);
        const complex e = std::exp(complex(0.0, phase(x, t, z)));
        w.wm[i] = r_on_grid.values[i] * e;
        w.wp[i] = -std::conj(r_on_grid.values[i]) / e;
    }
    return w;
}

/// Contour for a given (x, t): the reflection support padded by `pad` on each
/// side (periodization error of the multiplier projections decays with the
/// square of the padded length), sampled finely enough to resolve the local
/// phase frequency |x - 2 t z| with `points_per_wave` nodes per oscillation.
inline Grid1D rhp_solve_grid(const Grid1D& rsupport, double x, double t, double pad = 2.0,
                             double points_per_wave = 12.0, std::size_t min_nodes = 1024,
                             std::size_t max_nodes = std::size_t(1) << 21) {
    const double a = rsupport.origin;
    const double b = rsupport.back();
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a) * pad;
    const double lo = center - half;
    const double hi = center + half;

    const double freq = std::max({std::abs(x - 2.0 * t * a), std::abs(x - 2.0 * t * b), 1.0});
    const double dz = 2.0 * std::acos(-1.0) / (points_per_wave * freq);
    double want = (hi - lo) / dz;
    std::size_t n = min_nodes;
    while (static_cast<double>(n) < want && n < max_nodes) n <<= 1;
    return Grid1D::over(lo, hi, n);
}

/// One row of mu = I + psi where (1 - C_w) psi = C_w(I).
struct MuRow {
    ComplexField first;
    ComplexField second;
    int iterations = 0;
    double residual = 0.0;
    std::vector<complex> psi;  ///< raw GMRES solution, reusable as a warm start
};

namespace detail {

inline ComplexField pointwise(const Grid1D& g, const std::vector<complex>& a,
                              const std::vector<complex>& b) {
    ComplexField out(g);
    for (std::size_t i = 0; i < g.count; ++i) out.values[i] = a[i] * b[i];
    return out;
}

/// Apply (1 - C_w) restricted to a single matrix row. The row structure
/// decouples:  C_w(h)_1 = C+(h_2 wp),  C_w(h)_2 = C-(h_1 wm).
/// (Which projection goes with which factor is pinned by the roundtrip test:
/// the opposite pairing reproduces the Born limit too, but drifts from the
/// true potential at second order in the reflection.)
inline std::vector<complex> apply_one_minus_cw(const JumpFactors& w,
                                               const std::vector<complex>& v) {
    const std::size_t n = w.grid.count;
    ComplexField p1(w.grid), p2(w.grid);
    for (std::size_t i = 0; i < n; ++i) {
        p1.values[i] = v[i] * w.wm[i];          // psi_1 * wm
        p2.values[i] = v[n + i] * w.wp[i];      // psi_2 * wp
    }
    const ComplexField c1 = cauchy_project(p2, +1);
    const ComplexField c2 = cauchy_project(p1, -1);
    std::vector<complex> out(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = v[i] - c1.values[i];
        out[n + i] = v[n + i] - c2.values[i];
    }
    return out;
}

/// Adjoint of (1 - C_w) in the unweighted discrete inner product. The
/// multiplier projections are self-adjoint, so
///   C_w^*(u_1, u_2) = (conj(wm) C-(u_2), conj(wp) C+(u_1)).
inline std::vector<complex> apply_one_minus_cw_adjoint(const JumpFactors& w,
                                                       const std::vector<complex>& v) {
    const std::size_t n = w.grid.count;
    ComplexField u1(w.grid), u2(w.grid);
    for (std::size_t i = 0; i < n; ++i) {
        u1.values[i] = v[i];
        u2.values[i] = v[n + i];
    }
    const ComplexField c1 = cauchy_project(u2, -1);
    const ComplexField c2 = cauchy_project(u1, +1);
    std::vector<complex> out(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = v[i] - std::conj(w.wm[i]) * c1.values[i];
        out[n + i] = v[n + i] - std::conj(w.wp[i]) * c2.values[i];
    }
    return out;
}

}  // namespace detail

/// Solve row `row` (0 for e_1, 1 for e_2) of the Beals-Coifman equation with
/// restarted GMRES on the multiplier-projection operator.
inline MuRow solve_mu_row(const JumpFactors& w, int row, double tol = 1e-10,
                          int max_iterations = 2000,
                          const std::vector<complex>* guess = nullptr) {
    const std::size_t n = w.grid.count;
    std::vector<complex> rhs(2 * n, complex(0.0, 0.0));
    if (row == 0) {
        // C_w(e_1 row): second component C-(wm)
        ComplexField wm(w.grid);
        wm.values.assign(w.wm.begin(), w.wm.end());
        const ComplexField c = cauchy_project(wm, -1);
        for (std::size_t i = 0; i < n; ++i) rhs[n + i] = c.values[i];
    } else if (row == 1) {
        // C_w(e_2 row): first component C+(wp)
        ComplexField wp(w.grid);
        wp.values.assign(w.wp.begin(), w.wp.end());
        const ComplexField c = cauchy_project(wp, +1);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = c.values[i];
    } else {
        throw std::invalid_argument("solve_mu_row: row must be 0 or 1");
    }

    auto op = [&w](const std::vector<complex>& v) { return detail::apply_one_minus_cw(w, v); };
    GmresResult g = gmres(op, rhs, tol, max_iterations, 200, guess);
    if (!g.converged)
        throw std::runtime_error("solve_mu_row: GMRES stagnated at relative residual " +
                                 std::to_string(g.residual));

    MuRow out{ComplexField(w.grid), ComplexField(w.grid), g.iterations, g.residual, {}};
    for (std::size_t i = 0; i < n; ++i) {
        out.first.values[i] = g.x[i] + (row == 0 ? 1.0 : 0.0);
        out.second.values[i] = g.x[n + i] + (row == 1 ? 1.0 : 0.0);
    }
    out.psi = std::move(g.x);
    return out;
}

/// Full 2x2 solution mu and the jump data it was solved against.
struct MuSolution {
    JumpFactors w;
    MuRow row1;  ///< row of mu starting from e_1
    MuRow row2;  ///< row of mu starting from e_2
    Mat2 mu(std::size_t i) const {
        return Mat2{row1.first.values[i], row1.second.values[i], row2.first.values[i],
                    row2.second.values[i]};
    }
    /// Boundary value from above: m+ = mu (I + w-), with w- carrying wm in
    /// the (1,2) slot.
    Mat2 m_plus(std::size_t i) const {
        Mat2 m = mu(i);
        return Mat2{m(0, 0), m(0, 1) + m(0, 0) * w.wm[i], m(1, 0), m(1, 1) + m(1, 0) * w.wm[i]};
    }
    /// Boundary value from below: m- = mu (I - w+), with w+ carrying wp in
    /// the (2,1) slot.
    Mat2 m_minus(std::size_t i) const {
        Mat2 m = mu(i);
        return Mat2{m(0, 0) - m(0, 1) * w.wp[i], m(0, 1), m(1, 0) - m(1, 1) * w.wp[i], m(1, 1)};
    }
};

inline MuSolution solve_mu(const JumpFactors& w, double tol = 1e-10, int max_iterations = 2000) {
    MuSolution s;
    s.w = w;
    s.row1 = solve_mu_row(w, 0, tol, max_iterations);
    s.row2 = solve_mu_row(w, 1, tol, max_iterations);
    return s;
}

/// sup over the contour of the largest entry of the boundary values m+-.
inline double m_infinity(const MuSolution& s) {
    double sup = 0.0;
    for (std::size_t i = 0; i < s.w.grid.count; ++i) {
        sup = std::max(sup, s.m_plus(i).sup());
        sup = std::max(sup, s.m_minus(i).sup());
    }
    return sup;
}

struct RhpOptions {
    double pad = 2.0;
    double points_per_wave = 12.0;
    std::size_t min_nodes = 1024;
    std::size_t max_nodes = std::size_t(1) << 21;
    double tol = 1e-10;
    double taper_fraction = 0.05;
};

/// Potential value at (x, t) from the first-row solution:
///   q(x,t) = -(1/2 pi) \int mu_11(z) r(z) e^{i theta} dz.
/// (The sign goes with this library's r = conj(b)/a convention; it is pinned
/// by a Born-approximation check in the test suite.)
inline complex reconstruct_from_row(const MuRow& row1, const JumpFactors& w) {
    ComplexField integrand = detail::pointwise(w.grid, row1.first.values, w.wm);
    return -trapezoid(integrand) / (2.0 * std::acos(-1.0));
}

inline complex reconstruct_point(const ComplexField& r, double x, double t,
                                 const RhpOptions& opt = {}) {
    const Grid1D g = rhp_solve_grid(r.grid, x, t, opt.pad, opt.points_per_wave, opt.min_nodes,
                                    opt.max_nodes);
    const ComplexField rg = resample_reflection(r, g, opt.taper_fraction);
    const JumpFactors w = jump_factors(rg, x, t);
    const MuRow row1 = solve_mu_row(w, 0, opt.tol);
    return reconstruct_from_row(row1, w);
}

/// Reconstruct q on a whole x-grid at fixed time.
inline ComplexField reconstruct_field(const ComplexField& r, const Grid1D& xgrid, double t,
                                      const RhpOptions& opt = {}) {
    ComplexField q(xgrid);
    for (std::size_t i = 0; i < xgrid.count; ++i)
        q.values[i] = reconstruct_point(r, xgrid.node(i), t, opt);
    return q;
}

namespace detail {

/// Largest singular value of a real lower-bidiagonal matrix (diagonal `alpha`,
/// subdiagonal `beta`) by power iteration on B^T B; the matrices involved are
/// tiny, so many cheap iterations are fine.
inline double bidiagonal_sigma_max(const std::vector<double>& alpha,
                                   const std::vector<double>& beta) {
    const std::size_t k = alpha.size();
    std::vector<double> v(k, 1.0 / std::sqrt(static_cast<double>(k)));
    double sigma2 = 0.0;
    for (int it = 0; it < 2000; ++it) {
        // u = B v  (u has length k+1: u_j = alpha_j v_j + beta_{j-1} v_{j-1})
        std::vector<double> u(k + 1, 0.0);
        for (std::size_t j = 0; j < k; ++j) {
            u[j] += alpha[j] * v[j];
            u[j + 1] += beta[j] * v[j];
        }
        // w = B^T u
        std::vector<double> x(k, 0.0);
        for (std::size_t j = 0; j < k; ++j) x[j] = alpha[j] * u[j] + beta[j] * u[j + 1];
        double s = 0.0;
        for (double e : x) s += e * e;
        s = std::sqrt(s);
        if (s == 0.0) return 0.0;
        for (std::size_t j = 0; j < k; ++j) v[j] = x[j] / s;
        if (it > 8 && std::abs(s - sigma2) < 1e-12 * s) {
            sigma2 = s;
            break;
        }
        sigma2 = s;
    }
    return std::sqrt(sigma2);
}

}  // namespace detail

/// Operator norm of (1 - C_w)^{-1} on the discrete contour via Golub-Kahan
/// Lanczos bidiagonalization of A = (1 - C_w)^{-1}; each application of A or
/// A^* is a GMRES solve with the operator or its adjoint. Full
/// reorthogonalization keeps the short recurrence honest.
inline double resolvent_norm(const JumpFactors& w, int max_lanczos = 60, double tol = 1e-8) {
    const std::size_t n2 = 2 * w.grid.count;
    auto fwd = [&w](const std::vector<complex>& u) { return detail::apply_one_minus_cw(w, u); };
    auto adj = [&w](const std::vector<complex>& u) {
        return detail::apply_one_minus_cw_adjoint(w, u);
    };
    auto solve = [tol](auto&& op, const std::vector<complex>& rhs) {
        GmresResult g = gmres(op, rhs, tol, 6000);
        if (!g.converged)
            throw std::runtime_error("resolvent_norm: inner solve failed to converge");
        return std::move(g.x);
    };
    auto normalize = [](std::vector<complex>& u) {
        double s = detail::nrm2(u);
        if (s > 0.0)
            for (auto& e : u) e /= s;
        return s;
    };
    auto reorth = [](const std::vector<std::vector<complex>>& basis, std::vector<complex>& u) {
        for (const auto& q : basis) {
            complex c = detail::dot(q, u);
            for (std::size_t i = 0; i < u.size(); ++i) u[i] -= c * q[i];
        }
    };

    std::mt19937 rng(20240915);
    std::normal_distribution<double> nd;
    std::vector<complex> v(n2);
    for (auto& e : v) e = complex(nd(rng), nd(rng));
    normalize(v);

    std::vector<std::vector<complex>> vs{v}, us;
    std::vector<double> alpha, beta;
    double sigma_prev = 0.0;
    for (int j = 0; j < max_lanczos; ++j) {
        // u_j = A v_j - beta_{j-1} u_{j-1}
        std::vector<complex> u = solve(fwd, vs.back());
        reorth(us, u);
        double a = normalize(u);
        if (a == 0.0) break;
        alpha.push_back(a);
        us.push_back(u);
        // v_{j+1} = A^* u_j - alpha_j v_j
        std::vector<complex> vn = solve(adj, us.back());
        reorth(vs, vn);
        double b = normalize(vn);
        beta.push_back(b);
        double sigma = detail::bidiagonal_sigma_max(alpha, beta);
        if (j > 3 && std::abs(sigma - sigma_prev) < 1e-7 * sigma) return sigma;
        sigma_prev = sigma;
        if (b == 0.0) break;
        vs.push_back(vn);
    }
    return sigma_prev;
}

}  // namespace nlsist
