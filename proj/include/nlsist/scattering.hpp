#pragma once

#include <array>

#include "nlsist/norms.hpp"

namespace nlsist {

/// 2x2 complex matrix, row major.
struct Mat2 {
    std::array<complex, 4> e{complex(0), complex(0), complex(0), complex(0)};

    static Mat2 identity() { return Mat2{{complex(1), complex(0), complex(0), complex(1)}}; }
    complex& operator()(int r, int c) { return e[2 * r + c]; }
    const complex& operator()(int r, int c) const { return e[2 * r + c]; }

    Mat2 operator*(const Mat2& o) const {
        Mat2 m;
        m.e[0] = e[0] * o.e[0] + e[1] * o.e[2];
        m.e[1] = e[0] * o.e[1] + e[1] * o.e[3];
        m.e[2] = e[2] * o.e[0] + e[3] * o.e[2];
        m.e[3] = e[2] * o.e[1] + e[3] * o.e[3];
        return m;
    }
    Mat2 operator+(const Mat2& o) const {
        Mat2 m;
        for (int i = 0; i < 4; ++i) m.e[i] = e[i] + o.e[i];
        return m;
    }
    Mat2 operator*(complex s) const {
        Mat2 m;
        for (int i = 0; i < 4; ++i) m.e[i] = e[i] * s;
        return m;
    }
    complex det() const { return e[0] * e[3] - e[1] * e[2]; }
    Mat2 inverse() const {
        complex d = det();
        Mat2 m;
        m.e[0] = e[3] / d;
        m.e[1] = -e[1] / d;
        m.e[2] = -e[2] / d;
        m.e[3] = e[0] / d;
        return m;
    }
    double sup() const {
        double s = 0;
        for (const auto& v : e) s = std::max(s, std::abs(v));
        return s;
    }
};

enum class JostSide { left, right };

namespace detail {

/// Right-hand side of the gauge-transformed AKNS system
///   Phi' = iz [sigma, Phi] + Q(x) Phi,  sigma = diag(1/2, -1/2),
/// where Phi = Psi e^{-ixz sigma}. The commutator kills the diagonal
/// oscillation, so a fixed-step integrator at the sample spacing is stable.
inline Mat2 akns_rhs(const Mat2& m, complex q, double z) {
    const complex qb = std::conj(q);
    const complex iz(0.0, z);
    Mat2 r;
    r(0, 0) = q * m(1, 0);
    r(0, 1) = iz * m(0, 1) + q * m(1, 1);
    r(1, 0) = -iz * m(1, 0) + qb * m(0, 0);
    r(1, 1) = qb * m(0, 1);
    return r;
}

/// Midpoint samples of q by 4-point cubic interpolation, so the RK4 order is
/// not degraded by the sampled potential.
inline std::vector<complex> midpoints(const ComplexField& q) {
    const std::size_t n = q.size();
    std::vector<complex> mid(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (j == 0 || j + 2 >= n) {
            mid[j] = 0.5 * (q.values[j] + q.values[j + 1]);
        } else {
            mid[j] = (-q.values[j - 1] + 9.0 * q.values[j] + 9.0 * q.values[j + 1] -
                      q.values[j + 2]) / 16.0;
        }
    }
    return mid;
}

}  // namespace detail

/// Integrates the gauge-normalized Jost solution across the grid from the
/// given side (Phi = I there) and returns Phi at the opposite end.
/// Throws if the potential has not decayed at the grid edges.
inline Mat2 jost_solve(const ComplexField& q, double z, JostSide side,
                       double edge_tol = 1e-8) {
    require_finite(q, "jost_solve");
    if (!std::isfinite(z)) throw std::invalid_argument("jost_solve: z must be finite");
    const double edge = std::max(std::abs(q.values.front()), std::abs(q.values.back()));
    if (edge > edge_tol)
        throw std::domain_error("jost_solve: potential has not decayed at the grid edges");

    const std::size_t n = q.size();
    const auto mid = detail::midpoints(q);
    Mat2 m = Mat2::identity();
    const double sign = (side == JostSide::left) ? 1.0 : -1.0;
    const double h = sign * q.grid.spacing;

    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t j0, j1, jm;
        if (side == JostSide::left) {
            j0 = step;
            j1 = step + 1;
            jm = step;
        } else {
            j0 = n - 1 - step;
            j1 = n - 2 - step;
            jm = n - 2 - step;
        }
        const Mat2 k1 = detail::akns_rhs(m, q.values[j0], z);
        const Mat2 k2 = detail::akns_rhs(m + k1 * complex(0.5 * h), mid[jm], z);
        const Mat2 k3 = detail::akns_rhs(m + k2 * complex(0.5 * h), mid[jm], z);
        const Mat2 k4 = detail::akns_rhs(m + k3 * complex(h), q.values[j1], z);
        m = m + (k1 + k2 * complex(2.0) + k3 * complex(2.0) + k4) * complex(h / 6.0);
        if (!std::isfinite(m.sup()))
            throw std::runtime_error("jost_solve: integrator failure (non-finite state)");
    }
    return m;
}

/// Scattering entries a(z), b(z) on a z-grid, from S(z) with
/// Psi^+ = Psi^- S(z). The determinant relation |a|^2 - |b|^2 = 1 is a
/// byproduct of the trace-free coefficient matrix, not enforced.
struct ScatteringEntries {
    Grid1D zgrid;
    ComplexField a;
    ComplexField b;
};

inline Mat2 scattering_matrix(const ComplexField& q, double z) {
    // Psi^-(x) = Phi(x) e^{ixz sigma} with Phi from the left; at the right
    // edge Psi^+ = e^{ixz sigma}, so S = e^{-ixz sigma} Phi^{-1} e^{ixz sigma}.
    const Mat2 phi = jost_solve(q, z, JostSide::left);
    const double xe = q.grid.back();
    const complex phase = std::polar(1.0, xe * z);
    Mat2 s = phi.inverse();
    s(0, 1) *= std::conj(phase);
    s(1, 0) *= phase;
    return s;
}

inline ScatteringEntries scattering_map(const ComplexField& q, const Grid1D& zgrid) {
    ScatteringEntries out{zgrid, ComplexField(zgrid), ComplexField(zgrid)};
    for (std::size_t i = 0; i < zgrid.count; ++i) {
        const Mat2 s = scattering_matrix(q, zgrid.node(i));
        out.a.values[i] = s(0, 0);
        out.b.values[i] = s(1, 0);
    }
    return out;
}

/// Reflection coefficient r = conj(b)/a (symmetry relations on the real
/// line give breve(b) = conj(b)).
inline ReflectionData reflection_of(const ScatteringEntries& entries) {
    ComplexField r(entries.zgrid);
    for (std::size_t i = 0; i < entries.zgrid.count; ++i) {
        const complex a = entries.a.values[i];
        if (std::abs(a) < 1e-12)
            throw std::domain_error("reflection_of: degenerate entry a(z) ~ 0");
        r.values[i] = std::conj(entries.b.values[i]) / a;
    }
    return ReflectionData(std::move(r));
}

/// Direct scattering map R: potential -> reflection coefficient.
inline ReflectionData scattering_reflection(const ComplexField& q, const Grid1D& zgrid) {
    return reflection_of(scattering_map(q, zgrid));
}

}  // namespace nlsist
