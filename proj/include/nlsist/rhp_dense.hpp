#pragma once

#include <Eigen/Dense>

#include "nlsist/rhp.hpp"

namespace nlsist {

/// Dense quadrature discretization of the boundary projection C+- (sign = +-1):
/// singularity-subtracted principal value with a log endpoint correction, the
/// same rule as pv_integral but assembled as a matrix. Endpoint rows copy
/// their interior neighbors (fields handled here vanish at the edges). This
/// is the independent route used to cross-check the multiplier projections.
inline Eigen::MatrixXcd cauchy_matrix_quadrature(const Grid1D& g, int sign) {
    if (sign != +1 && sign != -1)
        throw std::invalid_argument("cauchy_matrix_quadrature: sign must be +-1");
    const auto n = static_cast<Eigen::Index>(g.count);
    const double h = g.spacing;
    const complex kernel(0.0, -1.0 / (2.0 * std::acos(-1.0)));  // 1/(2 pi i)
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 1; j + 1 < n; ++j) {
        const double zj = g.node(static_cast<std::size_t>(j));
        complex diag = complex(0.5 * sign, 0.0) +
                       kernel * std::log((g.back() - zj) / (zj - g.origin));
        for (Eigen::Index k = 0; k < n; ++k) {
            if (k == j) continue;
            const double wk = (k == 0 || k == n - 1) ? 0.5 : 1.0;
            const double zk = g.node(static_cast<std::size_t>(k));
            const complex c = kernel * h * wk / (zk - zj);
            A(j, k) += c;
            diag -= c;
        }
        // coincident node: integrand value is the centered difference f'(z_j)
        A(j, j + 1) += kernel * 0.5;
        A(j, j - 1) -= kernel * 0.5;
        A(j, j) += diag;
    }
    A.row(0) = A.row(1);
    A.row(n - 1) = A.row(n - 2);
    return A;
}

/// Assemble the full (1 - C_w) operator for one matrix row as a dense
/// 2N x 2N system and solve both rows with an LU factorization. Independent
/// of the FFT/GMRES route; intended for modest N (<= ~512).
inline MuSolution solve_mu_dense(const JumpFactors& w) {
    const auto n = static_cast<Eigen::Index>(w.grid.count);
    if (n > 4096) throw std::invalid_argument("solve_mu_dense: grid too large for dense route");
    const Eigen::MatrixXcd cp = cauchy_matrix_quadrature(w.grid, +1);
    const Eigen::MatrixXcd cm = cauchy_matrix_quadrature(w.grid, -1);

    Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(2 * n, 2 * n);
    // psi_1 - C+(psi_2 wp) ; psi_2 - C-(psi_1 wm)
    for (Eigen::Index k = 0; k < n; ++k) {
        op.block(0, n + k, n, 1) -= cp.col(k) * w.wp[static_cast<std::size_t>(k)];
        op.block(n, k, n, 1) -= cm.col(k) * w.wm[static_cast<std::size_t>(k)];
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(op);

    MuSolution s;
    s.w = w;
    for (int row = 0; row < 2; ++row) {
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(2 * n);
        if (row == 0) {
            Eigen::VectorXcd wmv(n);
            for (Eigen::Index i = 0; i < n; ++i) wmv(i) = w.wm[static_cast<std::size_t>(i)];
            rhs.segment(n, n) = cm * wmv;
        } else {
            Eigen::VectorXcd wpv(n);
            for (Eigen::Index i = 0; i < n; ++i) wpv(i) = w.wp[static_cast<std::size_t>(i)];
            rhs.segment(0, n) = cp * wpv;
        }
        Eigen::VectorXcd psi = lu.solve(rhs);
        MuRow out{ComplexField(w.grid), ComplexField(w.grid), 0,
                  (op * psi - rhs).norm() / std::max(rhs.norm(), 1e-300)};
        for (Eigen::Index i = 0; i < n; ++i) {
            out.first.values[static_cast<std::size_t>(i)] = psi(i) + (row == 0 ? 1.0 : 0.0);
            out.second.values[static_cast<std::size_t>(i)] = psi(n + i) + (row == 1 ? 1.0 : 0.0);
        }
        (row == 0 ? s.row1 : s.row2) = std::move(out);
    }
    return s;
}

}  // namespace nlsist
