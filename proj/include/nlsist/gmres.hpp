#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace nlsist {

struct GmresResult {
    std::vector<std::complex<double>> x;
    double residual = 0.0;          ///< final relative residual
    int iterations = 0;             ///< total matrix applications
    bool converged = false;
    std::vector<double> history;    ///< relative residual after each iteration
};

namespace detail {

inline std::complex<double> dot(const std::vector<std::complex<double>>& a,
                                const std::vector<std::complex<double>>& b) {
    std::complex<double> s(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double nrm2(const std::vector<std::complex<double>>& a) {
    double s = 0.0;
    for (const auto& v : a) s += std::norm(v);
    return std::sqrt(s);
}

}  // namespace detail

/// Restarted GMRES for complex linear systems, matrix-free. `apply` maps a
/// vector to A*vector. Arnoldi with modified Gram-Schmidt and Givens
/// rotations on the Hessenberg matrix.
inline GmresResult gmres(const std::function<std::vector<std::complex<double>>(
                             const std::vector<std::complex<double>>&)>& apply,
                         const std::vector<std::complex<double>>& b, double tol = 1e-10,
                         int max_iterations = 2000, int restart = 200,
                         const std::vector<std::complex<double>>* x0 = nullptr) {
    using cvec = std::vector<std::complex<double>>;
    using cd = std::complex<double>;
    const std::size_t n = b.size();
    GmresResult res;
    if (x0 != nullptr && x0->size() == n)
        res.x = *x0;  // warm start, e.g. from a neighboring parameter value
    else
        res.x.assign(n, cd(0.0, 0.0));
    const double bnorm = detail::nrm2(b);
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }

    while (res.iterations < max_iterations) {
        // residual of current iterate
        cvec r = apply(res.x);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
        double beta = detail::nrm2(r);
        res.residual = beta / bnorm;
        if (res.residual < tol) {
            res.converged = true;
            return res;
        }

        const int m = restart;
        std::vector<cvec> v;
        v.reserve(static_cast<std::size_t>(m) + 1);
        cvec v0 = r;
        for (auto& e : v0) e /= beta;
        v.push_back(std::move(v0));

        std::vector<std::vector<cd>> h(static_cast<std::size_t>(m) + 1,
                                       std::vector<cd>(static_cast<std::size_t>(m), cd(0, 0)));
        std::vector<cd> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m));
        std::vector<cd> g(static_cast<std::size_t>(m) + 1, cd(0, 0));
        g[0] = beta;

        int k = 0;
        for (; k < m && res.iterations < max_iterations; ++k) {
            ++res.iterations;
            cvec w = apply(v[static_cast<std::size_t>(k)]);
            for (int j = 0; j <= k; ++j) {
                h[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                    detail::dot(v[static_cast<std::size_t>(j)], w);
                const cd hij = h[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                const auto& vj = v[static_cast<std::size_t>(j)];
                for (std::size_t i = 0; i < n; ++i) w[i] -= hij * vj[i];
            }
            double hk1 = detail::nrm2(w);
            h[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(k)] = hk1;

            // apply previous Givens rotations to the new column
            for (int j = 0; j < k; ++j) {
                cd t = std::conj(cs[static_cast<std::size_t>(j)]) *
                           h[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] +
                       std::conj(sn[static_cast<std::size_t>(j)]) *
                           h[static_cast<std::size_t>(j) + 1][static_cast<std::size_t>(k)];
                h[static_cast<std::size_t>(j) + 1][static_cast<std::size_t>(k)] =
                    -sn[static_cast<std::size_t>(j)] *
                        h[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] +
                    cs[static_cast<std::size_t>(j)] *
                        h[static_cast<std::size_t>(j) + 1][static_cast<std::size_t>(k)];
                h[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = t;
            }
            // new rotation
            const cd hkk = h[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
            const double denom = std::sqrt(std::norm(hkk) + hk1 * hk1);
            if (denom == 0.0) throw std::runtime_error("gmres: breakdown (zero Hessenberg column)");
            cs[static_cast<std::size_t>(k)] = hkk / denom;
            sn[static_cast<std::size_t>(k)] = hk1 / denom;
            h[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = denom;
            h[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(k)] = 0.0;
            g[static_cast<std::size_t>(k) + 1] = -sn[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(k)];
            g[static_cast<std::size_t>(k)] = std::conj(cs[static_cast<std::size_t>(k)]) * g[static_cast<std::size_t>(k)];

            res.residual = std::abs(g[static_cast<std::size_t>(k) + 1]) / bnorm;
            res.history.push_back(res.residual);

            if (hk1 > 0.0 && res.residual >= tol) {
                for (auto& e : w) e /= hk1;
                v.push_back(std::move(w));
            } else {
                ++k;
                break;
            }
        }

        // back substitution for the minimizer over the Krylov space built
        std::vector<cd> y(static_cast<std::size_t>(k), cd(0, 0));
        for (int i = k - 1; i >= 0; --i) {
            cd s = g[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                s -= h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
            y[static_cast<std::size_t>(i)] = s / h[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        }
        for (int j = 0; j < k; ++j) {
            const auto& vj = v[static_cast<std::size_t>(j)];
            const cd yj = y[static_cast<std::size_t>(j)];
            for (std::size_t i = 0; i < n; ++i) res.x[i] += yj * vj[i];
        }

        if (res.residual < tol) {
            res.converged = true;
            return res;
        }
        if (k == 0) break;  // no progress possible
    }
    return res;
}

}  // namespace nlsist
