#pragma once

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>

#include "nlsist/grid.hpp"

namespace nlsist {

namespace detail {

/// Cached FFTW plans, one per (size, direction). FFTW planning is not
/// thread-safe, execution with fftw_execute_dft is.
class FftPlans {
  public:
    static FftPlans& instance() {
        static FftPlans p;
        return p;
    }

    void execute(std::vector<complex>& data, int sign) {
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto key = std::make_pair(data.size(), sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                std::vector<complex> scratch(data.size());
                plan = fftw_plan_dft_1d(static_cast<int>(data.size()),
                                        reinterpret_cast<fftw_complex*>(scratch.data()),
                                        reinterpret_cast<fftw_complex*>(scratch.data()), sign,
                                        FFTW_ESTIMATE);
                plans_.emplace(key, plan);
            } else {
                plan = it->second;
            }
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data.data()),
                         reinterpret_cast<fftw_complex*>(data.data()));
    }

  private:
    FftPlans() = default;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
    std::mutex mutex_;
};

}  // namespace detail

/// Unnormalized in-place DFT; sign = FFTW_FORWARD (-1) or FFTW_BACKWARD (+1).
inline void dft_inplace(std::vector<complex>& v, int sign) {
    detail::FftPlans::instance().execute(v, sign);
}

/// Frequency grid associated with a space grid: k_m = 2*pi*m/(N*h),
/// m = -N/2 .. N/2-1 (N even) laid out in increasing order.
inline Grid1D frequency_grid(const Grid1D& g) {
    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(g.count) * g.spacing);
    return Grid1D(-dk * static_cast<double>(g.count / 2), dk, g.count);
}

/// Continuous-normalization Fourier transform,
///   F(k) = (2*pi)^{-1/2} \int f(x) e^{-ikx} dx,
/// approximated by the trapezoid/DFT on the grid. Unitary: composing with
/// inverse_transform returns the input to rounding accuracy.
inline ComplexField forward_transform(const ComplexField& f) {
    require_finite(f, "forward_transform");
    const Grid1D& g = f.grid;
    const std::size_t n = g.count;
    std::vector<complex> buf = f.values;
    dft_inplace(buf, FFTW_FORWARD);
    Grid1D kg = frequency_grid(g);
    ComplexField out(kg);
    const double scale = g.spacing / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t m = 0; m < n; ++m) {
        // DFT bin for signed mode index m - n/2.
        std::size_t bin = (m + n - n / 2) % n;
        double k = kg.node(m);
        out.values[m] = scale * buf[bin] * std::polar(1.0, -k * g.origin);
    }
    return out;
}

/// Inverse of forward_transform; takes a field on a frequency grid and the
/// space grid it came from.
inline ComplexField inverse_transform(const ComplexField& fk, const Grid1D& xgrid) {
    require_finite(fk, "inverse_transform");
    const std::size_t n = xgrid.count;
    if (fk.size() != n) throw std::invalid_argument("inverse_transform: size mismatch");
    Grid1D kg = frequency_grid(xgrid);
    std::vector<complex> buf(n);
    const double scale = xgrid.spacing / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t m = 0; m < n; ++m) {
        std::size_t bin = (m + n - n / 2) % n;
        double k = kg.node(m);
        buf[bin] = fk.values[m] * std::polar(1.0, k * xgrid.origin) / (scale * static_cast<double>(n));
    }
    dft_inplace(buf, FFTW_BACKWARD);
    return ComplexField(xgrid, std::move(buf));
}

/// Spectral derivative on the grid (periodic; intended for fields that decay
/// below roundoff at the edges).
inline ComplexField spectral_derivative(const ComplexField& f) {
    require_finite(f, "spectral_derivative");
    const std::size_t n = f.grid.count;
    std::vector<complex> buf = f.values;
    dft_inplace(buf, FFTW_FORWARD);
    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * f.grid.spacing);
    for (std::size_t j = 0; j < n; ++j) {
        double m = (j <= n / 2) ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
        if (j == n / 2) m = 0.0;  // drop the ambiguous Nyquist mode
        buf[j] *= complex(0.0, m * dk) / static_cast<double>(n);
    }
    dft_inplace(buf, FFTW_BACKWARD);
    return ComplexField(f.grid, std::move(buf));
}

/// Trigonometric refinement of a decaying field onto the same interval with
/// `factor` times as many nodes (spectral zero-padding).
inline ComplexField spectral_refine(const ComplexField& f, std::size_t factor) {
    if (factor == 1) return f;
    const std::size_t n = f.grid.count;
    const std::size_t m = n * factor;
    std::vector<complex> spec = f.values;
    dft_inplace(spec, FFTW_FORWARD);
    std::vector<complex> big(m, complex(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t src = j;
        std::size_t dst = (j <= n / 2) ? j : m - (n - j);
        big[dst] = spec[src] / static_cast<double>(n);
    }
    // Split the Nyquist bin symmetrically so the refinement stays real for
    // real input.
    if (n % 2 == 0) {
        big[n / 2] *= 0.5;
        big[m - n / 2] = big[n / 2];
    }
    dft_inplace(big, FFTW_BACKWARD);
    // The refined grid has n*factor nodes, so original node i is fine node
    // i*factor and power-of-two counts stay powers of two.
    Grid1D fine(f.grid.origin, f.grid.spacing / static_cast<double>(factor), m);
    return ComplexField(fine, std::move(big));
}

}  // namespace nlsist
