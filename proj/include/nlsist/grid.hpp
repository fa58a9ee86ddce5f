#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nlsist {

using complex = std::complex<double>;

/// Uniform 1-d grid. Nodes are always computed from the index so that
/// node(i) is bit-identical no matter how often it is evaluated.
struct Grid1D {
    double origin = 0.0;
    double spacing = 1.0;
    std::size_t count = 2;

    Grid1D() = default;
    Grid1D(double origin_, double spacing_, std::size_t count_)
        : origin(origin_), spacing(spacing_), count(count_) {
        if (!(spacing > 0.0)) throw std::invalid_argument("Grid1D: spacing must be > 0");
        if (count < 2) throw std::invalid_argument("Grid1D: count must be >= 2");
    }

    static Grid1D over(double a, double b, std::size_t n) {
        if (!(b > a)) throw std::invalid_argument("Grid1D::over: need b > a");
        return Grid1D(a, (b - a) / static_cast<double>(n - 1), n);
    }

    double node(std::size_t i) const { return origin + static_cast<double>(i) * spacing; }
    double back() const { return node(count - 1); }
    double length() const { return static_cast<double>(count - 1) * spacing; }

    bool operator==(const Grid1D& o) const {
        return origin == o.origin && spacing == o.spacing && count == o.count;
    }

    /// Index of the node nearest to x (clamped to the grid).
    std::size_t nearest(double x) const {
        double f = (x - origin) / spacing;
        if (f <= 0.0) return 0;
        auto i = static_cast<std::size_t>(std::llround(f));
        return i >= count ? count - 1 : i;
    }

    bool contains_interior(double x) const { return x > origin && x < back(); }
};

/// Complex-valued samples on a uniform grid.
struct ComplexField {
    Grid1D grid;
    std::vector<complex> values;

    ComplexField() = default;
    explicit ComplexField(Grid1D g) : grid(g), values(g.count, complex(0.0, 0.0)) {}
    ComplexField(Grid1D g, std::vector<complex> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.count)
            throw std::invalid_argument("ComplexField: values length must equal grid.count");
    }

    template <class F>
    static ComplexField sample(Grid1D g, F&& f) {
        ComplexField out(g);
        for (std::size_t i = 0; i < g.count; ++i) out.values[i] = complex(f(g.node(i)));
        return out;
    }

    std::size_t size() const { return values.size(); }
    complex& operator[](std::size_t i) { return values[i]; }
    const complex& operator[](std::size_t i) const { return values[i]; }

    bool finite() const {
        for (const auto& v : values)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    double sup_norm() const {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

inline void require_finite(const ComplexField& f, const char* what) {
    if (!f.finite()) throw std::invalid_argument(std::string(what) + ": non-finite field");
}

/// Cubic (4-point Lagrange) interpolation of field values at x.
/// Falls back to linear near the grid ends.
inline complex interpolate(const ComplexField& f, double x) {
    const Grid1D& g = f.grid;
    double fidx = (x - g.origin) / g.spacing;
    if (fidx < 0.0 || fidx > static_cast<double>(g.count - 1))
        throw std::domain_error("interpolate: x outside grid");
    auto i = static_cast<std::ptrdiff_t>(std::floor(fidx));
    if (i >= static_cast<std::ptrdiff_t>(g.count) - 1) i = static_cast<std::ptrdiff_t>(g.count) - 2;
    double s = fidx - static_cast<double>(i);
    if (i < 1 || i > static_cast<std::ptrdiff_t>(g.count) - 3) {
        return f.values[i] * (1.0 - s) + f.values[i + 1] * s;
    }
    // Lagrange weights on nodes {-1, 0, 1, 2} relative to i.
    double w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
    double w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    double w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    double w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
    return w0 * f.values[i - 1] + w1 * f.values[i] + w2 * f.values[i + 1] + w3 * f.values[i + 2];
}

}  // namespace nlsist
