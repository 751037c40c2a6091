#include "logconc/grid.hpp"

#include <algorithm>
#include <cmath>

namespace logconc {

Index GridSpec::size() const {
    Index s = 1;
    for (Index n : shape) s *= n;
    return s;
}

std::vector<Index> GridSpec::strides() const {
    std::vector<Index> st(shape.size(), 1);
    for (int k = dim() - 2; k >= 0; --k) st[k] = st[k + 1] * shape[k + 1];
    return st;
}

Axes GridSpec::axes() const {
    Axes ax(shape.size());
    for (int k = 0; k < dim(); ++k) {
        ax[k].resize(shape[k]);
        for (Index i = 0; i < shape[k]; ++i) ax[k][i] = coord(k, i);
    }
    return ax;
}

GridSpec GridSpec::cube(int dim, double lo, double hi, Index points) {
    return box(Vector::Constant(dim, lo), Vector::Constant(dim, hi), points);
}

GridSpec GridSpec::box(const Vector& lo, const Vector& hi, Index points) {
    if (lo.size() != hi.size() || lo.size() == 0) throw InputError("GridSpec::box: bad bounds");
    if (points < 2) throw InputError("GridSpec::box: need at least 2 points per axis");
    GridSpec g;
    g.origin = lo;
    g.spacing = (hi - lo) / static_cast<double>(points - 1);
    g.shape.assign(lo.size(), points);
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (shape.empty()) throw InputError("grid: dimension must be positive");
    if (origin.size() != dim() || spacing.size() != dim())
        throw InputError("grid: origin/spacing length does not match shape");
    for (int k = 0; k < dim(); ++k) {
        if (shape[k] < 1) throw InputError("grid: every axis needs at least one node");
        if (!(spacing[k] > 0) || !std::isfinite(spacing[k])) throw InputError("grid: spacing must be positive");
        if (!std::isfinite(origin[k])) throw InputError("grid: origin must be finite");
    }
}

bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.shape == b.shape && a.origin == b.origin && a.spacing == b.spacing;
}

std::vector<Index> axes_strides(const Axes& axes) {
    std::vector<Index> st(axes.size(), 1);
    for (int k = static_cast<int>(axes.size()) - 2; k >= 0; --k) st[k] = st[k + 1] * axes[k + 1].size();
    return st;
}

Index axes_size(const Axes& axes) {
    Index s = 1;
    for (const auto& a : axes) s *= a.size();
    return s;
}

void unravel(Index flat, const std::vector<Index>& shape, std::vector<Index>& out) {
    out.resize(shape.size());
    for (int k = static_cast<int>(shape.size()) - 1; k >= 0; --k) {
        out[k] = flat % shape[k];
        flat /= shape[k];
    }
}

namespace {

// Shared corner loop: cell[k] is the lower node index along axis k, frac[k]
// the fractional position inside the cell.
ExtReal corner_blend(const std::vector<Index>& cell, const std::vector<double>& frac,
                     const std::vector<Index>& strides, const Eigen::ArrayXd& values) {
    const int n = static_cast<int>(cell.size());
    double acc = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
        double w = 1.0;
        Index flat = 0;
        for (int k = 0; k < n; ++k) {
            const bool up = (mask >> k) & 1;
            w *= up ? frac[k] : 1.0 - frac[k];
            flat += (cell[k] + (up ? 1 : 0)) * strides[k];
        }
        if (w <= 0.0) continue;
        const double v = values[flat];
        if (std::isinf(v)) return ExtReal::inf();
        acc += w * v;
    }
    return ExtReal(acc);
}

}  // namespace

ExtReal interpolate(const Axes& axes, const Eigen::ArrayXd& values, const Eigen::Ref<const Vector>& x) {
    const int n = static_cast<int>(axes.size());
    if (x.size() != n) throw InputError("interpolate: dimension mismatch");
    std::vector<Index> cell(n);
    std::vector<double> frac(n);
    for (int k = 0; k < n; ++k) {
        const auto& a = axes[k];
        const Index m = a.size();
        if (!(x[k] >= a[0] && x[k] <= a[m - 1])) return ExtReal::inf();
        if (m == 1) {
            cell[k] = 0;
            frac[k] = 0.0;
            continue;
        }
        const double* begin = a.data();
        Index i = static_cast<Index>(std::upper_bound(begin, begin + m, x[k]) - begin) - 1;
        i = std::clamp<Index>(i, 0, m - 2);
        cell[k] = i;
        double t = (x[k] - a[i]) / (a[i + 1] - a[i]);
        if (t < 1e-9) t = 0.0;
        if (t > 1.0 - 1e-9) t = 1.0;
        frac[k] = t;
    }
    // Single-node axes contribute a stride but never an upper corner.
    std::vector<Index> strides = axes_strides(axes);
    return corner_blend(cell, frac, strides, values);
}

ExtReal interpolate(const GridSpec& spec, const Eigen::ArrayXd& values, const Eigen::Ref<const Vector>& x) {
    const int n = spec.dim();
    if (x.size() != n) throw InputError("interpolate: dimension mismatch");
    std::vector<Index> cell(n);
    std::vector<double> frac(n);
    for (int k = 0; k < n; ++k) {
        const Index m = spec.shape[k];
        double u = (x[k] - spec.origin[k]) / spec.spacing[k];
        // Snap node hits so rounding cannot pull in an infinite neighbor.
        if (std::abs(u - std::round(u)) < 1e-9) u = std::round(u);
        if (!(u >= 0.0 && u <= static_cast<double>(m - 1))) return ExtReal::inf();
        if (m == 1) {
            cell[k] = 0;
            frac[k] = 0.0;
            continue;
        }
        Index i = std::clamp<Index>(static_cast<Index>(std::floor(u)), 0, m - 2);
        cell[k] = i;
        frac[k] = u - static_cast<double>(i);
    }
    return corner_blend(cell, frac, spec.strides(), values);
}

Vector node_point(const GridSpec& spec, Index flat) {
    std::vector<Index> idx;
    unravel(flat, spec.shape, idx);
    Vector p(spec.dim());
    for (int k = 0; k < spec.dim(); ++k) p[k] = spec.coord(k, idx[k]);
    return p;
}

}  // namespace logconc
