#ifndef LOGCONC_GRID_HPP
#define LOGCONC_GRID_HPP

#include <Eigen/Core>

#include <vector>

#include "logconc/ext_real.hpp"

namespace logconc {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Per-axis sorted node coordinates of a tensor-product grid.
using Axes = std::vector<Eigen::VectorXd>;

/// Uniform tensor grid: node i along axis k sits at origin[k] + i * spacing[k].
/// Values are stored row-major (last axis fastest).
struct GridSpec {
    Vector origin;
    Vector spacing;
    std::vector<Index> shape;

    int dim() const { return static_cast<int>(shape.size()); }
    Index size() const;
    double coord(int axis, Index i) const { return origin[axis] + static_cast<double>(i) * spacing[axis]; }
    double upper(int axis) const { return coord(axis, shape[axis] - 1); }
    std::vector<Index> strides() const;
    Axes axes() const;

    /// Grid on [lo, hi]^dim with `points` nodes per axis.
    static GridSpec cube(int dim, double lo, double hi, Index points);
    /// Grid on the box prod [lo_k, hi_k] with `points` nodes per axis.
    static GridSpec box(const Vector& lo, const Vector& hi, Index points);

    void validate() const;
    friend bool operator==(const GridSpec& a, const GridSpec& b);
};

std::vector<Index> axes_strides(const Axes& axes);
Index axes_size(const Axes& axes);

/// Unflattens a row-major index.
void unravel(Index flat, const std::vector<Index>& shape, std::vector<Index>& out);

/// Multilinear interpolation on a rectilinear grid. Only neighbors with
/// positive weight are consulted; if any of them is +inf the result is +inf.
/// Points outside the bounding box evaluate to +inf.
ExtReal interpolate(const Axes& axes, const Eigen::ArrayXd& values, const Eigen::Ref<const Vector>& x);

/// Uniform-grid overload (avoids the binary searches).
ExtReal interpolate(const GridSpec& spec, const Eigen::ArrayXd& values, const Eigen::Ref<const Vector>& x);

/// Coordinates of node `flat` of a uniform grid.
Vector node_point(const GridSpec& spec, Index flat);

}  // namespace logconc

#endif
