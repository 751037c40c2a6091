#ifndef LOGCONC_BODY_HPP
#define LOGCONC_BODY_HPP

#include <Eigen/Core>

#include <optional>
#include <string>
#include <variant>

#include "logconc/ext_real.hpp"
#include "logconc/grid.hpp"

namespace logconc {

struct Ball {
    double radius = 1.0;
    Vector center;
};

struct Box {
    Vector lo;
    Vector hi;
};

/// Convex hull of the columns of `vertices` (dim x count).
struct Polytope {
    Matrix vertices;
};

struct Segment {
    Vector a;
    Vector b;
};

/// Nonempty compact convex body with an exact support function.
class ConvexBody {
public:
    using Shape = std::variant<Ball, Box, Polytope, Segment>;

    explicit ConvexBody(Shape shape);

    static ConvexBody ball(int dim, double radius = 1.0);
    static ConvexBody ball(double radius, Vector center);
    static ConvexBody box(Vector lo, Vector hi);
    static ConvexBody cube(int dim, double half_width);
    static ConvexBody polytope(Matrix vertices);
    static ConvexBody segment(Vector a, Vector b);
    static ConvexBody point(Vector p) { return segment(p, p); }

    int dim() const { return dim_; }
    const Shape& shape() const { return shape_; }
    std::string kind() const;

    /// h_K(x) = sup_{y in K} <x, y>.
    double support(const Eigen::Ref<const Vector>& x) const;
    /// Euclidean distance from x to K (0 inside).
    double distance(const Eigen::Ref<const Vector>& x) const;
    bool contains(const Eigen::Ref<const Vector>& x, double tol = 1e-12) const { return distance(x) <= tol; }

    /// Exact volume where a closed form exists (ball, box, segment, planar
    /// polygon, 1-D polytope); nullopt otherwise.
    std::optional<double> volume() const;
    /// Largest distance between two points of K.
    double diameter() const;
    /// Axis-aligned bounding box.
    void bounding_box(Vector& lo, Vector& hi) const;
    /// Largest |y| over y in K.
    double max_norm() const;

    ConvexBody translated(const Vector& a) const;
    /// lambda K for lambda > 0.
    ConvexBody scaled(double lambda) const;
    /// u K for an orthogonal u (boxes become polytopes unless u is a signed
    /// permutation; we always return a polytope for non-identity maps).
    ConvexBody rotated(const Matrix& u) const;

private:
    Shape shape_;
    int dim_ = 0;
};

/// Volume of the Euclidean unit ball in R^n.
double unit_ball_volume(int n);
double log_unit_ball_volume(int n);

/// Minimum-norm point of conv(columns of P) (Wolfe's algorithm).
Vector min_norm_point(const Matrix& points, double tol = 1e-12);

/// Vertices of the 2-D convex hull in counter-clockwise order.
Matrix convex_hull_2d(const Matrix& points);

}  // namespace logconc

#endif
