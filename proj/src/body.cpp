#include "logconc/body.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace logconc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int shape_dim(const ConvexBody::Shape& s) {
    return std::visit(overloaded{
                          [](const Ball& b) { return static_cast<int>(b.center.size()); },
                          [](const Box& b) { return static_cast<int>(b.lo.size()); },
                          [](const Polytope& p) { return static_cast<int>(p.vertices.rows()); },
                          [](const Segment& s) { return static_cast<int>(s.a.size()); },
                      },
                      s);
}

}  // namespace

ConvexBody::ConvexBody(Shape shape) : shape_(std::move(shape)), dim_(shape_dim(shape_)) {
    if (dim_ <= 0) throw InputError("ConvexBody: dimension must be positive");
    std::visit(overloaded{
                   [](const Ball& b) {
                       if (!(b.radius >= 0) || !std::isfinite(b.radius)) throw InputError("ball: radius must be >= 0");
                   },
                   [](const Box& b) {
                       if (b.hi.size() != b.lo.size()) throw InputError("box: lo/hi length mismatch");
                       if ((b.hi.array() < b.lo.array()).any()) throw InputError("box: empty (hi < lo)");
                   },
                   [](const Polytope& p) {
                       if (p.vertices.cols() == 0) throw InputError("polytope: empty vertex list");
                       if (!p.vertices.allFinite()) throw InputError("polytope: non-finite vertex");
                   },
                   [](const Segment& s) {
                       if (s.a.size() != s.b.size()) throw InputError("segment: endpoint length mismatch");
                   },
               },
               shape_);
}

ConvexBody ConvexBody::ball(int dim, double radius) { return ConvexBody(Ball{radius, Vector::Zero(dim)}); }
ConvexBody ConvexBody::ball(double radius, Vector center) { return ConvexBody(Ball{radius, std::move(center)}); }
ConvexBody ConvexBody::box(Vector lo, Vector hi) { return ConvexBody(Box{std::move(lo), std::move(hi)}); }
ConvexBody ConvexBody::cube(int dim, double half_width) {
    return box(Vector::Constant(dim, -half_width), Vector::Constant(dim, half_width));
}
ConvexBody ConvexBody::polytope(Matrix vertices) { return ConvexBody(Polytope{std::move(vertices)}); }
ConvexBody ConvexBody::segment(Vector a, Vector b) { return ConvexBody(Segment{std::move(a), std::move(b)}); }

std::string ConvexBody::kind() const {
    return std::visit(overloaded{
                          [](const Ball&) { return std::string("ball"); },
                          [](const Box&) { return std::string("box"); },
                          [](const Polytope&) { return std::string("polytope"); },
                          [](const Segment&) { return std::string("segment"); },
                      },
                      shape_);
}

double ConvexBody::support(const Eigen::Ref<const Vector>& x) const {
    if (x.size() != dim_) throw InputError("support: dimension mismatch");
    return std::visit(overloaded{
                          [&](const Ball& b) { return b.radius * x.norm() + x.dot(b.center); },
                          [&](const Box& b) {
                              return (x.array() * b.lo.array()).max(x.array() * b.hi.array()).sum();
                          },
                          [&](const Polytope& p) { return (p.vertices.transpose() * x).maxCoeff(); },
                          [&](const Segment& s) { return std::max(x.dot(s.a), x.dot(s.b)); },
                      },
                      shape_);
}

double ConvexBody::distance(const Eigen::Ref<const Vector>& x) const {
    if (x.size() != dim_) throw InputError("distance: dimension mismatch");
    return std::visit(overloaded{
                          [&](const Ball& b) { return std::max(0.0, (x - b.center).norm() - b.radius); },
                          [&](const Box& b) {
                              const Vector clamped = x.cwiseMax(b.lo).cwiseMin(b.hi);
                              return (x - clamped).norm();
                          },
                          [&](const Polytope& p) {
                              const Matrix shifted = p.vertices.colwise() - x;
                              return min_norm_point(shifted).norm();
                          },
                          [&](const Segment& s) {
                              const Vector d = s.b - s.a;
                              const double len2 = d.squaredNorm();
                              const double t = len2 > 0 ? std::clamp((x - s.a).dot(d) / len2, 0.0, 1.0) : 0.0;
                              return (x - s.a - t * d).norm();
                          },
                      },
                      shape_);
}

std::optional<double> ConvexBody::volume() const {
    return std::visit(overloaded{
                          [&](const Ball& b) -> std::optional<double> {
                              return unit_ball_volume(dim_) * std::pow(b.radius, dim_);
                          },
                          [&](const Box& b) -> std::optional<double> { return (b.hi - b.lo).prod(); },
                          [&](const Polytope& p) -> std::optional<double> {
                              if (dim_ == 1) return p.vertices.maxCoeff() - p.vertices.minCoeff();
                              if (dim_ != 2) return std::nullopt;
                              const Matrix h = convex_hull_2d(p.vertices);
                              double area = 0.0;
                              for (Index i = 0; i < h.cols(); ++i) {
                                  const Index j = (i + 1) % h.cols();
                                  area += h(0, i) * h(1, j) - h(0, j) * h(1, i);
                              }
                              return 0.5 * std::abs(area);
                          },
                          [&](const Segment& s) -> std::optional<double> {
                              return dim_ == 1 ? std::abs(s.b[0] - s.a[0]) : 0.0;
                          },
                      },
                      shape_);
}

double ConvexBody::diameter() const {
    return std::visit(overloaded{
                          [](const Ball& b) { return 2.0 * b.radius; },
                          [](const Box& b) { return (b.hi - b.lo).norm(); },
                          [](const Polytope& p) {
                              double d = 0.0;
                              for (Index i = 0; i < p.vertices.cols(); ++i)
                                  for (Index j = i + 1; j < p.vertices.cols(); ++j)
                                      d = std::max(d, (p.vertices.col(i) - p.vertices.col(j)).norm());
                              return d;
                          },
                          [](const Segment& s) { return (s.b - s.a).norm(); },
                      },
                      shape_);
}

void ConvexBody::bounding_box(Vector& lo, Vector& hi) const {
    std::visit(overloaded{
                   [&](const Ball& b) {
                       lo = b.center.array() - b.radius;
                       hi = b.center.array() + b.radius;
                   },
                   [&](const Box& b) {
                       lo = b.lo;
                       hi = b.hi;
                   },
                   [&](const Polytope& p) {
                       lo = p.vertices.rowwise().minCoeff();
                       hi = p.vertices.rowwise().maxCoeff();
                   },
                   [&](const Segment& s) {
                       lo = s.a.cwiseMin(s.b);
                       hi = s.a.cwiseMax(s.b);
                   },
               },
               shape_);
}

double ConvexBody::max_norm() const {
    return std::visit(overloaded{
                          [](const Ball& b) { return b.center.norm() + b.radius; },
                          [](const Box& b) { return b.lo.cwiseAbs().cwiseMax(b.hi.cwiseAbs()).norm(); },
                          [](const Polytope& p) { return p.vertices.colwise().norm().maxCoeff(); },
                          [](const Segment& s) { return std::max(s.a.norm(), s.b.norm()); },
                      },
                      shape_);
}

ConvexBody ConvexBody::translated(const Vector& a) const {
    if (a.size() != dim_) throw InputError("translated: dimension mismatch");
    return std::visit(overloaded{
                          [&](const Ball& b) { return ConvexBody::ball(b.radius, b.center + a); },
                          [&](const Box& b) { return ConvexBody::box(b.lo + a, b.hi + a); },
                          [&](const Polytope& p) { return ConvexBody::polytope(p.vertices.colwise() + a); },
                          [&](const Segment& s) { return ConvexBody::segment(s.a + a, s.b + a); },
                      },
                      shape_);
}

ConvexBody ConvexBody::scaled(double lambda) const {
    if (!(lambda > 0)) throw InputError("scaled: lambda must be positive");
    return std::visit(overloaded{
                          [&](const Ball& b) { return ConvexBody::ball(lambda * b.radius, lambda * b.center); },
                          [&](const Box& b) { return ConvexBody::box(lambda * b.lo, lambda * b.hi); },
                          [&](const Polytope& p) { return ConvexBody::polytope(lambda * p.vertices); },
                          [&](const Segment& s) { return ConvexBody::segment(lambda * s.a, lambda * s.b); },
                      },
                      shape_);
}

ConvexBody ConvexBody::rotated(const Matrix& u) const {
    if (u.rows() != dim_ || u.cols() != dim_) throw InputError("rotated: dimension mismatch");
    return std::visit(overloaded{
                          [&](const Ball& b) { return ConvexBody::ball(b.radius, u * b.center); },
                          [&](const Box& b) {
                              const int n = dim_;
                              Matrix v(n, Index(1) << n);
                              for (Index m = 0; m < v.cols(); ++m)
                                  for (int k = 0; k < n; ++k) v(k, m) = ((m >> k) & 1) ? b.hi[k] : b.lo[k];
                              return ConvexBody::polytope(u * v);
                          },
                          [&](const Polytope& p) { return ConvexBody::polytope(u * p.vertices); },
                          [&](const Segment& s) { return ConvexBody::segment(u * s.a, u * s.b); },
                      },
                      shape_);
}

double log_unit_ball_volume(int n) {
    return 0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0);
}

double unit_ball_volume(int n) { return std::exp(log_unit_ball_volume(n)); }

Vector min_norm_point(const Matrix& P, double tol) {
    const Index m = P.cols();
    if (m == 0) throw InputError("min_norm_point: no points");
    const Eigen::VectorXd norms = P.colwise().squaredNorm();
    const double scale = std::max(norms.maxCoeff(), 1e-300);
    Index j0;
    norms.minCoeff(&j0);
    std::vector<Index> S{j0};
    Eigen::VectorXd lambda = Eigen::VectorXd::Ones(1);
    Vector x = P.col(j0);
    for (int major = 0; major < 10 * static_cast<int>(m) + 50; ++major) {
        const Eigen::VectorXd dots = P.transpose() * x;
        Index j;
        const double best = dots.minCoeff(&j);
        if (best >= x.squaredNorm() - tol * scale) break;
        if (std::find(S.begin(), S.end(), j) != S.end()) break;
        S.push_back(j);
        lambda.conservativeResize(static_cast<Index>(S.size()));
        lambda[lambda.size() - 1] = 0.0;
        for (int minor = 0; minor < 10 * static_cast<int>(m) + 50; ++minor) {
            const Index k = static_cast<Index>(S.size());
            Matrix PS(P.rows(), k);
            for (Index i = 0; i < k; ++i) PS.col(i) = P.col(S[i]);
            Matrix A = Matrix::Zero(k + 1, k + 1);
            A.topLeftCorner(k, k) = PS.transpose() * PS;
            A.block(0, k, k, 1).setOnes();
            A.block(k, 0, 1, k).setOnes();
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
            rhs[k] = 1.0;
            const Eigen::VectorXd sol = A.completeOrthogonalDecomposition().solve(rhs);
            const Eigen::VectorXd alpha = sol.head(k);
            if ((alpha.array() > 1e-14).all()) {
                lambda = alpha;
                break;
            }
            double theta = 1.0;
            for (Index i = 0; i < k; ++i)
                if (alpha[i] <= 1e-14) theta = std::min(theta, lambda[i] / (lambda[i] - alpha[i]));
            lambda = (1.0 - theta) * lambda + theta * alpha;
            std::vector<Index> keepS;
            std::vector<double> keepL;
            for (Index i = 0; i < k; ++i)
                if (lambda[i] > 1e-14) {
                    keepS.push_back(S[i]);
                    keepL.push_back(lambda[i]);
                }
            if (keepS.empty()) {
                keepS.push_back(S.back());
                keepL.push_back(1.0);
            }
            S = keepS;
            lambda = Eigen::Map<Eigen::VectorXd>(keepL.data(), static_cast<Index>(keepL.size()));
            lambda /= lambda.sum();
        }
        x.setZero();
        for (std::size_t i = 0; i < S.size(); ++i) x += lambda[static_cast<Index>(i)] * P.col(S[i]);
    }
    return x;
}

Matrix convex_hull_2d(const Matrix& points) {
    if (points.rows() != 2) throw InputError("convex_hull_2d: points must be 2 x m");
    std::vector<Index> idx(static_cast<std::size_t>(points.cols()));
    for (Index i = 0; i < points.cols(); ++i) idx[static_cast<std::size_t>(i)] = i;
    std::sort(idx.begin(), idx.end(), [&](Index a, Index b) {
        return points(0, a) < points(0, b) || (points(0, a) == points(0, b) && points(1, a) < points(1, b));
    });
    auto cross = [&](Index o, Index a, Index b) {
        return (points(0, a) - points(0, o)) * (points(1, b) - points(1, o)) -
               (points(1, a) - points(1, o)) * (points(0, b) - points(0, o));
    };
    std::vector<Index> hull(2 * idx.size());
    std::size_t k = 0;
    for (Index i : idx) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], i) <= 0) --k;
        hull[k++] = i;
    }
    for (std::size_t t = idx.size() - 1, lo = k + 1; t-- > 0;) {
        const Index i = idx[t];
        while (k >= lo && cross(hull[k - 2], hull[k - 1], i) <= 0) --k;
        hull[k++] = i;
    }
    if (k > 1) --k;
    Matrix out(2, static_cast<Index>(k));
    for (std::size_t i = 0; i < k; ++i) out.col(static_cast<Index>(i)) = points.col(hull[i]);
    return out;
}

}  // namespace logconc
