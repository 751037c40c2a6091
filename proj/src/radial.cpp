#include "logconc/radial.hpp"

#include <algorithm>
#include <cmath>

namespace logconc {

namespace {

// Roots of p(r) = level strictly inside (lo, hi).
std::vector<double> crossings(const RadialPiece& p, double level, double lo, double hi) {
    std::vector<double> out;
    const double a = p.a - level;
    auto keep = [&](double r) {
        if (r > lo && r < hi && std::isfinite(r)) out.push_back(r);
    };
    if (p.c == 0.0) {
        if (p.b != 0.0) keep(-a / p.b);
    } else {
        const double disc = p.b * p.b - 4.0 * p.c * a;
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            // Citardauq form for the root that would cancel.
            const double q = -0.5 * (p.b + std::copysign(s, p.b));
            if (q != 0.0) {
                keep(q / p.c);
                keep(a / q);
            } else {
                keep(0.0);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

RadialProfile::RadialProfile(std::vector<double> knots, std::vector<RadialPiece> pieces)
    : knots_(std::move(knots)), pieces_(std::move(pieces)) {
    if (pieces_.empty() || knots_.size() != pieces_.size() + 1)
        throw InputError("RadialProfile: need m pieces and m+1 knots");
    if (knots_.front() != 0.0) throw InputError("RadialProfile: first knot must be 0");
    const bool degenerate = pieces_.size() == 1 && knots_[1] == 0.0;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        if (!(knots_[i + 1] > knots_[i]) && !degenerate)
            throw InputError("RadialProfile: knots must be strictly increasing");
        if (std::isinf(knots_[i])) throw InputError("RadialProfile: only the last knot may be infinite");
    }
    for (const auto& p : pieces_)
        if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c))
            throw InputError("RadialProfile: non-finite coefficient");
}

RadialProfile RadialProfile::quadratic(double variance, double offset) {
    if (!(variance > 0)) throw InputError("quadratic profile: variance must be positive");
    return RadialProfile({0.0, kInf}, {{offset, 0.0, 0.5 / variance}});
}

RadialProfile RadialProfile::cone(double alpha, double offset) {
    return RadialProfile({0.0, kInf}, {{offset, alpha, 0.0}});
}

RadialProfile RadialProfile::ball(double radius, double offset) {
    if (!(radius >= 0) || std::isinf(radius)) throw InputError("ball profile: radius must be finite and >= 0");
    return RadialProfile({0.0, radius}, {{offset, 0.0, 0.0}});
}

RadialProfile RadialProfile::from_samples(const std::vector<double>& radii, const std::vector<double>& values) {
    if (radii.size() != values.size() || radii.size() < 2) throw InputError("radial samples: need >= 2 matched nodes");
    if (radii.front() != 0.0) throw InputError("radial samples: first radius must be 0");
    std::vector<double> knots{0.0};
    std::vector<RadialPiece> pieces;
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
        if (std::isinf(values[i + 1])) break;
        if (std::isinf(values[i])) throw InputError("radial samples: +inf must only appear as a tail");
        const double h = radii[i + 1] - radii[i];
        if (!(h > 0)) throw InputError("radial samples: radii must increase");
        const double slope = (values[i + 1] - values[i]) / h;
        pieces.push_back({values[i] - slope * radii[i], slope, 0.0});
        knots.push_back(radii[i + 1]);
    }
    if (pieces.empty()) {
        if (std::isinf(values[0])) throw InputError("radial samples: identically +inf");
        return RadialProfile({0.0, 0.0}, {{values[0], 0.0, 0.0}});
    }
    return RadialProfile(std::move(knots), std::move(pieces));
}

ExtReal RadialProfile::operator()(double r) const {
    if (r < 0) r = -r;
    if (r > knots_.back()) return ExtReal::inf();
    auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
    std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    i = std::min(i == 0 ? 0 : i - 1, pieces_.size() - 1);
    return ExtReal(pieces_[i](r));
}

double RadialProfile::min_value() const {
    return flattened().pieces_.front().a;
}

RadialProfile RadialProfile::flattened() const {
    double r_min = -1.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        const double lo = knots_[i], hi = knots_[i + 1];
        if (p.slope(lo) >= 0.0) {
            r_min = lo;
            break;
        }
        if (p.c > 0.0) {
            const double r = -p.b / (2.0 * p.c);
            if (r < hi) {
                r_min = r;
                break;
            }
        }
    }
    if (r_min < 0.0) {
        if (!bounded_domain())
            throw InputError("radial potential is unbounded below; its support function is +inf everywhere");
        r_min = knots_.back();
    }
    if (r_min == 0.0) return *this;
    const double v = (*this)(r_min).raw();
    std::vector<double> knots{0.0, r_min};
    std::vector<RadialPiece> pieces{{v, 0.0, 0.0}};
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (knots_[i + 1] <= r_min) continue;
        pieces.push_back(pieces_[i]);
        knots.push_back(knots_[i + 1]);
    }
    return RadialProfile(std::move(knots), std::move(pieces));
}

RadialProfile RadialProfile::conjugate() const {
    const RadialProfile p = flattened();
    std::vector<double> kn{0.0};
    std::vector<RadialPiece> pc;
    auto emit = [&](double rho_hi, RadialPiece q) {
        if (rho_hi > kn.back()) {
            pc.push_back(q);
            kn.push_back(rho_hi);
        }
    };
    const auto& K = p.knots_;
    const auto& P = p.pieces_;
    for (std::size_t i = 0; i < P.size(); ++i) {
        const RadialPiece& q = P[i];
        const double r = K[i];
        // Kink at r: every slope in [previous slope, right slope] is
        // supported by the single point r.
        emit(q.slope(r), {-q(r), r, 0.0});
        if (q.c > 0.0) {
            const double hi = std::isinf(K[i + 1]) ? kInf : q.slope(K[i + 1]);
            emit(hi, {q.b * q.b / (4.0 * q.c) - q.a, -q.b / (2.0 * q.c), 0.25 / q.c});
        }
    }
    if (p.bounded_domain()) {
        const double R = K.back();
        emit(kInf, {-P.back()(R), R, 0.0});
    }
    if (pc.empty()) {
        // psi is constant on [0, inf): conjugate finite only at rho = 0.
        return RadialProfile({0.0, 0.0}, {{-P.front().a, 0.0, 0.0}});
    }
    return RadialProfile(std::move(kn), std::move(pc));
}

RadialProfile RadialProfile::operator+(const RadialProfile& other) const {
    const double end = std::min(knots_.back(), other.knots_.back());
    if (end == 0.0) {
        return RadialProfile({0.0, 0.0}, {{pieces_.front().a + other.pieces_.front().a, 0.0, 0.0}});
    }
    std::vector<double> kn;
    for (double k : knots_)
        if (k < end) kn.push_back(k);
    for (double k : other.knots_)
        if (k < end) kn.push_back(k);
    kn.push_back(end);
    std::sort(kn.begin(), kn.end());
    kn.erase(std::unique(kn.begin(), kn.end()), kn.end());
    auto piece_at = [](const RadialProfile& p, double lo, double hi) {
        const double mid = std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi);
        auto it = std::upper_bound(p.knots_.begin(), p.knots_.end(), mid);
        return p.pieces_[static_cast<std::size_t>(it - p.knots_.begin()) - 1];
    };
    std::vector<RadialPiece> pc;
    for (std::size_t i = 0; i + 1 < kn.size(); ++i) {
        const auto u = piece_at(*this, kn[i], kn[i + 1]);
        const auto v = piece_at(other, kn[i], kn[i + 1]);
        pc.push_back({u.a + v.a, u.b + v.b, u.c + v.c});
    }
    return RadialProfile(std::move(kn), std::move(pc));
}

RadialProfile RadialProfile::shifted(double delta) const {
    RadialProfile out = *this;
    for (auto& p : out.pieces_) p.a += delta;
    return out;
}

RadialProfile RadialProfile::plus_quadratic(double eps) const {
    RadialProfile out = *this;
    for (auto& p : out.pieces_) p.c += 0.5 * eps;
    return out;
}

RadialProfile RadialProfile::homothety(double lambda) const {
    if (!(lambda > 0)) throw InputError("homothety: lambda must be positive");
    RadialProfile out = *this;
    for (auto& k : out.knots_) k *= lambda;
    for (auto& p : out.pieces_) {
        p.a *= lambda;
        p.c /= lambda;
    }
    return out;
}

RadialProfile RadialProfile::max_with(double level) const {
    std::vector<double> kn{0.0};
    std::vector<RadialPiece> pc;
    const RadialPiece flat{level, 0.0, 0.0};
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const double lo = knots_[i], hi = knots_[i + 1];
        std::vector<double> cuts = crossings(pieces_[i], level, lo, hi);
        cuts.push_back(hi);
        double a = lo;
        for (double b : cuts) {
            const double mid = std::isinf(b) ? a + 1.0 : 0.5 * (a + b);
            const RadialPiece& use = pieces_[i](mid) < level ? flat : pieces_[i];
            if (b > a || (lo == hi)) {
                pc.push_back(use);
                kn.push_back(b);
            }
            a = b;
        }
    }
    return RadialProfile(std::move(kn), std::move(pc));
}

RadialProfile RadialProfile::restricted(double radius) const {
    if (!(radius >= 0)) throw InputError("restricted: radius must be >= 0");
    if (radius >= knots_.back()) return *this;
    if (radius == 0.0) return RadialProfile({0.0, 0.0}, {{pieces_.front().a, 0.0, 0.0}});
    std::vector<double> kn{0.0};
    std::vector<RadialPiece> pc;
    for (std::size_t i = 0; i < pieces_.size() && knots_[i] < radius; ++i) {
        pc.push_back(pieces_[i]);
        kn.push_back(std::min(knots_[i + 1], radius));
    }
    return RadialProfile(std::move(kn), std::move(pc));
}

std::optional<double> RadialProfile::level_radius(double t) const {
    if (pieces_.front().a > t) return std::nullopt;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const RadialPiece& p = pieces_[i];
        const double hi = knots_[i + 1];
        const bool last = i + 1 == pieces_.size();
        const double at_hi = std::isinf(hi) ? (p.c > 0 || p.b > 0 ? kInf : p.a) : p(hi);
        if (at_hi <= t) {
            if (last) return hi;
            continue;
        }
        // Unique crossing of a nondecreasing piece: solve a + b r + c r^2 = t.
        const double d = t - p.a;
        double r;
        if (p.c == 0.0) {
            r = d / p.b;
        } else {
            r = 2.0 * d / (p.b + std::sqrt(p.b * p.b + 4.0 * p.c * d));
        }
        return std::clamp(r, knots_[i], hi);
    }
    return knots_.back();
}

int RadialProfile::convexity_witness(double tol) const {
    double scale = 1.0;
    for (const auto& p : pieces_) scale = std::max({scale, std::abs(p.a), std::abs(p.b), std::abs(p.c)});
    const double eps = tol * scale;
    for (std::size_t i = 0; i < pieces_.size(); ++i)
        if (pieces_[i].c < -eps) return static_cast<int>(i);
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
        const double r = knots_[i];
        const auto& L = pieces_[i - 1];
        const auto& R = pieces_[i];
        const double s = std::max(1.0, r * r);
        if (std::abs(L(r) - R(r)) > eps * s) return static_cast<int>(i);
        if (L.slope(r) > R.slope(r) + eps * std::max(1.0, r)) return static_cast<int>(i);
    }
    return -1;
}

}  // namespace logconc
