#include "logconc/lowmstar.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "logconc/calculus.hpp"

namespace logconc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string vec_str(const Vector& x) {
    std::string s = "(";
    for (Index i = 0; i < x.size(); ++i) s += (i ? ", " : "") + to_string(ExtReal(x[i]));
    return s + ")";
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Largest value of a + b r + c r^2 over [lo, hi] (hi may be +inf with c <= 0, b <= 0).
double piece_max(double a, double b, double c, double lo, double hi, double& at) {
    auto v = [&](double r) { return a + r * (b + c * r); };
    at = lo;
    double best = v(lo);
    auto consider = [&](double r) {
        if (r >= lo && r <= hi && v(r) > best) {
            best = v(r);
            at = r;
        }
    };
    if (std::isfinite(hi)) consider(hi);
    if (c < 0) consider(-b / (2.0 * c));
    if (!std::isfinite(hi) && (c > 0 || (c == 0 && b > 0))) {
        at = kInf;
        return kInf;
    }
    return best;
}

Vector along_e1(int n, double r) {
    Vector x = Vector::Zero(n);
    x[0] = r;
    return x;
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t i = static_cast<std::size_t>(std::floor(pos));
    const std::size_t j = std::min(i + 1, v.size() - 1);
    return v[i] + (pos - static_cast<double>(i)) * (v[j] - v[i]);
}

// Subspaces are materialized for radial f only while n k stays small; the
// per-sample value depends on |x| alone.
constexpr double kImplicitThreshold = 2e4;

}  // namespace

bool LevelSet::contains(const Eigen::Ref<const Vector>& x) const {
    if (empty) return false;
    if (radius) return (x - center).norm() <= *radius;
    if (body) return body->contains(x);
    if (spec) {
        // Nearest node.
        Index flat = 0;
        const auto strides = spec->strides();
        for (int k = 0; k < spec->dim(); ++k) {
            const double t = (x[k] - spec->origin[k]) / spec->spacing[k];
            const Index i = static_cast<Index>(std::llround(t));
            if (i < 0 || i >= spec->shape[k]) return false;
            flat += i * strides[k];
        }
        return mask[flat];
    }
    return false;
}

std::optional<RadialProfile> radial_form(const Potential& phi) {
    return std::visit(
        overloaded{[](const Quadratic& q) -> std::optional<RadialProfile> {
                       if (q.center.size() && q.center.norm() > 0) return std::nullopt;
                       return RadialProfile::quadratic(q.variance, q.offset);
                   },
                   [](const IndicatorBody& ib) -> std::optional<RadialProfile> {
                       const auto* b = std::get_if<Ball>(&ib.body.shape());
                       if (!b || (b->center.size() && b->center.norm() > 0)) return std::nullopt;
                       return RadialProfile::ball(b->radius, ib.offset);
                   },
                   [](const RadialPotential& r) -> std::optional<RadialProfile> {
                       if (r.shift.size() && r.shift.norm() > 0) return std::nullopt;
                       return r.profile;
                   },
                   [](const GridPotential&) -> std::optional<RadialProfile> { return std::nullopt; }},
        phi.repr());
}

LevelSet level_set(const LogConcaveFn& f, double beta) {
    if (!(beta > 0)) throw InputError("level_set: beta must be positive");
    const int n = f.dim();
    const double t = beta * n;
    LevelSet ls;
    ls.beta = beta;
    ls.dim = n;
    ls.center = Vector::Zero(n);
    const Potential& phi = f.phi();
    if (const auto* q = std::get_if<Quadratic>(&phi.repr())) {
        if (q->offset > t) {
            ls.empty = true;
            return ls;
        }
        ls.radius = std::sqrt(2.0 * q->variance * (t - q->offset));
        if (q->center.size()) ls.center = q->center;
        return ls;
    }
    if (const auto* ib = std::get_if<IndicatorBody>(&phi.repr())) {
        if (ib->offset > t) {
            ls.empty = true;
        } else {
            ls.body = ib->body;
            if (const auto* b = std::get_if<Ball>(&ib->body.shape())) {
                ls.radius = b->radius;
                if (b->center.size()) ls.center = b->center;
            }
        }
        return ls;
    }
    if (const auto* rp = std::get_if<RadialPotential>(&phi.repr())) {
        const auto r = rp->profile.flattened().level_radius(t);
        if (!r) {
            ls.empty = true;
            return ls;
        }
        ls.radius = *r;
        if (rp->shift.size()) ls.center = rp->shift;
        return ls;
    }
    const GridPotential& g = phi.as_grid();
    ls.spec = g.spec;
    ls.mask = g.values <= t;
    ls.empty = !ls.mask.any();
    return ls;
}

std::optional<Vector> gaussian_domination_witness(const LogConcaveFn& f, double tol) {
    const int n = f.dim();
    const Potential& phi = f.phi();
    if (const auto* q = std::get_if<Quadratic>(&phi.repr())) {
        // g(x) = |x - a|^2 / (2s) + c - |x|^2 / 2 must stay <= 0.
        const Vector a = q->center.size() ? q->center : Vector::Zero(n);
        const double s = q->variance;
        if (s < 1.0) return along_e1(n, std::max(1.0, 2.0 * a.norm() + 2.0 * std::sqrt(std::max(0.0, q->offset)) + 10.0) /
                                            std::sqrt(1.0 - s));
        if (s == 1.0) {
            if (a.norm() > 0) return Vector(-1e6 * a / a.norm());
            if (q->offset > tol) return Vector(Vector::Zero(n));
            return std::nullopt;
        }
        const Vector x = a / (1.0 - s);
        const double g = (x - a).squaredNorm() / (2.0 * s) + q->offset - 0.5 * x.squaredNorm();
        if (g > tol) return x;
        return std::nullopt;
    }
    if (const auto psi = radial_form(phi)) {
        const auto& knots = psi->knots();
        const auto& pieces = psi->pieces();
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            double at;
            const double m = piece_max(pieces[i].a, pieces[i].b, pieces[i].c - 0.5, knots[i], knots[i + 1], at);
            if (m > tol * std::max(1.0, at * at)) return along_e1(n, std::isfinite(at) ? at : knots[i] + 1e6);
        }
        if (psi->bounded_domain()) return along_e1(n, psi->domain_end() + 1.0);
        return std::nullopt;
    }
    if (phi.is_grid()) {
        const GridPotential& g = phi.as_grid();
        for (Index i = 0; i < g.values.size(); ++i) {
            const Vector x = node_point(g.spec, i);
            if (g.values[i] > 0.5 * x.squaredNorm() + tol * std::max(1.0, x.squaredNorm())) return x;
        }
        return std::nullopt;
    }
    // Compact support (indicators, shifted profiles): f vanishes far away.
    Vector x = Vector::Zero(n);
    x[0] = 1e6;
    return x;
}

VolumeRatioReport volume_ratio(const LogConcaveFn& f) {
    if (const auto w = gaussian_domination_witness(f))
        throw InputError("volume_ratio: f >= G fails at x = " + vec_str(*w));
    VolumeRatioReport r;
    r.log_int_f = log_integral(f);
    if (!std::isfinite(r.log_int_f)) throw InputError("volume_ratio: int f is not finite");
    const int n = f.dim();
    r.log_value = (r.log_int_f - log_integral_gaussian(n)) / n;
    r.value = std::exp(r.log_value);
    r.method = radial_form(f.phi()) ? "radial" : f.phi().kind();
    return r;
}

Subspace random_subspace(int n, int k, std::uint64_t seed) {
    if (n < 1 || k < 1 || k > n) throw InputError("random_subspace: need 1 <= k <= n");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Matrix g(n, k);
    for (Index j = 0; j < k; ++j)
        for (Index i = 0; i < n; ++i) g(i, j) = nd(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Subspace s;
    s.n = n;
    s.k = k;
    s.basis = qr.householderQ() * Matrix::Identity(n, k);
    const Matrix R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (Index j = 0; j < k; ++j)
        if (R(j, j) < 0) s.basis.col(j) *= -1.0;
    return s;
}

LogConcaveFn counterexample_potential(int n) {
    if (n < 1) throw InputError("counterexample_potential: n must be >= 1");
    const double sn = std::sqrt(static_cast<double>(n));
    RadialProfile psi({0.0, sn, 2.0 * sn, kInf},
                      {RadialPiece{0.0, 0.0, 0.0}, RadialPiece{-2.0 * n, 2.0 * sn, 0.0}, RadialPiece{0.0, 0.0, 0.5}});
    return LogConcaveFn(Potential::radial(std::move(psi), n));
}

double counterexample_constant(double eps) { return (eps + 2.0) * (eps + 2.0) / (8.0 * eps); }

std::vector<double> beta_net(double eps, double M) {
    if (!(eps > 0) || !(M > eps)) throw InputError("beta_net: need 0 < eps < M");
    std::vector<double> net{eps};
    while (net.back() < M) net.push_back(std::min(M, 2.0 * net.back()));
    return net;
}

int LowMstarConfig::subspace_dim() const {
    return std::clamp(static_cast<int>(std::ceil(lambda * n - 1e-12)), 1, n);
}

void LowMstarConfig::validate() const {
    if (!(eps > 0)) throw InputError("eps must be positive");
    if (!(M > eps)) throw InputError("M must exceed eps");
    if (!(lambda > 0 && lambda < 1)) throw InputError("lambda must lie in (0, 1)");
    if (n < 1) throw InputError("n must be >= 1");
    const double floor = std::log(std::log(M / eps));
    if (std::isfinite(floor) && n < floor) throw InputError("n must be >= log log(M / eps)");
    if (trials < 1) throw InputError("trials must be >= 1");
    if (samples < 1) throw InputError("samples must be >= 1");
    if (threads < 1) throw InputError("threads must be >= 1");
    for (double c : c_probe)
        if (!(c > 0)) throw InputError("c_probe entries must be positive");
}

namespace {

// Per-sample hook for low_mstar_experiment: (x, phi_h(x)).
using SampleHook = std::function<void(const Vector&, double, TrialResult&)>;

ExperimentReport run_experiment(const LogConcaveFn& f, const LowMstarConfig& cfg, const SampleHook& hook) {
    cfg.validate();
    const int n = f.dim();
    if (n != cfg.n) throw InputError("config n = " + std::to_string(cfg.n) + " does not match the function dimension " +
                                     std::to_string(n));
    ExperimentReport rep;
    rep.config = cfg;
    rep.k = cfg.subspace_dim();
    rep.volume_ratio = volume_ratio(f);
    rep.net = beta_net(cfg.eps, cfg.M);
    for (double c : cfg.c_probe)
        rep.probe_bounds.push_back(std::pow(c * rep.volume_ratio.value, 2.0 / (1.0 - cfg.lambda)));

    const auto psi = radial_form(f.phi());
    if (!psi && !f.phi().is_grid())
        throw InputError("finite_volume_ratio_experiment: f must be radial or a grid");
    if (!psi && n > 3) throw InputError("finite_volume_ratio_experiment: grid runs are limited to n <= 3");
    const double lo_level = cfg.eps * n, hi_level = cfg.M * n;

    std::optional<RadialProfile> flat;
    if (psi) {
        flat = psi->flattened();
        for (double b : rep.net) {
            const auto r = flat->level_radius(b * n);
            rep.level_sets.push_back({b, r ? *r : 0.0, r ? *r : 0.0});
        }
        const auto rhi = flat->level_radius(hi_level);
        if (!rhi) {
            rep.empty_shell = true;
        } else {
            const auto rlo = flat->level_radius(lo_level);
            rep.shell_lo = rlo ? *rlo : 0.0;
            rep.shell_hi = *rhi;
            if (!std::isfinite(rep.shell_hi)) throw InputError("finite_volume_ratio_experiment: unbounded shell");
            if (!(rep.shell_hi > rep.shell_lo)) rep.empty_shell = true;
        }
    } else {
        const GridPotential& g = f.phi().as_grid();
        for (double b : rep.net) {
            double inr = kInf, circ = 0.0;
            for (Index i = 0; i < g.values.size(); ++i) {
                const double r = node_point(g.spec, i).norm();
                if (g.values[i] <= b * n) circ = std::max(circ, r);
                else inr = std::min(inr, r);
            }
            rep.level_sets.push_back({b, std::isfinite(inr) ? inr : circ, circ});
        }
    }

    const int k = rep.k;
    const bool implicit = psi && static_cast<double>(n) * k > kImplicitThreshold;
    rep.trials.resize(cfg.trials);
    auto run_trial = [&](int trial) {
        TrialResult& tr = rep.trials[trial];
        tr.subspace_seed = splitmix64(cfg.seed ^ (0x51ed27d6a3b1c4f5ULL * static_cast<std::uint64_t>(trial + 1)));
        tr.implicit_subspace = implicit;
        if (rep.empty_shell) return;
        std::optional<Subspace> E;
        if (!implicit) {
            E = random_subspace(n, k, tr.subspace_seed);
            tr.basis_error = (E->basis.transpose() * E->basis - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
        }
        std::mt19937_64 dir_rng(tr.subspace_seed);
        std::normal_distribution<double> nd;
        Vector u(k);
        auto direction = [&] {
            do {
                for (int j = 0; j < k; ++j) u[j] = nd(dir_rng);
            } while (u.squaredNorm() == 0.0);
            return Vector(E->basis * (u / u.norm()));
        };
        if (psi) {
            // Radii come from a stream shared by every trial.
            std::mt19937_64 r_rng(cfg.seed);
            std::uniform_real_distribution<double> ur(rep.shell_lo, rep.shell_hi);
            for (Index s = 0; s < cfg.samples; ++s) {
                const double r = ur(r_rng);
                Vector x;
                double norm;
                if (implicit) {
                    x = along_e1(n, r);
                    norm = r;
                } else {
                    x = r * direction();
                    norm = x.norm();
                }
                const double v = (*psi)(norm).raw();
                if (v < lo_level || v > hi_level) continue;
                ++tr.shell_count;
                tr.max_c = std::max(tr.max_c, norm * norm / (2.0 * v));
                if (hook) hook(x, v, tr);
            }
            return;
        }
        const GridPotential& g = f.phi().as_grid();
        double R = 0.0;
        for (Index i = 0; i < g.values.size(); ++i) R = std::max(R, node_point(g.spec, i).norm());
        std::uniform_real_distribution<double> uc(-R, R);
        Vector w(k);
        const Index max_draws = 200 * cfg.samples;
        for (Index d = 0; d < max_draws && tr.shell_count < cfg.samples; ++d) {
            for (int j = 0; j < k; ++j) w[j] = uc(dir_rng);
            const Vector x = E->basis * w;
            const ExtReal v = f.phi()(x);
            if (v.is_inf() || v.raw() < lo_level || v.raw() > hi_level) continue;
            ++tr.shell_count;
            tr.max_c = std::max(tr.max_c, x.squaredNorm() / (2.0 * v.raw()));
            if (hook) hook(x, v.raw(), tr);
        }
    };
    const int threads = std::min(cfg.threads, cfg.trials);
    if (threads <= 1 || hook) {
        for (int t = 0; t < cfg.trials; ++t) run_trial(t);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&, w] {
                for (int t = w; t < cfg.trials; t += threads) run_trial(t);
            });
        for (auto& th : pool) th.join();
    }

    std::vector<double> cs;
    for (const auto& tr : rep.trials)
        if (tr.shell_count > 0) cs.push_back(tr.max_c);
    if (cs.empty()) {
        rep.empty_shell = true;
        rep.notes.push_back("empty shell: no sample satisfied exp(-eps n) >= f >= exp(-M n)");
    }
    rep.max_c = cs.empty() ? 0.0 : *std::max_element(cs.begin(), cs.end());
    rep.q05 = quantile(cs, 0.05);
    rep.q50 = quantile(cs, 0.5);
    rep.q95 = quantile(cs, 0.95);
    for (double b : rep.probe_bounds) {
        const auto ok = std::count_if(rep.trials.begin(), rep.trials.end(),
                                      [&](const TrialResult& tr) { return tr.max_c <= b; });
        rep.probe_pass.push_back(static_cast<double>(ok) / static_cast<double>(cfg.trials));
    }
    rep.pass_fraction = rep.probe_pass.empty() ? 0.0 : rep.probe_pass.front();
    if (implicit) rep.notes.push_back("radial f: subspaces left implicit, samples depend on |x| only");
    return rep;
}

}  // namespace

ExperimentReport finite_volume_ratio_experiment(const LogConcaveFn& f, const LowMstarConfig& cfg) {
    return run_experiment(f, cfg, nullptr);
}

LowMstarReport low_mstar_experiment(const LogConcaveFn& f, const LowMstarConfig& cfg) {
    const int n = f.dim();
    const ExtReal at0 = f.phi()(Vector::Zero(n));
    if (at0.is_inf() || std::abs(at0.raw()) > 1e-12)
        throw InputError("low_mstar_experiment: f(0) = 1 fails, phi(0) = " + to_string(at0));
    LowMstarReport rep;
    const EstimateReport mf = mean_width(f);
    if (mf.value.is_inf() || mf.value.raw() > 1.0 + 1e-9)
        throw InputError("low_mstar_experiment: M*(f) <= 1 fails, M*(f) = " + to_string(mf.value));
    rep.m_star_f = mf.value.raw();
    const LogConcaveFn h = asplund(f, LogConcaveFn::gaussian(n));
    rep.m_star_h = mean_width(h).value.raw();
    rep.chain_gap = std::abs(rep.m_star_h - rep.m_star_f - 1.0);

    const bool radial = radial_form(f.phi()).has_value();
    rep.h_run = run_experiment(h, cfg, [&](const Vector& x, double phi_h, TrialResult& tr) {
        const double phi_f = radial ? (*radial_form(f.phi()))(x.norm()).raw() : f.phi()(x).raw();
        if (phi_f < phi_h - 1e-9 * std::max(1.0, std::abs(phi_h))) tr.f_below_h = false;
        tr.max_c_f = std::max(tr.max_c_f, std::isinf(phi_f) ? 0.0 : x.squaredNorm() / (2.0 * phi_f));
    });
    rep.v_h = rep.h_run.volume_ratio.value;
    rep.v_h_ok = rep.v_h <= std::sqrt(std::exp(1.0)) + 1e-3;
    for (const auto& tr : rep.h_run.trials) {
        rep.max_c_f = std::max(rep.max_c_f, tr.max_c_f);
        rep.f_below_h = rep.f_below_h && tr.f_below_h;
    }
    rep.pass = rep.v_h_ok && rep.f_below_h && rep.chain_gap <= 1e-3;
    return rep;
}

}  // namespace logconc
