#include "ccw/numcheck.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include <Eigen/Dense>

#include "ccw/errors.hpp"

namespace ccw {

namespace {

constexpr double kDeltaMax = 10.0;
constexpr double kDeltaTol = 1e-6;
constexpr std::size_t kMaxWitnesses = 16;

// Runs fn(begin, end) over contiguous chunks of [0, n). Results must be written
// by index so the outcome does not depend on the number of threads.
template <class Fn>
void parallel_chunks(std::size_t n, Fn&& fn) {
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    std::size_t chunks = std::min(hw, std::max<std::size_t>(1, n / 512));
    if (chunks <= 1) {
        fn(std::size_t{0}, n);
        return;
    }
    std::size_t step = (n + chunks - 1) / chunks;
    std::vector<std::exception_ptr> errors(chunks);
    std::vector<std::thread> threads;
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t lo = c * step, hi = std::min(n, lo + step);
        threads.emplace_back([&, c, lo, hi] {
            try {
                fn(lo, hi);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// Flattened polynomial for repeated float evaluation.
struct CompiledPoly {
    std::vector<double> coef;
    std::vector<std::vector<unsigned>> exps;

    CompiledPoly() = default;
    explicit CompiledPoly(const Polynomial& p) {
        for (const auto& [e, c] : p.terms()) {
            coef.push_back(c.to_double());
            exps.emplace_back(e.begin(), e.end());
        }
    }
    double operator()(const std::vector<double>& x) const {
        double sum = 0.0;
        for (std::size_t t = 0; t < coef.size(); ++t) {
            double v = coef[t];
            const auto& e = exps[t];
            for (std::size_t i = 0; i < e.size(); ++i)
                for (unsigned k = 0; k < e[i]; ++k) v *= x[i];
            sum += v;
        }
        return sum;
    }
};

struct CompiledRF {
    CompiledPoly num, den;
    bool poly = true;
    std::string den_text;

    CompiledRF() = default;
    explicit CompiledRF(const RationalFunction& f) {
        if (!f.chart().valid()) return;
        num = CompiledPoly(f.num());
        poly = f.is_polynomial();
        if (!poly) {
            den = CompiledPoly(f.den());
            den_text = f.den().to_string();
        }
    }
    double operator()(const std::vector<double>& x) const {
        if (poly) return num(x);
        double d = den(x);
        if (d == 0.0) throw DenominatorVanishes("denominator " + den_text + " vanishes");
        return num(x) / d;
    }
};

double dist2(const std::vector<double>& x, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
    return s;
}

std::vector<std::vector<double>> to_double_points(const std::vector<PointQ>& pts) {
    std::vector<std::vector<double>> out;
    for (const auto& p : pts) {
        std::vector<double> v;
        for (const auto& c : p.coords) v.push_back(c.to_double());
        out.push_back(std::move(v));
    }
    return out;
}

// Per-point quantities of the gradient-like condition: a = dphi(X), q = |X|^2 + |dphi|^2.
struct MarginSamples {
    std::vector<double> a, q;
    std::vector<Rational> ea, eq;  // exact mode only
    std::vector<char> excluded;
    bool exact = false;
};

template <class T>
bool feasible(const std::vector<T>& a, const std::vector<T>& q, const std::vector<char>& excluded, const T& delta) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (excluded[i]) continue;
        if (a[i] - delta * q[i] < T(0)) return false;
    }
    return true;
}

template <class T>
T bisect_delta(const std::vector<T>& a, const std::vector<T>& q, const std::vector<char>& excluded, T hi) {
    if (feasible(a, q, excluded, hi)) return hi;
    T lo(0);
    if (!feasible(a, q, excluded, lo)) return lo;
    T tol;
    if constexpr (std::is_same_v<T, Rational>)
        tol = Rational(1, 1000000);
    else
        tol = kDeltaTol;
    while (hi - lo > tol) {
        T mid = (lo + hi) / T(2);
        if (feasible(a, q, excluded, mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

GradientLikeReport finish(const ScanSpec& spec, const MarginSamples& m, double radius) {
    GradientLikeReport r;
    r.mode = spec.mode;
    r.points = m.a.size();
    r.exclusion_radius = radius;
    for (char e : m.excluded) r.excluded += e ? 1 : 0;

    if (m.exact) {
        Rational best = bisect_delta<Rational>(m.ea, m.eq, m.excluded, Rational(static_cast<long>(kDeltaMax)));
        r.best_delta = best.to_double();
    } else {
        r.best_delta = bisect_delta<double>(m.a, m.q, m.excluded, kDeltaMax);
    }

    double min_margin = std::numeric_limits<double>::infinity();
    double min_ratio = std::numeric_limits<double>::infinity();
    std::optional<Rational> exact_ratio;
    std::size_t tight = SIZE_MAX;
    for (std::size_t i = 0; i < m.a.size(); ++i) {
        if (m.excluded[i]) {
            bool neg = m.exact ? m.ea[i].sign() < 0 : m.a[i] < 0;
            if (neg) {
                ++r.sign_violations;
                if (r.witnesses.size() < kMaxWitnesses) r.witnesses.push_back({i, spec.point(i), m.a[i]});
            }
            continue;
        }
        double margin = m.a[i] - r.best_delta * m.q[i];
        if (m.exact) margin = (m.ea[i] - Rational(mpq_class(r.best_delta)) * m.eq[i]).to_double();
        if (margin < min_margin) min_margin = margin;
        if (margin < 0 && r.witnesses.size() < kMaxWitnesses) r.witnesses.push_back({i, spec.point(i), margin});
        if (m.q[i] == 0.0) continue;
        if (m.exact) {
            Rational ratio = m.ea[i] / m.eq[i];
            if (!exact_ratio || ratio < *exact_ratio) {
                exact_ratio = ratio;
                tight = i;
            }
        } else {
            double ratio = m.a[i] / m.q[i];
            // Strict comparison keeps the lowest index on ties.
            if (ratio < min_ratio) {
                min_ratio = ratio;
                tight = i;
            }
        }
    }
    if (exact_ratio) {
        r.min_ratio_exact = exact_ratio;
        min_ratio = exact_ratio->to_double();
    }
    r.min_margin = std::isfinite(min_margin) ? min_margin : 0.0;
    r.min_ratio = std::isfinite(min_ratio) ? min_ratio : 0.0;
    if (tight != SIZE_MAX) r.tight = Witness{tight, spec.point(tight), r.min_ratio};
    return r;
}

std::vector<char> exclusion_flags(const ScanSpec& spec, const std::vector<std::vector<double>>& crit, double radius) {
    std::vector<char> out(spec.points(), 0);
    if (crit.empty()) return out;
    double r2 = radius * radius;
    parallel_chunks(out.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            auto x = spec.point(i);
            for (const auto& c : crit)
                if (dist2(x, c) <= r2) out[i] = 1;
        }
    });
    return out;
}

void require_float(const ScanSpec& spec, const char* what) {
    if (spec.mode != ScanMode::Float) throw InvalidArgument(std::string(what) + " runs in float mode only");
}

}  // namespace

double smoothstep_cutoff(double r, double a, double b) {
    if (r <= a) return 1.0;
    if (r >= b) return 0.0;
    double u = (r - a) / (b - a);
    return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double smoothstep_cutoff_derivative(double r, double a, double b) {
    if (r <= a || r >= b) return 0.0;
    double u = (r - a) / (b - a);
    return -30.0 * u * u * (1.0 - u) * (1.0 - u) / (b - a);
}

BumpProfile::BumpProfile(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
    if (!(Rational(0) < a_ && a_ < b_)) throw InvalidArgument("bump profile needs 0 < a < b");
}

double BumpProfile::value(double r) const { return smoothstep_cutoff(r, a_.to_double(), b_.to_double()); }

double BumpProfile::derivative(double r) const {
    return smoothstep_cutoff_derivative(r, a_.to_double(), b_.to_double());
}

double BumpProfile::derivative_bound() const { return 15.0 / (8.0 * (b_ - a_).to_double()); }

ScanSpec ScanSpec::uniform(const Box& box, std::size_t count, ScanMode mode) {
    return {box, std::vector<std::size_t>(box.dim(), count), mode};
}

std::size_t ScanSpec::points() const {
    std::size_t n = 1;
    for (auto c : counts) n *= c;
    return n;
}

void ScanSpec::validate(std::size_t min_count) const {
    if (box.lo.size() != box.hi.size()) throw InvalidArgument("box bounds have different lengths");
    if (counts.size() != box.dim()) throw InvalidArgument("grid needs one count per box axis");
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] < min_count)
            throw InvalidArgument("grid needs at least " + std::to_string(min_count) + " points per axis");
        if (!(box.lo[i] < box.hi[i]) && counts[i] > 1) throw InvalidArgument("empty box axis " + std::to_string(i));
    }
}

std::vector<Rational> ScanSpec::point_exact(std::size_t flat) const {
    std::vector<Rational> x(counts.size());
    for (std::size_t i = counts.size(); i-- > 0;) {
        std::size_t k = flat % counts[i];
        flat /= counts[i];
        if (counts[i] == 1)
            x[i] = box.lo[i];
        else
            x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * Rational(static_cast<long>(k)) /
                                   Rational(static_cast<long>(counts[i] - 1));
    }
    return x;
}

std::vector<double> ScanSpec::point(std::size_t flat) const {
    std::vector<double> x(counts.size());
    for (std::size_t i = counts.size(); i-- > 0;) {
        std::size_t k = flat % counts[i];
        flat /= counts[i];
        double lo = box.lo[i].to_double(), hi = box.hi[i].to_double();
        x[i] = counts[i] == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(counts[i] - 1);
    }
    return x;
}

double default_exclusion_radius(const Box& box) {
    double w = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < box.dim(); ++i) w = std::min(w, (box.hi[i] - box.lo[i]).to_double() / 2.0);
    return w / 8.0;
}

GradientLikeReport grad_like_scan(const ContactBundle& b, const ScanSpec& spec, const std::vector<PointQ>& critical,
                                  std::optional<double> exclusion_radius) {
    if (!b.X || !b.phi) throw InvalidArgument("gradient-like scan needs X and phi");
    spec.validate();
    if (spec.box.dim() != b.chart.dim()) throw InvalidArgument("scan box dimension differs from the chart");
    const std::size_t d = b.chart.dim();
    const VectorField& x = *b.X;
    RationalFunction phi(*b.phi);
    RationalFunction a = x.apply(phi);
    RationalFunction q(b.chart);
    for (std::size_t i = 0; i < d; ++i) {
        q += x[i] * x[i];
        RationalFunction g = phi.derivative(i);
        q += g * g;
    }

    double radius = exclusion_radius.value_or(default_exclusion_radius(spec.box));
    MarginSamples m;
    const std::size_t n = spec.points();
    m.excluded = exclusion_flags(spec, to_double_points(critical), radius);
    m.a.resize(n);
    m.q.resize(n);
    if (spec.mode == ScanMode::Exact) {
        m.exact = true;
        m.ea.resize(n);
        m.eq.resize(n);
        parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                auto p = spec.point_exact(i);
                m.ea[i] = a.evaluate(p);
                m.eq[i] = q.evaluate(p);
                m.a[i] = m.ea[i].to_double();
                m.q[i] = m.eq[i].to_double();
            }
        });
    } else {
        CompiledRF ca(a), cq(q);
        parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                auto p = spec.point(i);
                m.a[i] = ca(p);
                m.q[i] = cq(p);
            }
        });
    }
    return finish(spec, m, radius);
}

TransversalityReport transversality_scan(const VectorField& x, const Polynomial& psi, const ScanSpec& spec,
                                         double margin, double slab) {
    spec.validate();
    if (spec.box.dim() != x.chart().dim()) throw InvalidArgument("scan box dimension differs from the chart");
    RationalFunction p(psi);
    RationalFunction dx = x.apply(p);
    const std::size_t n = spec.points();
    std::vector<double> vals(n), dvals(n);
    if (spec.mode == ScanMode::Exact) {
        parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                auto pt = spec.point_exact(i);
                Rational v = p.evaluate(pt);
                vals[i] = v.is_zero() ? 0.0 : v.to_double();
                dvals[i] = dx.evaluate(pt).to_double();
            }
        });
    } else {
        CompiledRF cp(p), cd(dx);
        parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                auto pt = spec.point(i);
                vals[i] = cp(pt);
                dvals[i] = cd(pt);
            }
        });
    }
    TransversalityReport r;
    r.points = n;
    r.slab_tolerance = slab;
    r.required_margin = margin;
    r.min_abs = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(vals[i]) > slab) continue;
        ++r.slab_points;
        double v = std::abs(dvals[i]);
        if (v == 0.0 || v < margin) ++r.failures;
        if (v < r.min_abs) {
            r.min_abs = v;
            r.worst = Witness{i, spec.point(i), dvals[i]};
        }
    }
    if (r.slab_points == 0) r.min_abs = 0.0;
    return r;
}

bool HamiltonianInterpolationReport::passed() const {
    if (samples.empty()) return false;
    for (const auto& s : samples)
        if (!s.scan.certified()) return false;
    return true;
}

HamiltonianInterpolationReport hamiltonian_interpolation_check(const ContactBundle& b, const RationalFunction& h0,
                                                               const RationalFunction& h1, const BumpProfile& rho,
                                                               std::size_t stages, std::size_t t_samples,
                                                               const ScanSpec& spec, const PointQ& center) {
    if (!b.phi) throw InvalidArgument("interpolation check needs phi");
    if (stages == 0) throw InvalidArgument("interpolation needs at least one stage");
    if (t_samples < 2) throw InvalidArgument("interpolation needs at least two t-samples");
    spec.validate();
    const Chart& c = b.chart;
    const std::size_t d = c.dim();
    if (spec.box.dim() != d || center.coords.size() != d) throw InvalidArgument("dimension mismatch");

    HamiltonianInterpolationReport rep;
    VectorField reeb = reeb_field(b);
    std::vector<PointQ> crit{center};
    {
        ContactBundle b0 = b, b1 = b;
        b0.X = ham_to_field(b, h0, reeb);
        b1.X = ham_to_field(b, h1, reeb);
        rep.start = grad_like_scan(b0, spec, crit);
        rep.end = grad_like_scan(b1, spec, crit);
        if (!rep.start.certified()) rep.findings.push_back({"start-not-gradient-like", "H0 fails the base scan"});
        if (!rep.end.certified()) rep.findings.push_back({"end-not-gradient-like", "H1 fails the base scan"});
    }
    rep.mu0 = reeb.apply(h0).evaluate(center.coords);
    rep.mu1 = reeb.apply(h1).evaluate(center.coords);
    if (!(rep.mu0 == rep.mu1))
        rep.findings.push_back(
            {"mu-mismatch", "mu0 = " + rep.mu0.to_string() + ", mu1 = " + rep.mu1.to_string() + " at the center"});

    std::vector<RationalFunction> alpha = one_form_vector(b.alpha);
    auto M = two_form_matrix(ext_d(b.alpha));
    RationalFunction diff = h1 - h0;
    RationalFunction phi(*b.phi);
    std::vector<CompiledRF> c_alpha, c_reeb, c_g0, c_gd, c_gphi;
    std::vector<std::vector<CompiledRF>> c_m(d);
    for (std::size_t i = 0; i < d; ++i) {
        c_alpha.emplace_back(alpha[i]);
        c_reeb.emplace_back(reeb[i]);
        c_g0.emplace_back(h0.derivative(i));
        c_gd.emplace_back(diff.derivative(i));
        c_gphi.emplace_back(phi.derivative(i));
        for (std::size_t j = 0; j < d; ++j) c_m[i].emplace_back(M[i][j]);
    }
    CompiledRF c_h0(h0), c_d(diff);

    // t-independent data per grid point.
    struct PointData {
        Eigen::MatrixXd solve;  // d x (d+1) left inverse of the contact system
        Eigen::VectorXd alpha, reeb, g0, gd, gphi;
        double h0 = 0, diff = 0, r = 0;
        std::vector<double> unit;  // (x - center) / r
        double c_alpha = 0, d_alpha = 0;
    };
    const std::size_t n = spec.points();
    std::vector<PointData> data(n);
    std::vector<double> ctr;
    for (const auto& v : center.coords) ctr.push_back(v.to_double());
    parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            auto x = spec.point(p);
            PointData& pd = data[p];
            pd.alpha.resize(d);
            pd.reeb.resize(d);
            pd.g0.resize(d);
            pd.gd.resize(d);
            pd.gphi.resize(d);
            Eigen::MatrixXd A(d + 1, d), Mx(d, d);
            for (std::size_t i = 0; i < d; ++i) {
                pd.alpha[i] = c_alpha[i](x);
                pd.reeb[i] = c_reeb[i](x);
                pd.g0[i] = c_g0[i](x);
                pd.gd[i] = c_gd[i](x);
                pd.gphi[i] = c_gphi[i](x);
                for (std::size_t j = 0; j < d; ++j) Mx(i, j) = c_m[i][j](x);
            }
            for (std::size_t i = 0; i < d; ++i) {
                A(0, i) = pd.alpha[i];
                for (std::size_t j = 0; j < d; ++j) A(1 + j, i) = Mx(i, j);
            }
            pd.solve = A.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(d + 1, d + 1));
            pd.h0 = c_h0(x);
            pd.diff = c_d(x);
            pd.r = std::sqrt(dist2(x, ctr));
            pd.unit.assign(d, 0.0);
            if (pd.r > 0)
                for (std::size_t i = 0; i < d; ++i) pd.unit[i] = (x[i] - ctr[i]) / pd.r;

            // d alpha restricted to xi, in an orthonormal basis of ker alpha.
            pd.d_alpha = pd.alpha.norm();
            if (pd.d_alpha > 0 && d > 1) {
                Eigen::HouseholderQR<Eigen::MatrixXd> qr(pd.alpha);
                Eigen::MatrixXd Q = qr.householderQ();
                Eigen::MatrixXd xi = Q.rightCols(d - 1);
                Eigen::MatrixXd B = xi.transpose() * Mx * xi;
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
                const auto& sv = svd.singularValues();
                double smax = sv(0), smin = sv(sv.size() - 1);
                pd.c_alpha = smin > 0 ? std::max(smax, 1.0 / smin) : std::numeric_limits<double>::infinity();
            }
        }
    });
    for (const auto& pd : data) {
        rep.c_alpha = std::max(rep.c_alpha, pd.c_alpha);
        rep.d_alpha = std::max(rep.d_alpha, pd.d_alpha);
    }

    double radius = default_exclusion_radius(spec.box);
    std::vector<char> excluded = exclusion_flags(spec, {ctr}, radius);
    Rational shrink = rho.inner() / rho.outer();
    std::vector<BumpProfile> bumps;
    Rational f(1);
    for (std::size_t j = 0; j < stages; ++j) {
        bumps.push_back(rho.scaled(f));
        f *= shrink;
    }
    ScanSpec fspec = spec;
    fspec.mode = ScanMode::Float;

    rep.worst_delta = std::numeric_limits<double>::infinity();
    rep.worst_margin = std::numeric_limits<double>::infinity();
    const double inv_n = 1.0 / static_cast<double>(stages);
    for (std::size_t j = 0; j < stages; ++j) {
        for (std::size_t k = (j == 0 ? 0 : 1); k < t_samples; ++k) {
            double s = static_cast<double>(k) / static_cast<double>(t_samples - 1);
            MarginSamples m;
            m.excluded = excluded;
            m.a.resize(n);
            m.q.resize(n);
            parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
                Eigen::VectorXd rhs(d + 1), g(d);
                for (std::size_t p = lo; p < hi; ++p) {
                    const PointData& pd = data[p];
                    double w = 0, dw = 0;
                    for (std::size_t i = 0; i <= j; ++i) {
                        double scale = i < j ? 1.0 : s;
                        w += scale * bumps[i].value(pd.r);
                        dw += scale * bumps[i].derivative(pd.r);
                    }
                    w *= inv_n;
                    dw *= inv_n;
                    double h = pd.h0 + w * pd.diff;
                    for (std::size_t i = 0; i < d; ++i) g[i] = pd.g0[i] + w * pd.gd[i] + pd.diff * dw * pd.unit[i];
                    double rh = pd.reeb.dot(g);
                    rhs[0] = h;
                    for (std::size_t i = 0; i < d; ++i) rhs[1 + i] = rh * pd.alpha[i] - g[i];
                    Eigen::VectorXd X = pd.solve * rhs;
                    m.a[p] = pd.gphi.dot(X);
                    m.q[p] = X.squaredNorm() + pd.gphi.squaredNorm();
                }
            });
            InterpolationSample smp;
            smp.stage = j;
            smp.t = (static_cast<double>(j) + s) * inv_n;
            smp.scan = finish(fspec, m, radius);
            rep.worst_delta = std::min(rep.worst_delta, smp.scan.best_delta);
            rep.worst_margin = std::min(rep.worst_margin, smp.scan.min_margin);
            rep.samples.push_back(std::move(smp));
        }
    }
    return rep;
}

MorseInterpolationReport morse_interpolation_check(const Polynomial& phi0, const Polynomial& phi1, std::size_t t_var,
                                                   const BumpProfile& rho, const ScanSpec& spec,
                                                   std::size_t s_samples) {
    spec.validate();
    if (s_samples < 2) throw InvalidArgument("need at least two s-samples");
    const Chart& c = phi0.chart();
    require_same_chart(c, phi1.chart(), "morse interpolation");
    if (t_var >= c.dim() || spec.box.dim() != c.dim()) throw InvalidArgument("dimension mismatch");

    MorseInterpolationReport rep;
    const Rational tlo = spec.box.lo[t_var], thi = spec.box.hi[t_var];
    const Rational width = thi - tlo;
    if (rho.inner() < width / Rational(2) || !(rho.outer() < width))
        rep.findings.push_back({"bump-placement", "rho must be 1 on the upper half-slab and 0 near the bottom"});

    Polynomial dt0 = phi0.derivative(t_var), dt1 = phi1.derivative(t_var);
    const std::size_t n = spec.points();
    std::vector<double> v0(n), v1(n), d0(n), d1(n);
    std::vector<char> neg0(n, 0), neg1(n, 0), below(n, 0);
    const Rational mid = (tlo + thi) / Rational(2);
    if (spec.mode == ScanMode::Exact) {
        parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                auto x = spec.point_exact(i);
                Rational a0 = phi0.evaluate(x), a1 = phi1.evaluate(x);
                Rational b0 = dt0.evaluate(x), b1 = dt1.evaluate(x);
                v0[i] = a0.to_double();
                v1[i] = a1.to_double();
                d0[i] = b0.to_double();
                d1[i] = b1.to_double();
                neg0[i] = b0.sign() <= 0;
                neg1[i] = b1.sign() <= 0;
                below[i] = x[t_var] <= mid && a1 < a0;
            }
        });
    } else {
        CompiledPoly p0(phi0), p1(phi1), q0(dt0), q1(dt1);
        double midd = mid.to_double();
        parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                auto x = spec.point(i);
                v0[i] = p0(x);
                v1[i] = p1(x);
                d0[i] = q0(x);
                d1[i] = q1(x);
                neg0[i] = d0[i] <= 0;
                neg1[i] = d1[i] <= 0;
                below[i] = x[t_var] <= midd && v1[i] < v0[i];
            }
        });
    }
    auto first = [&](const std::vector<char>& flags) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < n; ++i)
            if (flags[i]) return i;
        return std::nullopt;
    };
    auto where = [&](std::size_t i) {
        auto x = spec.point(i);
        std::string s = "(";
        for (std::size_t k = 0; k < x.size(); ++k) s += (k ? ", " : "") + std::to_string(x[k]);
        return s + ")";
    };
    if (auto i = first(neg0)) rep.findings.push_back({"phi0-not-increasing", "d phi0/dt <= 0 at " + where(*i)});
    if (auto i = first(neg1)) rep.findings.push_back({"phi1-not-increasing", "d phi1/dt <= 0 at " + where(*i)});
    if (auto i = first(below))
        rep.findings.push_back({"replacement-condition", "phi1 < phi0 on the lower half-slab at " + where(*i)});

    double th = thi.to_double();
    rep.min_derivative = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < s_samples; ++k) {
        double s = static_cast<double>(k) / static_cast<double>(s_samples - 1);
        for (std::size_t i = 0; i < n; ++i) {
            double t = spec.point(i)[t_var];
            double r = rho.value(th - t), rp = -rho.derivative(th - t);
            double v = (1 - s * r) * d0[i] + s * r * d1[i] + s * (v1[i] - v0[i]) * rp;
            ++rep.samples;
            if (v < rep.min_derivative) {
                rep.min_derivative = v;
                rep.worst = Witness{i, spec.point(i), v};
                rep.worst_s = s;
            }
        }
    }
    return rep;
}

double SutureFamily::C() const { return std::numbers::pi * epsilon * epsilon / 8.0; }

// rho(tau): 0 near -K, 1 near 0, nondecreasing.
double SutureFamily::rho(double tau) const { return smoothstep_cutoff(-tau, K / 3.0, 2.0 * K / 3.0); }

double SutureFamily::rho_prime(double tau) const { return -smoothstep_cutoff_derivative(-tau, K / 3.0, 2.0 * K / 3.0); }

double SutureFamily::h0(double s, double tau) const {
    double amp = variant == SutureHamiltonian::Exponential ? std::exp(tau / 2.0) : std::cosh(tau / 2.0);
    return epsilon * amp * std::sin(std::numbers::pi * s / 4.0);
}

double SutureFamily::h1(double s) const { return C() * s; }

double SutureFamily::ds_h(double t, double s, double tau) const {
    double amp = variant == SutureHamiltonian::Exponential ? std::exp(tau / 2.0) : std::cosh(tau / 2.0);
    double d0 = epsilon * amp * (std::numbers::pi / 4.0) * std::cos(std::numbers::pi * s / 4.0);
    double r = t * rho(tau);
    return (1 - r) * d0 + r * C();
}

CollarVector SutureFamily::field(double t, double s, double tau) const {
    // For alpha = C ds + e^tau beta and H = H(s, tau):
    //   X = (H - H_tau)/C d/ds + (H_s/C) d/dtau + e^-tau H_tau R_beta.
    double amp, amp_tau;
    if (variant == SutureHamiltonian::Exponential) {
        amp = std::exp(tau / 2.0);
        amp_tau = amp / 2.0;
    } else {
        amp = std::cosh(tau / 2.0);
        amp_tau = std::sinh(tau / 2.0) / 2.0;
    }
    double sn = std::sin(std::numbers::pi * s / 4.0), cs = std::cos(std::numbers::pi * s / 4.0);
    double H0 = epsilon * amp * sn, H0s = epsilon * amp * (std::numbers::pi / 4.0) * cs, H0t = epsilon * amp_tau * sn;
    double c = C();
    double H1 = c * s, H1s = c;
    double r = t * rho(tau), rp = t * rho_prime(tau);
    double H = (1 - r) * H0 + r * H1;
    double Hs = (1 - r) * H0s + r * H1s;
    double Ht = (1 - r) * H0t + rp * (H1 - H0);
    return {(H - Ht) / c, Hs / c, std::exp(-tau) * Ht};
}

CollarVector SutureFamily::displayed_x0(double s, double tau) const {
    double e = std::exp(tau / 2.0);
    double sn = std::sin(std::numbers::pi * s / 4.0), cs = std::cos(std::numbers::pi * s / 4.0);
    return {4.0 * e / (std::numbers::pi * epsilon) * sn, 2.0 * e / epsilon * cs, epsilon / (2.0 * e) * sn};
}

CollarVector SutureFamily::displayed_xt(double t, double s, double tau) const {
    CollarVector x0 = displayed_x0(s, tau);
    double r = t * rho(tau);
    double extra = t * (h1(s) - h0(s, tau)) * std::exp(-tau) * rho_prime(tau);
    return {(1 - r) * x0.s + r * s, (1 - r) * x0.tau + r * 1.0, (1 - r) * x0.reeb + extra};
}

SutureScanReport suture_standardization_scan(double epsilon, double K, const ScanSpec& spec, std::size_t t_count,
                                             SutureHamiltonian variant) {
    require_float(spec, "suture scan");
    if (spec.counts.size() != 3) throw InvalidArgument("suture scan needs (s, tau, Gamma) grid counts");
    if (spec.counts[0] < 3 || spec.counts[1] < 3 || spec.counts[2] < 1)
        throw InvalidArgument("suture scan needs at least 3 points in s and tau");
    if (!(epsilon > 0) || !(K > 0)) throw InvalidArgument("suture scan needs epsilon > 0 and K > 0");
    if (t_count < 2) throw InvalidArgument("suture scan needs at least two t-samples");

    SutureFamily fam{epsilon, K, variant};
    SutureScanReport r;
    r.epsilon = epsilon;
    r.K = K;
    r.s_count = spec.counts[0];
    r.tau_count = spec.counts[1];
    r.t_count = t_count;
    r.min_ds_h = r.min_side_transversality = r.min_top_transversality = std::numeric_limits<double>::infinity();
    const std::size_t ns = spec.counts[0], nt = spec.counts[1];
    for (std::size_t k = 0; k < t_count; ++k) {
        double t = static_cast<double>(k) / static_cast<double>(t_count - 1);
        for (std::size_t i = 0; i < ns; ++i) {
            double s = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(ns - 1);
            for (std::size_t j = 0; j < nt; ++j) {
                double tau = -K + K * static_cast<double>(j) / static_cast<double>(nt - 1);
                double v = fam.ds_h(t, s, tau);
                if (v < r.min_ds_h) {
                    r.min_ds_h = v;
                    r.worst = Witness{(k * ns + i) * nt + j, {t, s, tau}, v};
                }
                CollarVector x = fam.field(t, s, tau);
                if (i == 0 || i + 1 == ns) r.min_side_transversality = std::min(r.min_side_transversality, s * x.s);
                if (j + 1 == nt) r.min_top_transversality = std::min(r.min_top_transversality, x.tau);
            }
        }
    }
    return r;
}

}  // namespace ccw
