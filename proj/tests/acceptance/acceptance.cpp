// One line per acceptance criterion; exit status 0 iff every line passes.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ccw/cli.hpp"
#include "ccw/contact.hpp"
#include "ccw/handlecalc.hpp"
#include "ccw/kform.hpp"
#include "ccw/models.hpp"
#include "ccw/numcheck.hpp"
#include "ccw/submanifolds.hpp"
#include "../support/generators.hpp"
#include "../support/handlegen.hpp"

using namespace ccw;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double limit_ms;
    std::function<Outcome()> run;
};

std::string read_file(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fixture_path(const std::string& n) { return std::string(CCW_FIXTURE_DIR) + "/" + n; }

// 1
Outcome expansion_coefficients() {
    int models = 0;
    for (std::size_t n = 1; n <= 3; ++n) {
        for (std::size_t k = 0; k <= 2 * n + 1; ++k) {
            ModelBundle m = standard_convex(n, k);
            ExpansionResult r = expansion_coefficient(m.bundle, *m.bundle.X);
            Rational want = k <= n ? Rational(1) : Rational(-1);
            if (!r.is_contact_field() || !(r.mu == RationalFunction(m.bundle.chart, want)))
                return {false, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " mu=" + r.mu.to_string()};
            ++models;
        }
    }
    return {true, "mu = +1/-1 exactly on " + std::to_string(models) + " models"};
}

// 2
Outcome contact_condition() {
    auto fx = nlohmann::json::parse(read_file(fixture_path("darboux_constants.json")));
    std::string detail;
    for (std::size_t n = 1; n <= 3; ++n) {
        ContactCheck c = check_contact(darboux(n).bundle);
        Rational want = Rational::parse(fx["constants"][std::to_string(n)].get<std::string>());
        if (c.kind != ContactCheck::Kind::ExactConstant || !(c.constant == want))
            return {false, "n=" + std::to_string(n) + ": " + c.to_string()};
        detail += (detail.empty() ? "" : ", ") + c.to_string();
    }
    return {true, detail};
}

// 3
Outcome hamiltonian_correspondence() {
    std::vector<std::pair<ContactBundle, VectorField>> cases;
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::size_t k = 0; k <= 2 * n + 1; ++k) {
            ModelBundle m = standard_convex(n, k);
            cases.emplace_back(m.bundle, *m.bundle.X);
        }
    for (std::size_t n = 1; n <= 3; ++n) {
        ModelBundle m = cancellation_model(n, Rational(-1, 4));
        cases.emplace_back(m.bundle, *m.bundle.X);
        RationalFunction diff = field_to_ham(m.bundle, *m.bundle.X) -
                                RationalFunction(cancellation_hamiltonian(m.bundle.chart, Rational(-1, 4)));
        if (!diff.is_zero()) return {false, "field_to_ham(X_eps) - H_eps = " + diff.to_string()};
    }
    ModelBundle collar = sutured_collar(Rational(3, 2));
    cases.emplace_back(collar.bundle, *collar.bundle.X);
    for (const auto& [b, x] : cases)
        if (!(ham_to_field(b, field_to_ham(b, x)) == x)) return {false, "round trip differs for " + x.to_string()};
    return {true, std::to_string(cases.size()) + " catalog fields round-trip; field_to_ham(X_eps) = H_eps"};
}

// 4
Outcome sphere_example() {
    SphereReport r = sphere_example_report(2);
    using K = IdealIdentity::Kind;
    if (r.tangency.kind != K::Equal || r.hamiltonian.kind != K::Equal || r.dphi_norm.kind != K::Equal)
        return {false, "exact identity failed: " + r.tangency.to_string() + " " + r.hamiltonian.to_string() + " " +
                           r.dphi_norm.to_string()};
    auto fitted = [](const IdealIdentity& id) {
        return id.kind == K::Equal || (id.kind == K::EqualUpToConstant && id.constant.sign() > 0);
    };
    if (!fitted(r.xh_norm) || !fitted(r.dphi_xh))
        return {false, "fit failed: " + r.xh_norm.to_string() + " " + r.dphi_xh.to_string()};
    return {true, "exact identities hold; fitted constants |X_H|^2: " + r.xh_norm.constant.to_string() +
                      ", dphi(X_H): " + r.dphi_xh.constant.to_string()};
}

// 5
Outcome suture_pullback() {
    SutureCheck s = suture_model_check();
    if (!s.shear_residual.is_zero()) return {false, "residual " + s.shear_residual.to_string()};
    if (s.wrong_shear_residual.is_zero()) return {false, "wrong shear also vanishes"};
    return {true, "shear residual 0 (control shear leaves " + s.wrong_shear_residual.to_string() + ")"};
}

// 6
Outcome cancellation_model_checks() {
    const Rational eps(-1, 4);
    std::size_t samples = 0;
    for (std::size_t n = 1; n <= 3; ++n) {
        ModelBundle m = cancellation_model(n, eps);
        for (int sgn : {1, -1}) {
            std::vector<Rational> x(2 * n + 1);
            x.back() = Rational(sgn, 2);
            CriticalPointCheck c = verify_critical_point(m.bundle, PointQ(m.bundle.chart, x));
            if (!c.is_zero || !c.mu_nonzero()) return {false, "no critical point at z = " + x.back().to_string()};
        }
        // Off the two points the z-axis carries no zeros.
        std::vector<Rational> off(2 * n + 1);
        off.back() = Rational(1, 3);
        if (verify_critical_point(m.bundle, PointQ(m.bundle.chart, off)).is_zero) return {false, "extra zero on axis"};
        auto facts = cancellation_facts(n, eps);
        for (const auto& f : facts)
            if (!f.ok) return {false, f.fact + ": " + f.detail};
        GammaLocus g = cancellation_gamma_locus(n, Rational(1, 2), eps, 10);
        LocusReport lr = reeb_on_locus_check(m.bundle.alpha, g.constraints, g.reeb, g.samples);
        if (!lr.ok() || lr.samples.size() < 10)
            return {false, "Reeb formula " + std::to_string(lr.passed()) + "/" + std::to_string(lr.samples.size())};
        samples += lr.samples.size();
    }
    return {true, "critical points at z = +-1/2, axis invariant, Reeb formula at " + std::to_string(samples) +
                      " rational points (n = 1..3)"};
}

// Straight-line oracle: min ratio outside the balls, sign check inside.
struct OracleResult {
    double delta = 0.0;
    bool signs_ok = true;
};

OracleResult grid_oracle(const ContactBundle& b, std::size_t count, const std::vector<std::vector<double>>& critical,
                         double radius) {
    const std::size_t d = b.chart.dim();
    std::vector<RationalFunction> grad;
    for (std::size_t j = 0; j < d; ++j) grad.emplace_back(b.phi->derivative(j));
    OracleResult out;
    double best = 10.0;
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> x(d);
    while (true) {
        for (std::size_t i = 0; i < d; ++i)
            x[i] = -1.0 + 2.0 * static_cast<double>(idx[i]) / static_cast<double>(count - 1);
        double dphix = 0, q = 0;
        for (std::size_t j = 0; j < d; ++j) {
            double xj = (*b.X)[j].evaluate(std::span<const double>(x)), gj = grad[j].evaluate(std::span<const double>(x));
            dphix += gj * xj;
            q += xj * xj + gj * gj;
        }
        bool inside = false;
        for (const auto& c : critical) {
            double r2 = 0;
            for (std::size_t i = 0; i < d; ++i) r2 += (x[i] - c[i]) * (x[i] - c[i]);
            inside = inside || r2 < radius * radius;
        }
        if (inside) {
            out.signs_ok = out.signs_ok && dphix >= 0;
        } else {
            best = std::min(best, dphix / q);
        }
        std::size_t k = 0;
        while (k < d && ++idx[k] == count) idx[k++] = 0;
        if (k == d) break;
    }
    out.delta = std::max(best, 0.0);
    return out;
}

// 7
Outcome gradient_like_scans() {
    double worst_rel = 0;
    int scans = 0;
    auto one = [&](const ContactBundle& b, const std::vector<PointQ>& crit, std::string label) -> std::optional<Outcome> {
        ScanSpec spec = ScanSpec::uniform(Box::cube(b.chart.dim(), Rational(1)), 11, ScanMode::Float);
        GradientLikeReport r = grad_like_scan(b, spec, crit);
        std::vector<std::vector<double>> cd;
        for (const auto& p : crit) {
            cd.emplace_back();
            for (const auto& c : p.coords) cd.back().push_back(c.to_double());
        }
        OracleResult o = grid_oracle(b, 11, cd, r.exclusion_radius);
        ++scans;
        if (!r.certified() || !o.signs_ok) return Outcome{false, label + ": not certified"};
        double rel = std::abs(r.best_delta - o.delta) / o.delta;
        worst_rel = std::max(worst_rel, rel);
        if (!(rel <= 0.05)) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%s: delta %.6g vs oracle %.6g", label.c_str(), r.best_delta, o.delta);
            return Outcome{false, buf};
        }
        return std::nullopt;
    };
    for (std::size_t n = 1; n <= 2; ++n)
        for (std::size_t k = 0; k <= 2 * n + 1; ++k) {
            ModelBundle m = standard_convex(n, k);
            if (auto f = one(m.bundle, m.expected_critical, "C_" + std::to_string(k) + " n=" + std::to_string(n))) return *f;
        }
    ModelBundle c = cancellation_model(1, Rational(-1, 4));
    if (auto f = one(c.bundle, c.expected_critical, "cancellation")) return *f;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d scans certified, worst relative gap to oracle %.2e", scans, worst_rel);
    return {true, buf};
}

// 8
Outcome interpolation_checks() {
    ModelBundle m = standard_convex(1, 0);
    ScanSpec spec = ScanSpec::uniform(Box::cube(3, Rational(1)), 11, ScanMode::Float);
    RationalFunction h0 = *m.expected_h, h1 = h0 * Rational(3, 4);
    HamiltonianInterpolationReport r = hamiltonian_interpolation_check(
        m.bundle, h0, h1, BumpProfile(Rational(1, 4), Rational(1, 2)), 1, 11, spec, PointQ(m.bundle.chart, {0, 0, 0}));
    if (r.samples.size() != 11 || !r.passed() || !(r.worst_margin > 0)) return {false, "rescaling instance failed"};

    Chart c{"x", "t"};
    ScanSpec ms{Box{{Rational(-1), Rational(-1)}, {Rational(1), Rational(0)}}, {5, 21}, ScanMode::Exact};
    BumpProfile rho(Rational(1, 2), Rational(7, 8));
    Polynomial t = Polynomial::variable(c, 1), x = Polynomial::variable(c, 0);
    Polynomial lifted = t + t.pow(3) + Polynomial(c, Rational(1)) + x * x;
    MorseInterpolationReport pos = morse_interpolation_check(t, lifted, 1, rho, ms);
    MorseInterpolationReport neg = morse_interpolation_check(t, t - Polynomial(c, Rational(1)), 1, rho, ms);
    if (!pos.passed()) return {false, "positive Morse fixture rejected"};
    if (neg.passed() || neg.findings.empty() || neg.findings[0].code != "replacement-condition")
        return {false, "precondition fixture not rejected"};
    char buf[160];
    std::snprintf(buf, sizeof buf, "11 t-samples, min margin %.3g, delta %.4g; Morse positive passes, negative -> %s",
                  r.worst_margin, r.worst_delta, neg.findings[0].code.c_str());
    return {true, buf};
}

std::string move_code(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const HandleMoveError& e) {
        return e.code();
    }
    return "";
}

std::vector<std::pair<long, long>> multiset(const HandleDecomposition& d) {
    std::vector<std::pair<long, long>> v;
    for (const auto& h : d.handles) v.emplace_back(h.index, h.framing());
    std::sort(v.begin(), v.end());
    return v;
}

// 9
Outcome handle_suite() {
    if (!(framing_group(0, 3) == FramingGroup::trivial()) || !(framing_group(0, 0) == FramingGroup::trivial()) ||
        !(framing_group(1, 1) == FramingGroup::z()) || !(framing_group(1, 4) == FramingGroup::z()) ||
        !(framing_group(2, 1) == FramingGroup::cyclic(1)) || framing_group(2, 1).to_string() != "Trivial")
        return {false, "framing table"};
    std::mt19937_64 rng(0);
    int cancels = 0, rejected = 0, books = 0;
    const int trials = 250;
    for (int i = 0; i < trials; ++i) {
        std::size_t pair = SIZE_MAX;
        HandleDecomposition d = testgen::random_decomposition(rng, &pair);
        if (!validate(d).valid()) return {false, "generator produced an invalid decomposition"};
        if (!(dualize(dualize(d)) == d)) return {false, "dualize is not an involution"};
        RearrangeResult s = rearrange_split(d);
        if (!(rearrange_split(s.decomposition).decomposition == s.decomposition)) return {false, "split not idempotent"};
        if (multiset(s.decomposition) != multiset(d)) return {false, "split changed the handle multiset"};
        if (pair != SIZE_MAX) {
            bool middle = d.handles[pair].index == d.n;
            bool tagged = middle && !d.handles[pair + 1].tags().empty();
            if (middle && !tagged) {
                if (move_code([&] { cancel_pair(d, pair, pair + 1); }) != "MiddleDimensionNotTrivialBypass")
                    return {false, "untagged middle pair cancelled"};
                ++rejected;
            } else {
                if (cancel_pair(d, pair, pair + 1).handles.size() + 2 != d.handles.size())
                    return {false, "cancel did not remove two handles"};
                ++cancels;
            }
        }
        AbstractOpenBook b = testgen::random_open_book(rng, d.n);
        if (!(to_open_book(from_open_book(b, d.n)) == b)) return {false, "open book round trip"};
        ++books;
    }
    return {true, std::to_string(trials) + " decompositions: " + std::to_string(cancels) + " cancels, " +
                      std::to_string(rejected) + " middle-dimension rejections, " + std::to_string(books) +
                      " open books"};
}

KForm lie_by_coordinates(const VectorField& x, const KForm& a) {
    KForm out(a.chart(), a.grade());
    for (const auto& [m, c] : a.coeffs()) {
        auto idx = mask_indices(m);
        out += KForm::term(a.chart(), idx, x.apply(c));
        for (std::size_t p = 0; p < idx.size(); ++p) {
            KForm t = KForm::scalar(c);
            for (std::size_t q = 0; q < idx.size(); ++q)
                t = wedge(t, q == p ? differential(x[idx[q]]) : KForm::basis(a.chart(), idx[q]));
            out += t;
        }
    }
    return out;
}

// 10
Outcome exterior_calculus() {
    testgen::Rng rng(0);
    const int cases = 1000;
    std::size_t max_dim = 0;
    for (int i = 0; i < cases; ++i) {
        std::size_t dim = 1 + static_cast<std::size_t>(i % 7);
        max_dim = std::max(max_dim, dim);
        Chart c = testgen::chart_of_dim(dim);
        unsigned g = static_cast<unsigned>(rng() % (dim + 1));
        unsigned h = static_cast<unsigned>(rng() % (dim - g + 1));
        KForm a = testgen::random_form(rng, c, g), b = testgen::random_form(rng, c, h);
        VectorField x = testgen::random_field(rng, c);
        if (!ext_d(ext_d(a)).is_zero()) return {false, "d^2 != 0 on " + a.to_string()};
        KForm cartan = interior_product(x, ext_d(a));
        if (g > 0) cartan += ext_d(interior_product(x, a));
        if (!(cartan == lie_by_coordinates(x, a)) || !(lie_derivative(x, a) == cartan))
            return {false, "Cartan identity on " + a.to_string()};
        KForm lhs = ext_d(wedge(a, b));
        KForm rhs = wedge(ext_d(a), b);
        KForm second = wedge(a, ext_d(b));
        rhs += (g % 2) ? -second : second;
        KForm il = interior_product(x, wedge(a, b));
        KForm ir = wedge(interior_product(x, a), b);
        KForm isecond = wedge(a, interior_product(x, b));
        ir += (g % 2) ? -isecond : isecond;
        if (!(lhs == rhs) || !(il == ir)) return {false, "antiderivation rule"};
        std::size_t src_dim = 1 + static_cast<std::size_t>(rng() % 7);
        Chart s = testgen::chart_of_dim(src_dim);
        PolyMap f = testgen::random_map(rng, s, c);
        if (!(pullback(f, ext_d(a)) == ext_d(pullback(f, a)))) return {false, "naturality of d"};
    }
    return {true, std::to_string(cases) + " cases each of d^2, Cartan, antiderivation, naturality (dims 1.." +
                      std::to_string(max_dim) + ")"};
}

int run_shell(const std::string& cmd) {
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

// 11
Outcome cli_determinism() {
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path() / ("ccw_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(tmp);
    const std::string bin = CCW_CLI_PATH, session = fixture_path("session.ccw");
    std::string out1 = (tmp / "run1.json").string(), out2 = (tmp / "run2.json").string();
    int rc1 = run_shell("'" + bin + "' --json --no-timing '" + session + "' > '" + out1 + "' 2>/dev/null");
    int rc2 = run_shell("'" + bin + "' --json --no-timing '" + session + "' > '" + out2 + "' 2>/dev/null");
    std::string a = read_file(out1), b = read_file(out2);
    // With timing on, the reports differ only in the stripped timing fields.
    std::string out3 = (tmp / "run3.json").string();
    run_shell("'" + bin + "' --json '" + session + "' > '" + out3 + "' 2>/dev/null");
    std::string timed = read_file(out3);
    Outcome out;
    std::size_t reports = 0;
    if (rc1 != 0 || rc2 != 0 || a.empty() || a != b) {
        out = {false, "fixture session runs differ or failed (exit " + std::to_string(rc1) + ")"};
    } else {
        auto ja = nlohmann::json::parse(a), jt = nlohmann::json::parse(timed);
        reports = ja.size();
        for (auto& e : jt) e.erase("timing_ms");
        std::function<void(nlohmann::json&)> strip = [&](nlohmann::json& j) {
            if (j.is_object()) {
                j.erase("wallclock_ms");
                for (auto& [k, v] : j.items()) strip(v);
            } else if (j.is_array()) {
                for (auto& v : j) strip(v);
            }
        };
        strip(jt);
        if (jt != ja) out = {false, "timed and untimed reports disagree"};
    }
    if (out.ok) {
        struct Expect {
            std::string file;
            int code;
        };
        for (const Expect& e : {Expect{"session.ccw", 0}, Expect{"exit_fail.ccw", 1}, Expect{"exit_parse.ccw", 2},
                                Expect{"exit_domain.ccw", 3}}) {
            int rc = run_shell("'" + bin + "' '" + fixture_path(e.file) + "' > /dev/null 2>&1");
            if (rc != e.code) {
                out = {false, e.file + " exited " + std::to_string(rc) + ", expected " + std::to_string(e.code)};
                break;
            }
        }
        if (out.ok && run_shell("'" + bin + "' -e '' > /dev/null 2>&1") != 0) out = {false, "empty session exit"};
        if (out.ok)
            out.detail = std::to_string(reports) + " reports byte-identical across runs; exit codes 0/1/2/3 as specified";
    }
    fs::remove_all(tmp);
    return out;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "expansion coefficients", 2000, expansion_coefficients},
        {2, "contact condition", 1000, contact_condition},
        {3, "hamiltonian correspondence", 2000, hamiltonian_correspondence},
        {4, "sphere example", 5000, sphere_example},
        {5, "suture pullback", 1000, suture_pullback},
        {6, "cancellation model", 5000, cancellation_model_checks},
        {7, "gradient-like scans", 30000, gradient_like_scans},
        {8, "interpolation checks", 20000, interpolation_checks},
        {9, "handle calculus suite", 10000, handle_suite},
        {10, "exterior calculus suite", 60000, exterior_calculus},
        {11, "cli determinism", 60000, cli_determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        bool ok = o.ok && ms < c.limit_ms;
        if (o.ok && !ok) o.detail += "; over the time limit";
        failures += ok ? 0 : 1;
        std::printf("%s  [%2d] %-27s %8.1f ms (limit %6.0f ms)  %s\n", ok ? "PASS" : "FAIL", c.id, c.name, ms, c.limit_ms,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
