#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "ccw/cli.hpp"
#include "ccw/handlecalc.hpp"
#include "ccw/kform.hpp"
#include "ccw/models.hpp"
#include "ccw/numcheck.hpp"

namespace ccw::cli {

using nlohmann::json;

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        case Outcome::Finding: return "finding";
    }
    return "";
}

Box parse_box(std::string_view text, std::size_t dim) {
    std::vector<std::pair<Rational, Rational>> iv;
    std::string s(text);
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto dots = part.find("..");
        if (dots == std::string::npos) throw InvalidArgument("box interval '" + part + "' needs lo..hi");
        Rational lo = parse_number(part.substr(0, dots)), hi = parse_number(part.substr(dots + 2));
        if (!(lo < hi)) throw InvalidArgument("box interval '" + part + "' is empty");
        iv.emplace_back(lo, hi);
    }
    if (iv.size() == 1 && dim > 1) iv.resize(dim, iv[0]);
    if (iv.size() != dim)
        throw InvalidArgument("box has " + std::to_string(iv.size()) + " intervals for dimension " + std::to_string(dim));
    Box b;
    for (auto& [lo, hi] : iv) {
        b.lo.push_back(lo);
        b.hi.push_back(hi);
    }
    return b;
}

std::vector<std::size_t> parse_counts(std::string_view text, std::size_t dim) {
    std::vector<std::size_t> out;
    std::string s(text);
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos || part.size() > 6)
            throw InvalidArgument("grid count '" + part + "' is not a positive integer");
        out.push_back(std::stoul(part));
        if (out.back() == 0) throw InvalidArgument("grid count must be positive");
    }
    if (out.size() == 1 && dim > 1) out.resize(dim, out[0]);
    if (out.size() != dim)
        throw InvalidArgument("grid has " + std::to_string(out.size()) + " counts for dimension " + std::to_string(dim));
    return out;
}

namespace {

// ---------------------------------------------------------------- arguments

struct Args {
    std::vector<const Word*> pos;
    std::map<std::string, const Word*> opt;
};

[[noreturn]] void word_error(const Word& w, const std::string& expected) {
    throw ParseError(w.line, w.column, expected, "'" + w.text + "'");
}

Args split_args(const std::vector<Word>& words, std::size_t start) {
    Args a;
    for (std::size_t i = start; i < words.size(); ++i) {
        const Word& w = words[i];
        if (w.text.size() > 2 && w.text.rfind("--", 0) == 0) {
            if (i + 1 >= words.size()) word_error(w, "a value after " + w.text);
            std::string key = w.text.substr(2);
            if (a.opt.count(key)) word_error(w, "each option once");
            a.opt[key] = &words[i + 1];
            ++i;
        } else {
            a.pos.push_back(&w);
        }
    }
    return a;
}

enum class Ref { Form, Bundle, FormOrBundle, Scalar, Poly, Field, Point, Map, Number, Int, Any };

const char* ref_name(Ref r) {
    switch (r) {
        case Ref::Form: return "form name";
        case Ref::Bundle: return "bundle name";
        case Ref::FormOrBundle: return "form or bundle name";
        case Ref::Scalar: return "scalar name";
        case Ref::Poly: return "polynomial scalar name";
        case Ref::Field: return "field name";
        case Ref::Point: return "point name";
        case Ref::Map: return "map name";
        case Ref::Number: return "rational number";
        case Ref::Int: return "nonnegative integer";
        case Ref::Any: return "word";
    }
    return "";
}

bool is_int(const std::string& t) {
    return !t.empty() && t.size() < 9 && t.find_first_not_of("0123456789") == std::string::npos;
}

bool is_number(const std::string& t) {
    try {
        parse_number(t);
        return true;
    } catch (const Error&) {
        return false;
    }
}

bool matches(Ref r, const std::string& t, const Session& s) {
    switch (r) {
        case Ref::Form: return s.forms.count(t) > 0;
        case Ref::Bundle: return s.bundles.count(t) > 0;
        case Ref::FormOrBundle: return s.forms.count(t) > 0 || s.bundles.count(t) > 0;
        case Ref::Scalar: return s.scalars.count(t) > 0;
        case Ref::Poly: return s.scalars.count(t) > 0 && s.scalars.at(t).is_polynomial();
        case Ref::Field: return s.fields.count(t) > 0;
        case Ref::Point: return s.points.count(t) > 0;
        case Ref::Map: return s.maps.count(t) > 0;
        case Ref::Number: return is_number(t);
        case Ref::Int: return is_int(t);
        case Ref::Any: return true;
    }
    return false;
}

enum class OptKind { Box, Grid, Mode, Points, Pair, Int, Point, Number, Variant, IntList, NumberList };

const std::map<std::string, OptKind>& option_kinds() {
    static const std::map<std::string, OptKind> k{
        {"box", OptKind::Box},           {"grid", OptKind::Grid},         {"mode", OptKind::Mode},
        {"critical", OptKind::Points},   {"at", OptKind::Points},         {"rho", OptKind::Pair},
        {"stages", OptKind::Int},        {"samples", OptKind::Int},       {"center", OptKind::Point},
        {"radius", OptKind::Number},     {"margin", OptKind::Number},     {"slab", OptKind::Number},
        {"variant", OptKind::Variant},   {"certificate", OptKind::IntList}, {"point", OptKind::NumberList},
    };
    return k;
}

std::vector<std::string> split_commas(const std::string& t) {
    std::vector<std::string> out;
    std::stringstream ss(t);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(part);
    return out;
}

void check_option(const std::string& key, const Word& w, const Session& s) {
    const std::string& t = w.text;
    try {
        switch (option_kinds().at(key)) {
            case OptKind::Box: parse_box(t, split_commas(t).size()); break;
            case OptKind::Grid: parse_counts(t, split_commas(t).size()); break;
            case OptKind::Mode:
                if (t != "exact" && t != "float") word_error(w, "exact or float");
                break;
            case OptKind::Points:
                for (const auto& p : split_commas(t))
                    if (!s.points.count(p)) word_error(w, "comma-separated point names");
                break;
            case OptKind::Pair: {
                auto parts = split_commas(t);
                if (parts.size() != 2 || !is_number(parts[0]) || !is_number(parts[1])) word_error(w, "a,b");
                if (!(parse_number(parts[0]).sign() > 0 && parse_number(parts[0]) < parse_number(parts[1])))
                    word_error(w, "0 < a < b");
                break;
            }
            case OptKind::Int:
                if (!is_int(t)) word_error(w, "nonnegative integer");
                break;
            case OptKind::Point:
                if (!s.points.count(t)) word_error(w, "point name");
                break;
            case OptKind::Number:
                if (!is_number(t)) word_error(w, "rational number");
                break;
            case OptKind::Variant:
                if (t != "exp" && t != "cosh") word_error(w, "exp or cosh");
                break;
            case OptKind::IntList:
                for (const auto& p : split_commas(t))
                    if (!is_int(p)) word_error(w, "comma-separated integers");
                break;
            case OptKind::NumberList:
                for (const auto& p : split_commas(t))
                    if (!is_number(p)) word_error(w, "comma-separated numbers");
                break;
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        word_error(w, std::string("valid --") + key + " value (" + e.what() + ")");
    }
}

// ---------------------------------------------------------------- runtime context

struct Ctx {
    const Session& s;
    const ExecOptions& o;
    const Statement& st;
    Args a;
    std::size_t ordinal = 0;

    const std::string& arg(std::size_t i) const { return a.pos.at(i)->text; }
    std::optional<std::string> opt(const std::string& k) const {
        auto it = a.opt.find(k);
        if (it == a.opt.end()) return std::nullopt;
        return it->second->text;
    }

    ContactBundle bundle(std::size_t i) const {
        const std::string& n = arg(i);
        if (auto it = s.bundles.find(n); it != s.bundles.end()) return it->second;
        return ContactBundle(s.forms.at(n));
    }
    const RationalFunction& scalar(std::size_t i) const { return s.scalars.at(arg(i)); }
    Polynomial poly(std::size_t i) const { return s.scalars.at(arg(i)).num(); }
    const VectorField& field(std::size_t i) const { return s.fields.at(arg(i)); }
    const PointQ& point(std::size_t i) const { return s.points.at(arg(i)); }
    const NamedMap& map(std::size_t i) const { return s.maps.at(arg(i)); }

    Box box(std::size_t dim, const Box* fallback = nullptr) const {
        if (auto b = opt("box")) return parse_box(*b, dim);
        if (o.box) return parse_box(*o.box, dim);
        if (fallback && fallback->dim() == dim) return *fallback;
        return Box::cube(dim, Rational(1));
    }
    std::vector<std::size_t> counts(std::size_t dim, const std::string& def = "11") const {
        if (auto g = opt("grid")) return parse_counts(*g, dim);
        if (o.grid) return parse_counts(*o.grid, dim);
        return parse_counts(def, dim);
    }
    ScanMode mode() const {
        std::string m = opt("mode").value_or(o.mode.value_or("float"));
        if (m != "exact" && m != "float") throw InvalidArgument("mode must be exact or float");
        return m == "exact" ? ScanMode::Exact : ScanMode::Float;
    }
    std::size_t int_opt(const std::string& k, std::size_t def) const {
        auto v = opt(k);
        return v ? std::stoul(*v) : def;
    }
    std::vector<PointQ> points_opt(const std::string& k) const {
        std::vector<PointQ> out;
        if (auto v = opt(k))
            for (const auto& p : split_commas(*v)) out.push_back(s.points.at(p));
        return out;
    }
    BumpProfile rho(const Rational& a, const Rational& b) const {
        if (auto v = opt("rho")) {
            auto p = split_commas(*v);
            return BumpProfile(parse_number(p[0]), parse_number(p[1]));
        }
        return BumpProfile(a, b);
    }
};

json point_json(const std::vector<Rational>& x) {
    json a = json::array();
    for (const auto& c : x) a.push_back(c.to_string());
    return a;
}

json witness_json(const Witness& w) { return {{"index", w.index}, {"point", w.point}, {"value", w.value}}; }

json opt_witness(const std::optional<Witness>& w) { return w ? witness_json(*w) : json(nullptr); }

json witnesses_json(const std::vector<Witness>& ws, std::size_t cap = 10) {
    json a = json::array();
    for (std::size_t i = 0; i < ws.size() && i < cap; ++i) a.push_back(witness_json(ws[i]));
    return a;
}

json facts_json(const std::vector<FactCheck>& facts) {
    json a = json::array();
    for (const auto& f : facts) a.push_back({{"fact", f.fact}, {"ok", f.ok}, {"detail", f.detail}});
    return a;
}

json identity_json(const IdealIdentity& id) {
    const char* k = id.kind == IdealIdentity::Kind::Equal ? "Equal"
                    : id.kind == IdealIdentity::Kind::EqualUpToConstant ? "EqualUpToConstant"
                                                                        : "Differ";
    return {{"kind", k}, {"constant", id.constant.to_string()}, {"remainder", id.remainder.to_string()}};
}

json findings_json(const std::vector<Finding>& fs) {
    json a = json::array();
    for (const auto& f : fs) a.push_back({{"code", f.code}, {"detail", f.detail}});
    return a;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

Report make(Outcome o, std::string summary, json payload) {
    Report r;
    r.outcome = o;
    r.summary = std::move(summary);
    r.payload = std::move(payload);
    return r;
}

Outcome pass_if(bool ok) { return ok ? Outcome::Pass : Outcome::Fail; }

// ---------------------------------------------------------------- commands

Report run_check(const Ctx& c) {
    ContactBundle b = c.bundle(1);
    std::size_t grid = c.counts(1)[0];
    ContactCheck r = check_contact(b, grid);
    const char* kind = r.kind == ContactCheck::Kind::ExactConstant           ? "ExactConstant"
                       : r.kind == ContactCheck::Kind::NonvanishingSampled ? "NonvanishingSampled"
                                                                           : "Fails";
    json p{{"kind", kind},
           {"constant", r.kind == ContactCheck::Kind::ExactConstant ? json(r.constant.to_string()) : json(nullptr)},
           {"top", r.top.to_string()},
           {"samples", r.samples},
           {"witness", r.witness ? point_json(r.witness->coords) : json(nullptr)}};
    return make(pass_if(r.passed()), r.to_string(), p);
}

Report run_reeb(const Ctx& c) {
    VectorField r = reeb_field(c.bundle(0));
    return make(Outcome::Pass, r.to_string(), {{"field", r.to_string()}});
}

Report run_ham2field(const Ctx& c) {
    VectorField x = ham_to_field(c.bundle(0), c.scalar(1));
    return make(Outcome::Pass, x.to_string(), {{"field", x.to_string()}});
}

Report run_field2ham(const Ctx& c) {
    RationalFunction h = field_to_ham(c.bundle(0), c.field(1));
    return make(Outcome::Pass, h.to_string(), {{"hamiltonian", h.to_string()}});
}

Report run_mu(const Ctx& c) {
    ExpansionResult r = expansion_coefficient(c.bundle(0), c.field(1));
    json p{{"mu", r.mu.to_string()},
           {"hamiltonian", r.hamiltonian.to_string()},
           {"residual", r.residual.to_string()},
           {"contact_field", r.is_contact_field()}};
    std::string sum = r.is_contact_field() ? "mu = " + r.mu.to_string() : "not contact, residual " + r.residual.to_string();
    return make(pass_if(r.is_contact_field()), sum, p);
}

Report run_critpt(const Ctx& c) {
    ContactBundle b = c.bundle(0);
    std::size_t pi = 1;
    if (c.a.pos.size() == 3) {
        b.X = c.field(1);
        pi = 2;
    }
    const PointQ& p = c.point(pi);
    CriticalPointCheck r = verify_critical_point(b, p);
    json p_json{{"point", point_json(p.coords)}, {"zero", r.is_zero}};
    if (r.is_zero) {
        p_json["mu"] = r.mu.to_string();
        if (r.mu_nonzero()) return make(Outcome::Pass, "critical, mu = " + r.mu.to_string(), p_json);
        return make(Outcome::Finding, "critical with mu = 0", p_json);
    }
    p_json["witness_component"] = b.chart.name(r.witness_component);
    p_json["witness_value"] = r.witness_value.to_string();
    return make(Outcome::Fail, "not critical: " + b.chart.name(r.witness_component) + " component " + r.witness_value.to_string(),
                p_json);
}

Report run_liouville(const Ctx& c) {
    const KForm& l = c.s.forms.at(c.arg(0));
    VectorField z = liouville_field(l);
    KForm res = interior_product(z, ext_d(l)) - l;
    return make(pass_if(res.is_zero()), z.to_string(), {{"field", z.to_string()}, {"residual", res.to_string()}});
}

Report run_isotropic(const Ctx& c) {
    IsotropyResult r = is_isotropic(c.map(0).embedding, c.s.forms.at(c.arg(1)));
    return make(pass_if(r.yes), r.yes ? "isotropic" : "not isotropic",
                {{"isotropic", r.yes}, {"residual", r.residual.to_string()}});
}

Report run_coiso(const Ctx& c) {
    const KForm& alpha = c.s.forms.at(c.arg(0));
    const NamedMap& m = c.map(1);
    const PointQ& q = c.point(2);
    require_same_chart(m.embedding.map.source(), q.chart, "coiso-at parameter point");
    auto tv = tangent_basis(m.embedding, q.coords);
    PointQ img(m.embedding.map.target(), m.embedding.map.evaluate(std::span<const Rational>(q.coords)));
    SubspaceClass k = subspace_class_at(alpha, tv, img);
    json p{{"label", k.label_name()},   {"in_xi", k.in_xi},           {"isotropic", k.isotropic},
           {"coisotropic", k.coisotropic}, {"symplectic", k.symplectic}, {"dim_v", k.dim_v},
           {"dim_w", k.dim_w},          {"dim_w_perp", k.dim_w_perp}, {"dim_radical", k.dim_radical},
           {"ambient_point", point_json(img.coords)}};
    return make(pass_if(k.coisotropic), k.label_name(), p);
}

Report run_foliation(const Ctx& c) {
    const KForm& alpha = c.s.forms.at(c.arg(0));
    FoliationResult r = char_foliation_at(alpha, c.map(1).embedding, c.point(2));
    json basis = json::array();
    for (const auto& v : r.basis) basis.push_back(point_json(v));
    std::string sum = r.singular ? "singular" : "rank " + std::to_string(r.basis.size());
    return make(Outcome::Pass, sum, {{"singular", r.singular}, {"basis", basis}});
}

Report run_dividing(const Ctx& c) {
    const NamedMap& m = c.map(0);
    ContactBundle b = c.bundle(1);
    VectorField x = c.a.pos.size() == 3 ? c.field(2) : *b.X;
    std::vector<PointQ> samples = c.points_opt("at");
    const Chart& src = m.embedding.map.source();
    if (samples.empty()) {
        std::mt19937_64 rng(c.o.seed ^ (0x9E3779B97F4A7C15ULL * (c.ordinal + 1)));
        std::uniform_int_distribution<long> k(-8, 8);
        RationalFunction ax = interior_product(x, b.alpha).as_scalar();
        RationalFunction u = m.embedding.map.apply(ax);
        std::size_t want = c.int_opt("samples", 8);
        for (std::size_t tries = 0; samples.size() < want && tries < 50 * want + 50; ++tries) {
            std::vector<Rational> q;
            for (std::size_t i = 0; i < src.dim(); ++i) q.emplace_back(Rational(k(rng), 8));
            if (u.den().evaluate(std::span<const Rational>(q)).is_zero()) continue;
            samples.emplace_back(src, q);
        }
    }
    DividingData d = dividing_data(m.embedding, b.alpha, x, samples);
    json s = json::array();
    for (const auto& r : d.samples)
        s.push_back({{"point", point_json(r.point.coords)}, {"sign", r.sign}, {"nondegenerate", r.nondegenerate}});
    json p{{"u", d.u.to_string()},
           {"beta", d.beta.to_string()},
           {"lambda_plus", d.lambda_plus.to_string()},
           {"lambda_minus", d.lambda_minus.to_string()},
           {"samples", s},
           {"seed", c.o.seed}};
    return make(pass_if(d.all_nondegenerate()), "u = " + d.u.to_string(), p);
}

json grad_json(const GradientLikeReport& r, const std::vector<std::size_t>& grid, double wall) {
    return {{"check", "gradlike"},
            {"grid", grid},
            {"mode", r.mode == ScanMode::Exact ? "exact" : "float"},
            {"points", r.points},
            {"excluded", r.excluded},
            {"exclusion_radius", r.exclusion_radius},
            {"best_delta", r.best_delta},
            {"min_margin", r.min_margin},
            {"min_ratio", r.min_ratio},
            {"min_ratio_exact", r.min_ratio_exact ? json(r.min_ratio_exact->to_string()) : json(nullptr)},
            {"tight", opt_witness(r.tight)},
            {"sign_violations", r.sign_violations},
            {"certified", r.certified()},
            {"witness_count", r.witnesses.size()},
            {"witnesses", witnesses_json(r.witnesses)},
            {"wallclock_ms", wall}};
}

Report run_gradlike(const Ctx& c) {
    ContactBundle b = c.bundle(0);
    if (c.a.pos.size() == 3) {
        b.X = c.field(1);
        b.phi = c.poly(2);
    }
    std::size_t d = b.chart.dim();
    ScanSpec spec{c.box(d, &b.domain), c.counts(d), c.mode()};
    std::optional<double> radius;
    if (auto r = c.opt("radius")) radius = parse_number(*r).to_double();
    auto t0 = std::chrono::steady_clock::now();
    GradientLikeReport r = grad_like_scan(b, spec, c.points_opt("critical"), radius);
    char buf[96];
    std::snprintf(buf, sizeof buf, "best delta %.6g, min ratio %.6g", r.best_delta, r.min_ratio);
    return make(pass_if(r.certified()), buf, grad_json(r, spec.counts, ms_since(t0)));
}

Report run_transversal(const Ctx& c) {
    const VectorField& x = c.field(0);
    Polynomial psi = c.poly(1);
    std::size_t d = x.chart().dim();
    ScanSpec spec{c.box(d), c.counts(d), ScanMode::Float};
    double margin = c.opt("margin") ? parse_number(*c.opt("margin")).to_double() : 0.0;
    double slab = c.opt("slab") ? parse_number(*c.opt("slab")).to_double() : 1e-12;
    auto t0 = std::chrono::steady_clock::now();
    TransversalityReport r = transversality_scan(x, psi, spec, margin, slab);
    json p{{"check", "transversal"},       {"grid", spec.counts},       {"points", r.points},
           {"slab_points", r.slab_points}, {"slab_tolerance", r.slab_tolerance}, {"required_margin", r.required_margin},
           {"min_abs", r.min_abs},         {"failures", r.failures},    {"worst", opt_witness(r.worst)},
           {"wallclock_ms", ms_since(t0)}};
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu slab points, min |dpsi(X)| %.6g", r.slab_points, r.min_abs);
    return make(pass_if(r.passed()), buf, p);
}

Report run_interp_ham(const Ctx& c) {
    ContactBundle b = c.bundle(0);
    std::size_t hi = 1;
    if (c.a.pos.size() == 4) {
        b.phi = c.poly(1);
        hi = 2;
    }
    std::size_t d = b.chart.dim();
    ScanSpec spec{c.box(d, &b.domain), c.counts(d), ScanMode::Float};
    PointQ center = c.opt("center") ? c.s.points.at(*c.opt("center")) : PointQ(b.chart, std::vector<Rational>(d));
    auto t0 = std::chrono::steady_clock::now();
    HamiltonianInterpolationReport r =
        hamiltonian_interpolation_check(b, c.scalar(hi), c.scalar(hi + 1), c.rho(Rational(1, 4), Rational(1, 2)),
                                        c.int_opt("stages", 1), c.int_opt("samples", 11), spec, center);
    json samples = json::array();
    for (const auto& s : r.samples)
        samples.push_back({{"stage", s.stage}, {"t", s.t}, {"best_delta", s.scan.best_delta}, {"min_margin", s.scan.min_margin}});
    json p{{"check", "interp-ham"},
           {"grid", spec.counts},
           {"best_delta", r.worst_delta},
           {"min_margin", r.worst_margin},
           {"c_alpha", r.c_alpha},
           {"d_alpha", r.d_alpha},
           {"mu0", r.mu0.to_string()},
           {"mu1", r.mu1.to_string()},
           {"start_delta", r.start.best_delta},
           {"end_delta", r.end.best_delta},
           {"findings", findings_json(r.findings)},
           {"samples", samples},
           {"witnesses", json::array()},
           {"wallclock_ms", ms_since(t0)}};
    char buf[96];
    std::snprintf(buf, sizeof buf, "worst delta %.6g, worst margin %.6g", r.worst_delta, r.worst_margin);
    Outcome o = !r.passed() ? Outcome::Fail : r.findings.empty() ? Outcome::Pass : Outcome::Finding;
    return make(o, buf, p);
}

Report run_interp_morse(const Ctx& c) {
    Polynomial p0 = c.poly(0), p1 = c.poly(1);
    require_same_chart(p0.chart(), p1.chart(), "interp-morse");
    const Chart& ch = p0.chart();
    auto t = ch.index_of(c.arg(2));
    if (!t) throw InvalidArgument("'" + c.arg(2) + "' is not a coordinate of the interpolated functions");
    std::size_t d = ch.dim();
    ScanSpec spec{c.box(d), c.counts(d), c.mode()};
    auto t0 = std::chrono::steady_clock::now();
    MorseInterpolationReport r =
        morse_interpolation_check(p0, p1, *t, c.rho(Rational(1, 2), Rational(7, 8)), spec, c.int_opt("samples", 11));
    json p{{"check", "interp-morse"},  {"grid", spec.counts},          {"samples", r.samples},
           {"min_derivative", r.min_derivative}, {"worst", opt_witness(r.worst)}, {"worst_s", r.worst_s},
           {"findings", findings_json(r.findings)}, {"wallclock_ms", ms_since(t0)}};
    std::string sum = r.findings.empty() ? "min dPhi/dt " + std::to_string(r.min_derivative) : r.findings[0].code;
    return make(pass_if(r.passed()), sum, p);
}

Report run_suture(const Ctx& c) {
    double eps = parse_number(c.arg(0)).to_double(), K = parse_number(c.arg(1)).to_double();
    ScanSpec spec{Box::cube(3, Rational(1)), c.counts(3, "21,21,1"), ScanMode::Float};
    SutureHamiltonian v = c.opt("variant").value_or("exp") == "cosh" ? SutureHamiltonian::Cosh : SutureHamiltonian::Exponential;
    auto t0 = std::chrono::steady_clock::now();
    SutureScanReport r = suture_standardization_scan(eps, K, spec, c.int_opt("samples", 11), v);
    json p{{"check", "suture-scan"},
           {"grid", spec.counts},
           {"t_samples", r.t_count},
           {"C", SutureFamily{eps, K, v}.C()},
           {"min_ds_h", r.min_ds_h},
           {"min_side_transversality", r.min_side_transversality},
           {"min_top_transversality", r.min_top_transversality},
           {"worst", opt_witness(r.worst)},
           {"wallclock_ms", ms_since(t0)}};
    char buf[96];
    std::snprintf(buf, sizeof buf, "min dH/ds %.6g", r.min_ds_h);
    return make(pass_if(r.passed()), buf, p);
}

std::size_t to_size(const std::string& t) { return std::stoul(t); }

Report run_catalog(const Ctx& c) {
    const std::string& name = c.arg(0);
    auto model_report = [&](const ModelBundle& m, std::vector<FactCheck> extra = {}) {
        auto facts = self_check(m);
        facts.insert(facts.end(), extra.begin(), extra.end());
        json p{{"model", m.name}, {"chart", m.bundle.chart.to_string()}, {"alpha", m.bundle.alpha.to_string()},
               {"field", m.bundle.X ? json(m.bundle.X->to_string()) : json(nullptr)},
               {"phi", m.bundle.phi ? json(m.bundle.phi->to_string()) : json(nullptr)}, {"facts", facts_json(facts)}};
        std::size_t ok = std::count_if(facts.begin(), facts.end(), [](const FactCheck& f) { return f.ok; });
        return make(pass_if(all_ok(facts)), std::to_string(ok) + "/" + std::to_string(facts.size()) + " facts", p);
    };
    if (name == "darboux") return model_report(darboux(to_size(c.arg(1))));
    if (name == "stdconvex") return model_report(standard_convex(to_size(c.arg(1)), to_size(c.arg(2))));
    if (name == "suturecollar") return model_report(sutured_collar(parse_number(c.arg(1))));
    if (name == "cancelmodel") {
        std::size_t n = to_size(c.arg(1));
        Rational eps = parse_number(c.arg(2));
        auto extra = cancellation_facts(n, eps);
        if (eps.sign() < 0) {
            ModelBundle m = cancellation_model(n, eps);
            GammaLocus g = cancellation_gamma_locus(n, Rational(1, 2), eps, 10);
            LocusReport lr = reeb_on_locus_check(m.bundle.alpha, g.constraints, g.reeb, g.samples);
            extra.push_back({"Reeb field on the dividing set", lr.ok(),
                             std::to_string(lr.passed()) + "/" + std::to_string(lr.samples.size()) + " samples"});
        }
        return model_report(cancellation_model(n, eps), extra);
    }
    if (name == "jet") {
        std::size_t n = to_size(c.arg(1));
        Rational scale = c.a.pos.size() > 2 ? parse_number(c.arg(2)) : Rational(1);
        JetExample j = jet_example(n, jet_quadratic_base(n), scale);
        Report r = model_report(j.model);
        r.payload["displayed_matches"] = j.displayed_matches;
        r.payload["flipped_hessian_matches"] = j.flipped_hessian_matches;
        r.payload["positive_samples"] = j.positive_samples;
        r.payload["samples"] = j.samples;
        if (r.outcome == Outcome::Pass && !j.displayed_matches) {
            r.outcome = Outcome::Finding;
            r.summary += "; displayed p-components differ";
        }
        return r;
    }
    if (name == "weinstein") {
        WeinsteinModel w = weinstein_standard(to_size(c.arg(1)), to_size(c.arg(2)));
        VectorField z = liouville_field(w.lambda);
        bool ok = w.liouville_residual.is_zero() && z == w.X;
        json p{{"model", "weinstein"}, {"lambda", w.lambda.to_string()}, {"field", w.X.to_string()},
               {"phi", w.phi.to_string()}, {"liouville_residual", w.liouville_residual.to_string()},
               {"solved_field", z.to_string()}};
        return make(pass_if(ok), ok ? "Liouville" : "not Liouville", p);
    }
    if (name == "sphere") {
        SphereReport r = sphere_example_report(to_size(c.arg(1)));
        using K = IdealIdentity::Kind;
        bool exact = r.tangency.kind == K::Equal && r.hamiltonian.kind == K::Equal && r.dphi_norm.kind == K::Equal;
        bool fitted = r.xh_norm.kind != K::Differ && r.dphi_xh.kind != K::Differ &&
                      (r.xh_norm.kind == K::Equal || r.xh_norm.constant.sign() > 0) &&
                      (r.dphi_xh.kind == K::Equal || r.dphi_xh.constant.sign() > 0);
        json p{{"model", "sphere"},
               {"g", r.g.to_string()},
               {"field", r.xh.to_string()},
               {"tangency", identity_json(r.tangency)},
               {"hamiltonian", identity_json(r.hamiltonian)},
               {"dphi_norm", identity_json(r.dphi_norm)},
               {"xh_norm", identity_json(r.xh_norm)},
               {"dphi_xh", identity_json(r.dphi_xh)}};
        bool scaled = r.xh_norm.kind == K::EqualUpToConstant || r.dphi_xh.kind == K::EqualUpToConstant;
        Outcome o = !(exact && fitted) ? Outcome::Fail : scaled ? Outcome::Finding : Outcome::Pass;
        return make(o, "|X_H|^2 constant " + r.xh_norm.constant.to_string() + ", dphi(X_H) constant " +
                           r.dphi_xh.constant.to_string(), p);
    }
    if (name == "suturecheck") {
        SutureCheck r = suture_model_check();
        json p{{"shear_residual", r.shear_residual.to_string()}, {"identity_residual", r.identity_residual.to_string()},
               {"wrong_shear_residual", r.wrong_shear_residual.to_string()}};
        return make(pass_if(r.passed()), "shear residual " + r.shear_residual.to_string(), p);
    }
    // handleregion
    HandleRegion reg = make_handle_region(to_size(c.arg(1)), to_size(c.arg(2)), parse_number(c.arg(3)));
    Chart ch = darboux_chart(reg.n);
    bool origin = handle_region_membership(reg, PointQ(ch, std::vector<Rational>(ch.dim())));
    json p{{"origin_inside", origin}, {"sup", reg.sup}};
    if (auto pt = c.opt("point")) {
        std::vector<Rational> x;
        for (const auto& t : split_commas(*pt)) x.push_back(parse_number(t));
        PointQ q(ch, x);
        auto [rl, rc] = handle_radii_squared(reg, q);
        p["point"] = point_json(x);
        p["inside"] = handle_region_membership(reg, q);
        p["r_l_squared"] = rl.to_string();
        p["r_c_squared"] = rc.to_string();
    }
    return make(pass_if(origin), origin ? "origin inside" : "origin outside", p);
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json validation_json(const ValidationReport& v) {
    json f = json::array();
    for (const auto& x : v.findings) f.push_back({{"code", x.code}, {"detail", x.detail}});
    return {{"valid", v.valid()}, {"euler", v.euler}, {"findings", f}};
}

Report run_handles(const Ctx& c) {
    std::filesystem::path path = c.arg(0);
    if (path.is_relative() && !c.s.base_dir.empty()) path = c.s.base_dir / path;
    const std::string& action = c.arg(1);
    std::string text = read_file(path);
    try {
        if (action == "fromopenbook") {
            AbstractOpenBook b = open_book_from_json(text);
            HandleDecomposition d = from_open_book(b, static_cast<long>(to_size(c.arg(2))));
            return make(Outcome::Pass, std::to_string(d.handles.size()) + " handles",
                        {{"decomposition", json::parse(decomposition_to_json(d))}});
        }
        HandleDecomposition d = decomposition_from_json(text);
        if (action == "validate") {
            ValidationReport v = validate(d);
            return make(pass_if(v.valid()), v.valid() ? "valid, euler " + std::to_string(v.euler) : v.findings[0].code,
                        validation_json(v));
        }
        if (action == "split") {
            RearrangeResult r = rearrange_split(d);
            return make(Outcome::Pass, "notes: " + std::to_string(r.notes.size()),
                        {{"decomposition", json::parse(decomposition_to_json(r.decomposition))}, {"notes", r.notes}});
        }
        if (action == "cancel") {
            HandleDecomposition e = cancel_pair(d, to_size(c.arg(2)), to_size(c.arg(3)));
            return make(Outcome::Pass, std::to_string(e.handles.size()) + " handles left",
                        {{"decomposition", json::parse(decomposition_to_json(e))}});
        }
        if (action == "dual") {
            return make(Outcome::Pass, "dual", {{"decomposition", json::parse(decomposition_to_json(dualize(d)))}});
        }
        if (action == "openbook") {
            std::optional<std::vector<std::size_t>> cert;
            if (auto v = c.opt("certificate")) {
                cert.emplace();
                for (const auto& t : split_commas(*v)) cert->push_back(to_size(t));
            }
            AbstractOpenBook b = to_open_book(d, cert);
            return make(Outcome::Pass, std::to_string(b.page.size()) + " page handles",
                        {{"open_book", json::parse(open_book_to_json(b))}});
        }
        // toweinstein
        auto w = subcritical_to_weinstein(d.n, d.handles);
        json a = json::array();
        for (const auto& h : w) a.push_back({{"index", h.index}, {"framing", h.framing}, {"id", h.id}});
        return make(Outcome::Pass, std::to_string(w.size()) + " Weinstein handles", {{"handles", a}});
    } catch (const HandleMoveError& e) {
        return make(Outcome::Fail, e.code(), {{"error", e.code()}, {"message", e.what()}});
    }
}

using Check = std::function<void(const Statement&, const Args&, const Session&)>;

struct CommandSpec {
    std::vector<std::vector<Ref>> patterns;
    std::vector<std::string> options;
    Report (*run)(const Ctx&);
    Check extra;
};

void require_bundle_parts(const Session& s, const Word& w, bool x, bool phi) {
    auto it = s.bundles.find(w.text);
    if (it == s.bundles.end()) return;
    if (x && !it->second.X) word_error(w, "bundle with a field");
    if (phi && !it->second.phi) word_error(w, "bundle with a function");
}

const std::map<std::string, std::vector<std::vector<Ref>>>& catalog_patterns() {
    using R = Ref;
    static const std::map<std::string, std::vector<std::vector<Ref>>> p{
        {"darboux", {{R::Int}}},
        {"stdconvex", {{R::Int, R::Int}}},
        {"weinstein", {{R::Int, R::Int}}},
        {"sphere", {{R::Int}}},
        {"jet", {{R::Int}, {R::Int, R::Number}}},
        {"cancelmodel", {{R::Int, R::Number}}},
        {"suturecollar", {{R::Number}}},
        {"suturecheck", {{}}},
        {"handleregion", {{R::Int, R::Int, R::Number}}},
    };
    return p;
}

void match_patterns(const std::vector<std::vector<Ref>>& patterns, const std::vector<const Word*>& pos, std::size_t skip,
                    const Session& s, const Word& head) {
    const std::vector<Ref>* best = nullptr;
    std::size_t n = pos.size() - skip;
    for (const auto& p : patterns) {
        if (p.size() != n) continue;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) ok = matches(p[i], pos[skip + i]->text, s);
        if (ok) return;
        if (!best) best = &p;
    }
    if (!best) {
        std::string counts;
        for (const auto& p : patterns) counts += (counts.empty() ? "" : " or ") + std::to_string(p.size());
        throw ParseError(head.line, head.column, counts + " arguments", std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!matches((*best)[i], pos[skip + i]->text, s)) word_error(*pos[skip + i], ref_name((*best)[i]));
}

const std::map<std::string, CommandSpec>& commands() {
    using R = Ref;
    static const std::map<std::string, CommandSpec> table{
        {"check",
         {{{R::Any, R::FormOrBundle}}, {"grid"}, run_check,
          [](const Statement&, const Args& a, const Session&) {
              if (a.pos[0]->text != "contact") word_error(*a.pos[0], "'contact'");
          }}},
        {"reeb", {{{R::FormOrBundle}}, {}, run_reeb, nullptr}},
        {"ham2field", {{{R::FormOrBundle, R::Scalar}}, {}, run_ham2field, nullptr}},
        {"field2ham", {{{R::FormOrBundle, R::Field}}, {}, run_field2ham, nullptr}},
        {"mu", {{{R::FormOrBundle, R::Field}}, {}, run_mu, nullptr}},
        {"critpt",
         {{{R::Bundle, R::Point}, {R::FormOrBundle, R::Field, R::Point}}, {}, run_critpt,
          [](const Statement&, const Args& a, const Session& s) {
              if (a.pos.size() == 2) require_bundle_parts(s, *a.pos[0], true, false);
          }}},
        {"liouville", {{{R::Form}}, {}, run_liouville, nullptr}},
        {"isotropic", {{{R::Map, R::Form}}, {}, run_isotropic, nullptr}},
        {"coiso-at", {{{R::Form, R::Map, R::Point}}, {}, run_coiso, nullptr}},
        {"foliation-at", {{{R::Form, R::Map, R::Point}}, {}, run_foliation, nullptr}},
        {"dividing",
         {{{R::Map, R::Bundle}, {R::Map, R::FormOrBundle, R::Field}}, {"at", "samples"}, run_dividing,
          [](const Statement&, const Args& a, const Session& s) {
              if (a.pos.size() == 2) require_bundle_parts(s, *a.pos[1], true, false);
          }}},
        {"gradlike",
         {{{R::Bundle}, {R::FormOrBundle, R::Field, R::Poly}}, {"box", "grid", "mode", "critical", "radius"}, run_gradlike,
          [](const Statement&, const Args& a, const Session& s) {
              if (a.pos.size() == 1) require_bundle_parts(s, *a.pos[0], true, true);
          }}},
        {"transversal", {{{R::Field, R::Poly}}, {"box", "grid", "margin", "slab"}, run_transversal, nullptr}},
        {"interp-ham",
         {{{R::Bundle, R::Scalar, R::Scalar}, {R::FormOrBundle, R::Poly, R::Scalar, R::Scalar}},
          {"box", "grid", "center", "rho", "stages", "samples"}, run_interp_ham,
          [](const Statement&, const Args& a, const Session& s) {
              if (a.pos.size() == 3) require_bundle_parts(s, *a.pos[0], false, true);
          }}},
        {"interp-morse", {{{R::Poly, R::Poly, R::Any}}, {"box", "grid", "mode", "rho", "samples"}, run_interp_morse, nullptr}},
        {"suture-scan", {{{R::Number, R::Number}}, {"grid", "samples", "variant"}, run_suture, nullptr}},
        {"catalog",
         {{}, {"point"}, run_catalog,
          [](const Statement& st, const Args& a, const Session& s) {
              if (a.pos.empty()) throw ParseError(st.words[0].line, st.words[0].column, "catalog model name");
              auto it = catalog_patterns().find(a.pos[0]->text);
              if (it == catalog_patterns().end()) word_error(*a.pos[0], "catalog model name");
              match_patterns(it->second, a.pos, 1, s, *a.pos[0]);
          }}},
        {"handles",
         {{}, {"certificate"}, run_handles,
          [](const Statement& st, const Args& a, const Session& s) {
              static const std::map<std::string, std::vector<Ref>> acts{
                  {"validate", {}}, {"split", {}}, {"cancel", {Ref::Int, Ref::Int}}, {"dual", {}},
                  {"openbook", {}}, {"fromopenbook", {Ref::Int}}, {"toweinstein", {}}};
              if (a.pos.size() < 2) throw ParseError(st.words[0].line, st.words[0].column, "handles FILE ACTION");
              auto it = acts.find(a.pos[1]->text);
              if (it == acts.end()) word_error(*a.pos[1], "validate, split, cancel, dual, openbook, fromopenbook or toweinstein");
              match_patterns({it->second}, a.pos, 2, s, *a.pos[1]);
              if (a.opt.count("certificate") && a.pos[1]->text != "openbook")
                  word_error(*a.opt.at("certificate"), "--certificate only with openbook");
          }}},
    };
    return table;
}

}  // namespace

bool is_command(std::string_view name) { return commands().count(std::string(name)) > 0; }

void validate_command(const Statement& st, const Session& s) {
    const Word& head = st.words.at(0);
    auto it = commands().find(head.text);
    if (it == commands().end()) word_error(head, "command");
    const CommandSpec& spec = it->second;
    Args a = split_args(st.words, 1);
    for (const auto& [k, w] : a.opt) {
        if (std::find(spec.options.begin(), spec.options.end(), k) == spec.options.end()) {
            const Word& flag = *(w - 1);
            word_error(flag, spec.options.empty() ? std::string("no options") : "an option of " + head.text);
        }
        check_option(k, *w, s);
    }
    if (!spec.patterns.empty()) match_patterns(spec.patterns, a.pos, 0, s, head);
    if (spec.extra) spec.extra(st, a, s);
}

ContactBundle build_bundle(const Statement& st, const Session& s) {
    Args a = split_args(st.words, 0);
    for (const auto& [k, w] : a.opt) {
        if (k != "box") word_error(*(w - 1), "--box");
        check_option(k, *w, s);
    }
    if (a.pos.empty()) throw ParseError(st.line, 1, "bundle specification");
    ContactBundle b;
    const Word& first = *a.pos[0];
    if (first.text == "catalog") {
        if (a.pos.size() < 2) word_error(first, "catalog model name");
        const std::string& name = a.pos[1]->text;
        auto it = catalog_patterns().find(name);
        if (it == catalog_patterns().end() || name == "weinstein" || name == "suturecheck" || name == "handleregion")
            word_error(*a.pos[1], "darboux, stdconvex, sphere, jet, cancelmodel or suturecollar");
        match_patterns(it->second, a.pos, 2, s, *a.pos[1]);
        auto arg = [&](std::size_t i) { return a.pos[2 + i]->text; };
        if (name == "darboux") b = darboux(to_size(arg(0))).bundle;
        else if (name == "stdconvex") b = standard_convex(to_size(arg(0)), to_size(arg(1))).bundle;
        else if (name == "cancelmodel") b = cancellation_model(to_size(arg(0)), parse_number(arg(1))).bundle;
        else if (name == "suturecollar") b = sutured_collar(parse_number(arg(0))).bundle;
        else if (name == "jet") {
            std::size_t n = to_size(arg(0));
            b = jet_example(n, jet_quadratic_base(n), a.pos.size() > 3 ? parse_number(arg(1)) : Rational(1)).model.bundle;
        } else {
            SphereReport r = sphere_example_report(to_size(arg(0)));
            b = ContactBundle(r.alpha, r.xh, r.phi);
        }
    } else {
        if (!s.forms.count(first.text)) word_error(first, "form name or 'catalog'");
        std::optional<VectorField> x;
        std::optional<Polynomial> phi;
        for (std::size_t i = 1; i < a.pos.size(); ++i) {
            const Word& w = *a.pos[i];
            if (s.fields.count(w.text) && !x) {
                x = s.fields.at(w.text);
            } else if (s.scalars.count(w.text) && !phi && s.scalars.at(w.text).is_polynomial()) {
                phi = s.scalars.at(w.text).num();
            } else {
                word_error(w, "field or polynomial scalar name");
            }
        }
        try {
            b = ContactBundle(s.forms.at(first.text), x, phi);
        } catch (const Error& e) {
            word_error(first, std::string("a contact bundle (") + e.what() + ")");
        }
    }
    if (a.opt.count("box")) b.domain = parse_box(a.opt.at("box")->text, b.chart.dim());
    return b;
}

ExecResult execute(const Session& s, const ExecOptions& o) {
    ExecResult out;
    std::size_t ordinal = 0;
    for (const auto& st : s.statements) {
        if (st.kind != Statement::Kind::Command) continue;
        const CommandSpec& spec = commands().at(st.words[0].text);
        Ctx ctx{s, o, st, split_args(st.words, 1), ordinal++};
        std::string echo;
        for (const auto& w : st.words) echo += (echo.empty() ? "" : " ") + w.text;
        auto t0 = std::chrono::steady_clock::now();
        try {
            Report r = spec.run(ctx);
            r.command = echo;
            r.timing_ms = ms_since(t0);
            if (r.outcome == Outcome::Fail) out.exit_code = 1;
            out.reports.push_back(std::move(r));
        } catch (const std::exception& e) {
            out.exit_code = 3;
            out.error = "line " + std::to_string(st.line) + ": " + echo + ": " + e.what();
            return out;
        }
    }
    return out;
}

namespace {

void strip_wallclock(json& j) {
    if (j.is_object()) {
        j.erase("wallclock_ms");
        for (auto& [k, v] : j.items()) strip_wallclock(v);
    } else if (j.is_array()) {
        for (auto& v : j) strip_wallclock(v);
    }
}

}  // namespace

std::string emit_report(const std::vector<Report>& reports, Format format, bool timing) {
    if (format == Format::Json) {
        json a = json::array();
        for (const auto& r : reports) {
            json e{{"command", r.command}, {"outcome", outcome_name(r.outcome)}, {"payload", r.payload}};
            if (timing) {
                e["timing_ms"] = r.timing_ms;
            } else {
                strip_wallclock(e["payload"]);
            }
            a.push_back(std::move(e));
        }
        return a.dump(2) + "\n";
    }
    std::ostringstream os;
    for (const auto& r : reports) {
        os << "[" << outcome_name(r.outcome) << "] " << r.command;
        if (timing) {
            char buf[32];
            std::snprintf(buf, sizeof buf, " (%.1f ms)", r.timing_ms);
            os << buf;
        }
        os << "\n    " << r.summary << "\n";
    }
    return os.str();
}

}  // namespace ccw::cli
