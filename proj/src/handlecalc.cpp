#include "ccw/handlecalc.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "ccw/errors.hpp"

namespace ccw {

using nlohmann::json;

FramingGroup FramingGroup::cyclic(long m) {
    if (m < 1) throw InvalidArgument("cyclic group order must be >= 1");
    if (m == 1) return trivial();
    return {Kind::Cyclic, m};
}

long FramingGroup::reduce(long framing) const {
    switch (kind) {
        case Kind::Trivial: return 0;
        case Kind::Cyclic: return ((framing % order) + order) % order;
        default: return framing;
    }
}

std::string FramingGroup::to_string() const {
    switch (kind) {
        case Kind::Z: return "Z";
        case Kind::Trivial: return "Trivial";
        case Kind::Cyclic: return "Cyclic(" + std::to_string(order) + ")";
        default: return "Unsupported";
    }
}

FramingGroup framing_group(long k, long l) {
    if (k < 0 || l < 0) throw InvalidArgument("framing group needs k >= 0 and l >= 0");
    if (k == 0) return FramingGroup::trivial();
    // U(0) is the trivial group.
    if (l == 0) return FramingGroup::trivial();
    if (k <= 2 * l - 1) return (k % 2 == 1) ? FramingGroup::z() : FramingGroup::trivial();
    if (k == 2 * l) {
        if (l > 20) return FramingGroup::unsupported();
        long f = 1;
        for (long i = 2; i <= l; ++i) f *= i;
        return FramingGroup::cyclic(f);
    }
    return FramingGroup::unsupported();
}

FramingGroup handle_framing_group(long n, long index) {
    if (index < 0 || index > 2 * n + 1) throw InvalidArgument("handle index out of range");
    long k = index <= n ? index : 2 * n + 1 - index;
    if (k == 0) return FramingGroup::trivial();
    return framing_group(k - 1, n - k);
}

long Handle::framing() const {
    return std::visit([](const auto& a) { return a.framing; }, attach);
}

const std::vector<std::string>& Handle::tags() const {
    return std::visit([](const auto& a) -> const std::vector<std::string>& { return a.tags; }, attach);
}

Handle sub_handle(long n, long index, const Rational& level, long framing, std::string id) {
    if (index < 0 || index > n) throw InvalidArgument("subcritical index must lie in [0, n]");
    FramedSphere s;
    s.id = id.empty() ? "S" + std::to_string(index) : std::move(id);
    s.sphere_dim = index - 1;
    s.framing = handle_framing_group(n, index).reduce(framing);
    return {index, level, s};
}

Handle sup_handle(long n, long index, const Rational& level, long framing, std::string equator) {
    if (index <= n || index > 2 * n + 1) throw InvalidArgument("supercritical index must lie in [n+1, 2n+1]");
    BalancedCoisotropicData b;
    b.equator = equator.empty() ? "E" + std::to_string(index) : std::move(equator);
    b.plus = "D+";
    b.minus = "D-";
    b.k = index - 1;
    b.r = 2 * n - b.k;
    b.framing = handle_framing_group(n, index).reduce(framing);
    return {index, level, b};
}

long euler_number(const HandleDecomposition& d) {
    long e = 0;
    for (const auto& h : d.handles) e += (h.index % 2 == 0) ? 1 : -1;
    return e;
}

bool is_split(const HandleDecomposition& d) {
    bool seen_sup = false;
    for (const auto& h : d.handles) {
        if (h.index > d.n)
            seen_sup = true;
        else if (seen_sup)
            return false;
    }
    return true;
}

ValidationReport validate(const HandleDecomposition& d) {
    ValidationReport r;
    auto add = [&](std::string code, std::string detail) { r.findings.push_back({std::move(code), std::move(detail)}); };
    if (d.n < 1) add("n-range", "ambient n must be >= 1");
    for (std::size_t i = 0; i < d.handles.size(); ++i) {
        const Handle& h = d.handles[i];
        std::string at = "handle " + std::to_string(i);
        if (h.index < 0 || h.index > 2 * d.n + 1) {
            add("index-range", at + " has index " + std::to_string(h.index));
            continue;
        }
        if (i > 0 && !(d.handles[i - 1].level < h.level)) add("level-order", at + " is not above its predecessor");
        bool sub = h.index <= d.n;
        if (sub != h.is_sphere()) {
            add("attach-variant", at + (sub ? " is subcritical but carries balanced data"
                                            : " is supercritical but carries a framed sphere"));
            continue;
        }
        FramingGroup g = handle_framing_group(d.n, h.index);
        if (g.reduce(h.framing()) != h.framing()) add("framing-normal-form", at + " framing is not reduced in " + g.to_string());
        if (sub) {
            const auto& s = std::get<FramedSphere>(h.attach);
            if (s.sphere_dim != h.index - 1) add("sphere-dim", at + " attaching sphere has the wrong dimension");
        } else {
            const auto& b = std::get<BalancedCoisotropicData>(h.attach);
            if (b.k != h.index - 1 || b.r != 2 * d.n - b.k || b.k < d.n)
                add("balanced-dims", at + " balanced data needs k = index - 1 >= n and r = 2n - k");
        }
    }
    for (std::size_t t = 0; t < d.trajectories.size(); ++t) {
        const Trajectory& e = d.trajectories[t];
        std::string at = "trajectory " + std::to_string(t);
        if (e.from >= d.handles.size() || e.to >= d.handles.size()) {
            add("trajectory-range", at + " refers to a missing handle");
            continue;
        }
        if (!(d.handles[e.from].level < d.handles[e.to].level)) add("trajectory-order", at + " does not go upward");
    }
    r.euler = euler_number(d);
    return r;
}

RearrangeResult rearrange_split(const HandleDecomposition& d) {
    RearrangeResult out{d, {}};
    if (is_split(d)) return out;
    const std::size_t m = d.handles.size();
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < m; ++i)
        if (d.handles[i].index <= d.n) order.push_back(i);
    for (std::size_t i = 0; i < m; ++i)
        if (d.handles[i].index > d.n) order.push_back(i);
    std::vector<std::size_t> where(m);
    HandleDecomposition& r = out.decomposition;
    r.handles.clear();
    for (std::size_t p = 0; p < m; ++p) {
        where[order[p]] = p;
        Handle h = d.handles[order[p]];
        h.level = Rational(static_cast<long>(p + 1));
        r.handles.push_back(std::move(h));
    }
    out.notes.push_back("levels relabeled 1.." + std::to_string(m));
    r.trajectories.clear();
    for (const auto& e : d.trajectories) {
        Trajectory t = e;
        t.from = where[e.from];
        t.to = where[e.to];
        if (t.from >= t.to) {
            out.notes.push_back("dropped trajectory " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                                " between reordered handles");
            continue;
        }
        r.trajectories.push_back(t);
    }
    return out;
}

namespace {

bool has_tag(const std::vector<std::string>& tags, const std::string& t) {
    return std::find(tags.begin(), tags.end(), t) != tags.end();
}

// Splits "name(arg)" into (name, arg); plain tags give an empty argument.
std::pair<std::string, std::string> parse_tag(const std::string& t) {
    auto open = t.find('(');
    if (open == std::string::npos) return {t, {}};
    if (t.back() != ')' || open == 0) throw InvalidArgument("malformed relation tag '" + t + "'");
    return {t.substr(0, open), t.substr(open + 1, t.size() - open - 2)};
}

}  // namespace

bool is_trivial_bypass(const BypassData& b) {
    if (b.lambda_n.empty() || b.lambda_n1.empty()) throw InvalidArgument("bypass data needs both sphere labels");
    bool pushoff = false, meridian = false;
    for (const auto& t : b.tags) {
        auto [name, arg] = parse_tag(t);
        if (name == "reeb_pushoff" && arg == b.lambda_n) pushoff = true;
        if (name == "meridian_unknot" && arg == b.lambda_n) meridian = true;
    }
    bool model1 = pushoff && has_tag(b.tags, "standard_annulus");
    bool model2 = meridian && has_tag(b.tags, "standard_disk") && has_tag(b.tags, "slice_annulus");
    return model1 || model2;
}

BypassData bypass_data(const Handle& lower, const Handle& upper) {
    if (!lower.is_sphere() || upper.is_sphere()) throw InvalidArgument("bypass pair needs a framed sphere below balanced data");
    const auto& s = std::get<FramedSphere>(lower.attach);
    const auto& b = std::get<BalancedCoisotropicData>(upper.attach);
    return {s.id, b.equator, b.plus, b.minus, b.tags};
}

HandleDecomposition cancel_pair(const HandleDecomposition& d, std::size_t i, std::size_t j) {
    if (i >= d.handles.size() || j >= d.handles.size() || i == j) throw InvalidArgument("cancel_pair positions out of range");
    const Handle& lo = d.handles[i];
    const Handle& hi = d.handles[j];
    if (hi.index != lo.index + 1)
        throw HandleMoveError("NotAdjacentIndices", "indices " + std::to_string(lo.index) + " and " +
                                                        std::to_string(hi.index) + " do not differ by one");
    bool loose = has_tag(lo.tags(), "loose") || has_tag(hi.tags(), "loose");
    long count = 0;
    bool transverse = true, found = false;
    for (const auto& e : d.trajectories) {
        if (e.from != i || e.to != j) continue;
        found = true;
        count += e.count;
        transverse = transverse && e.transverse;
    }
    bool ok = found && (loose ? (count == 1 || count == -1) : (count == 1 && transverse));
    if (!ok)
        throw HandleMoveError("TrajectoryCountNotOne", found ? "trajectory count " + std::to_string(count) +
                                                                   (transverse ? "" : " (not transverse)")
                                                             : "no trajectory annotation between the handles");
    if (lo.index == d.n && !is_trivial_bypass(bypass_data(lo, hi)))
        throw HandleMoveError("MiddleDimensionNotTrivialBypass", "the pair does not match a trivial bypass model");

    HandleDecomposition out;
    out.n = d.n;
    out.bottom = d.bottom;
    out.monodromy = d.monodromy;
    std::vector<std::size_t> where(d.handles.size(), SIZE_MAX);
    for (std::size_t p = 0; p < d.handles.size(); ++p) {
        if (p == i || p == j) continue;
        where[p] = out.handles.size();
        out.handles.push_back(d.handles[p]);
    }
    for (const auto& e : d.trajectories) {
        if (where[e.from] == SIZE_MAX || where[e.to] == SIZE_MAX) continue;
        out.trajectories.push_back({where[e.from], where[e.to], e.count, e.transverse});
    }
    return out;
}

namespace {

Handle dual_handle(long n, const Handle& h) {
    Handle out;
    out.index = 2 * n + 1 - h.index;
    out.level = -h.level;
    if (h.is_sphere()) {
        const auto& s = std::get<FramedSphere>(h.attach);
        BalancedCoisotropicData b;
        b.equator = s.id;
        b.plus = s.dual_minus;
        b.minus = s.dual_plus;
        b.k = out.index - 1;
        b.r = 2 * n - b.k;
        b.framing = s.framing;
        b.tags = s.tags;
        out.attach = b;
    } else {
        const auto& b = std::get<BalancedCoisotropicData>(h.attach);
        FramedSphere s;
        s.id = b.equator;
        s.sphere_dim = out.index - 1;
        s.framing = b.framing;
        s.tags = b.tags;
        s.dual_plus = b.minus;
        s.dual_minus = b.plus;
        out.attach = s;
    }
    return out;
}

}  // namespace

HandleDecomposition dualize(const HandleDecomposition& d) {
    HandleDecomposition out;
    out.n = d.n;
    out.bottom = d.bottom;
    out.monodromy = d.monodromy;
    const std::size_t m = d.handles.size();
    for (std::size_t p = m; p-- > 0;) out.handles.push_back(dual_handle(d.n, d.handles[p]));
    for (const auto& e : d.trajectories) out.trajectories.push_back({m - 1 - e.to, m - 1 - e.from, e.count, e.transverse});
    return out;
}

std::vector<WeinsteinHandle> subcritical_to_weinstein(long n, const std::vector<Handle>& handles) {
    std::vector<WeinsteinHandle> out;
    for (const auto& h : handles) {
        if (h.index > n || !h.is_sphere())
            throw HandleMoveError("SupercriticalHandle", "index " + std::to_string(h.index) + " exceeds n = " + std::to_string(n));
        const auto& s = std::get<FramedSphere>(h.attach);
        out.push_back({h.index, handle_framing_group(n, h.index).reduce(s.framing), s.id});
    }
    return out;
}

AbstractOpenBook to_open_book(const HandleDecomposition& d, const std::optional<std::vector<std::size_t>>& certificate) {
    if (!is_split(d)) throw HandleMoveError("NotSplit", "subcritical handles must precede supercritical ones");
    HandleDecomposition prefix{d.n, {}, {}, {}, {}}, suffix{d.n, {}, {}, {}, {}};
    for (const auto& h : d.handles) (h.index <= d.n ? prefix : suffix).handles.push_back(h);
    HandleDecomposition dual = dualize(suffix);
    const std::size_t m = prefix.handles.size();
    if (dual.handles.size() != m)
        throw HandleMoveError("PageMismatch", "dual supercritical list has " + std::to_string(dual.handles.size()) +
                                                  " handles, page has " + std::to_string(m));
    std::vector<std::size_t> cert(m);
    for (std::size_t i = 0; i < m; ++i) cert[i] = i;
    if (certificate) {
        if (certificate->size() != m) throw HandleMoveError("PageMismatch", "certificate has the wrong length");
        cert = *certificate;
        std::vector<char> used(m, 0);
        for (auto c : cert) {
            if (c >= m || used[c]) throw HandleMoveError("PageMismatch", "certificate is not a bijection");
            used[c] = 1;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        const Handle& a = prefix.handles[i];
        const Handle& b = dual.handles[cert[i]];
        if (a.index != b.index || a.framing() != b.framing())
            throw HandleMoveError("PageMismatch", "page handle " + std::to_string(i) + " (index " +
                                                      std::to_string(a.index) + ") has no matching dual handle");
    }
    return {subcritical_to_weinstein(d.n, prefix.handles), d.monodromy};
}

HandleDecomposition from_open_book(const AbstractOpenBook& b, long n) {
    if (n < 1) throw InvalidArgument("open book needs n >= 1");
    HandleDecomposition prefix;
    prefix.n = n;
    for (std::size_t i = 0; i < b.page.size(); ++i) {
        const auto& w = b.page[i];
        if (w.index < 0 || w.index > n) throw InvalidArgument("page handle index " + std::to_string(w.index) + " exceeds n");
        Handle h = sub_handle(n, w.index, Rational(static_cast<long>(i + 1)), w.framing, "x");
        std::get<FramedSphere>(h.attach).id = w.id;
        prefix.handles.push_back(std::move(h));
    }
    HandleDecomposition dual = dualize(prefix);
    HandleDecomposition out = prefix;
    out.monodromy = b.monodromy;
    const long m = static_cast<long>(prefix.handles.size());
    for (std::size_t p = 0; p < dual.handles.size(); ++p) {
        Handle h = dual.handles[p];
        h.level = Rational(m + 1 + static_cast<long>(p));
        out.handles.push_back(std::move(h));
    }
    return out;
}

namespace {

json level_json(const Rational& r) {
    if (r.is_integer() && r.num().fits_slong_p()) return r.num().get_si();
    return r.to_string();
}

Rational level_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw InvalidArgument("level must be an integer or a rational string");
}

json attach_json(const Handle& h) {
    json a;
    if (h.is_sphere()) {
        const auto& s = std::get<FramedSphere>(h.attach);
        a["kind"] = "sphere";
        a["id"] = s.id;
        a["framing"] = s.framing;
        a["tags"] = s.tags;
        if (!s.dual_plus.empty()) a["dual_plus"] = s.dual_plus;
        if (!s.dual_minus.empty()) a["dual_minus"] = s.dual_minus;
    } else {
        const auto& b = std::get<BalancedCoisotropicData>(h.attach);
        a["kind"] = "balanced";
        a["id"] = b.equator;
        a["framing"] = b.framing;
        a["tags"] = b.tags;
        a["plus"] = b.plus;
        a["minus"] = b.minus;
        a["k"] = b.k;
        a["r"] = b.r;
    }
    return a;
}

Handle handle_from_json(long n, const json& j) {
    Handle h;
    h.index = j.at("index").get<long>();
    h.level = level_from_json(j.at("level"));
    const json& a = j.at("attach");
    std::string kind = a.value("kind", h.index <= n ? "sphere" : "balanced");
    std::vector<std::string> tags = a.value("tags", std::vector<std::string>{});
    long framing = a.value("framing", 0L);
    if (kind == "sphere") {
        FramedSphere s;
        s.id = a.value("id", std::string{});
        s.sphere_dim = h.index - 1;
        s.framing = framing;
        s.tags = tags;
        s.dual_plus = a.value("dual_plus", std::string{});
        s.dual_minus = a.value("dual_minus", std::string{});
        h.attach = s;
    } else if (kind == "balanced") {
        BalancedCoisotropicData b;
        b.equator = a.value("id", std::string{});
        b.plus = a.value("plus", std::string{});
        b.minus = a.value("minus", std::string{});
        b.k = a.value("k", h.index - 1);
        b.r = a.value("r", 2 * n - b.k);
        b.framing = framing;
        b.tags = tags;
        h.attach = b;
    } else {
        throw InvalidArgument("unknown attach kind '" + kind + "'");
    }
    return h;
}

template <class Fn>
auto parse_json_text(const std::string& text, Fn&& fn) {
    try {
        return fn(json::parse(text));
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("bad JSON: ") + e.what());
    }
}

}  // namespace

std::string decomposition_to_json(const HandleDecomposition& d, int indent) {
    json j;
    j["n"] = d.n;
    j["handles"] = json::array();
    for (const auto& h : d.handles) j["handles"].push_back({{"index", h.index}, {"level", level_json(h.level)}, {"attach", attach_json(h)}});
    j["trajectories"] = json::array();
    for (const auto& e : d.trajectories)
        j["trajectories"].push_back({{"from", e.from}, {"to", e.to}, {"count", e.count}, {"transverse", e.transverse}});
    if (!d.bottom.empty()) j["bottom"] = d.bottom;
    if (!d.monodromy.empty()) j["monodromy"] = d.monodromy;
    return j.dump(indent);
}

HandleDecomposition decomposition_from_json(const std::string& text) {
    return parse_json_text(text, [](const json& j) {
        HandleDecomposition d;
        d.n = j.at("n").get<long>();
        for (const auto& h : j.value("handles", json::array())) d.handles.push_back(handle_from_json(d.n, h));
        for (const auto& e : j.value("trajectories", json::array()))
            d.trajectories.push_back({e.at("from").get<std::size_t>(), e.at("to").get<std::size_t>(), e.value("count", 1L),
                                      e.value("transverse", true)});
        d.bottom = j.value("bottom", std::string{});
        d.monodromy = j.value("monodromy", std::vector<std::string>{});
        return d;
    });
}

std::string open_book_to_json(const AbstractOpenBook& b, int indent) {
    json j;
    j["page"] = json::array();
    for (const auto& w : b.page) {
        json h{{"index", w.index}, {"framing", w.framing}};
        if (!w.id.empty()) h["id"] = w.id;
        j["page"].push_back(h);
    }
    j["monodromy"] = b.monodromy;
    return j.dump(indent);
}

AbstractOpenBook open_book_from_json(const std::string& text) {
    return parse_json_text(text, [](const json& j) {
        AbstractOpenBook b;
        for (const auto& h : j.value("page", json::array()))
            b.page.push_back({h.at("index").get<long>(), h.value("framing", 0L), h.value("id", std::string{})});
        b.monodromy = j.value("monodromy", std::vector<std::string>{});
        return b;
    });
}

}  // namespace ccw
