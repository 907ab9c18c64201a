#include "ccw/submanifolds.hpp"

#include "ccw/errors.hpp"

namespace ccw {

namespace {

Polynomial numerator_mod(const RationalFunction& f, const std::optional<Polynomial>& g) {
    Polynomial n = f.simplified().num();
    return g ? mod_reduce(n, *g) : n;
}

Rational dot(const QVector& a, const QVector& b) {
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Rational omega_at(const QMatrix& w, const QVector& a, const QVector& b) {
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_zero()) s += a[i] * w[i][j] * b[j];
    }
    return s;
}

QMatrix eval_matrix(const std::vector<std::vector<RationalFunction>>& m, std::span<const Rational> x) {
    QMatrix out(m.size(), QVector(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) out[i][j] = m[i][j].evaluate(x);
    return out;
}

QVector eval_vector(const std::vector<RationalFunction>& v, std::span<const Rational> x) {
    QVector out;
    for (const auto& c : v) out.push_back(c.evaluate(x));
    return out;
}

QVector combine(const std::vector<QVector>& basis, const QVector& coeffs) {
    QVector out(basis.empty() ? 0 : basis[0].size(), Rational(0));
    for (std::size_t k = 0; k < basis.size(); ++k)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeffs[k] * basis[k][i];
    return out;
}

// Pointwise data of (alpha, d alpha) used by the linear-algebra classifiers.
struct PointData {
    QVector a;
    QMatrix w;
    std::vector<QVector> xi;
};

PointData point_data(const KForm& alpha, std::span<const Rational> x) {
    PointData d;
    d.a = eval_vector(one_form_vector(alpha), x);
    d.w = eval_matrix(two_form_matrix(ext_d(alpha)), x);
    d.xi = kernel(QMatrix{d.a}, d.a.size());
    return d;
}

// {u in xi : omega(u, w) = 0 for w in ws}, as ambient vectors.
std::vector<QVector> omega_perp_in_xi(const PointData& d, const std::vector<QVector>& ws) {
    QMatrix rows;
    for (const auto& w : ws) {
        QVector row;
        for (const auto& e : d.xi) row.push_back(omega_at(d.w, e, w));
        rows.push_back(std::move(row));
    }
    std::vector<QVector> out;
    for (const auto& c : kernel(rows, d.xi.size())) out.push_back(combine(d.xi, c));
    return out;
}

std::size_t span_rank(const std::vector<QVector>& vs) { return vs.empty() ? 0 : rank(QMatrix(vs.begin(), vs.end())); }

}  // namespace

IsotropyResult is_isotropic(const ParamEmbedding& e, const KForm& alpha) {
    require_same_chart(e.map.target(), alpha.chart(), "isotropy test");
    IsotropyResult out;
    KForm pb = pullback(e.map, alpha);
    if (e.constraint) pb = wedge(pb, differential(RationalFunction(*e.constraint)));
    out.residual = KForm(pb.chart(), pb.grade());
    for (const auto& [m, c] : pb.coeffs()) {
        Polynomial r = numerator_mod(c, e.constraint);
        if (!r.is_zero()) out.residual.add_term(m, RationalFunction(r));
    }
    out.yes = out.residual.is_zero();
    return out;
}

std::string SubspaceClass::label_name() const {
    switch (label) {
        case Label::Isotropic: return "isotropic";
        case Label::Coisotropic: return "coisotropic";
        case Label::Symplectic: return "symplectic";
        case Label::Mixed: return "mixed";
    }
    return "";
}

SubspaceClass subspace_class_at(const KForm& alpha, const std::vector<QVector>& vectors, const PointQ& p) {
    require_same_chart(alpha.chart(), p.chart, "subspace classification");
    SubspaceClass out;
    out.dim_v = vectors.size();
    if (span_rank(vectors) != vectors.size()) throw InvalidArgument("tangent vectors are linearly dependent");
    PointData d = point_data(alpha, p.coords);

    QVector av;
    for (const auto& v : vectors) av.push_back(dot(d.a, v));
    std::vector<QVector> w;
    for (const auto& c : kernel(QMatrix{av}, vectors.size())) w.push_back(combine(vectors, c));
    out.dim_w = w.size();
    out.in_xi = w.size() == vectors.size();

    std::vector<QVector> perp = omega_perp_in_xi(d, w);
    out.dim_w_perp = perp.size();

    // dim(W cap W^omega) = dim W + dim W^omega - dim(W + W^omega).
    std::vector<QVector> both = w;
    both.insert(both.end(), perp.begin(), perp.end());
    std::size_t sum_rank = span_rank(both);
    out.dim_radical = w.size() + perp.size() - sum_rank;

    out.coisotropic = sum_rank == w.size();  // W^omega inside W
    out.symplectic = out.dim_radical == 0;
    bool w_isotropic = out.dim_radical == w.size();  // W inside W^omega
    out.isotropic = out.in_xi && w_isotropic;

    if (out.isotropic) out.label = SubspaceClass::Label::Isotropic;
    else if (out.coisotropic) out.label = SubspaceClass::Label::Coisotropic;
    else if (out.symplectic) out.label = SubspaceClass::Label::Symplectic;
    else out.label = SubspaceClass::Label::Mixed;
    return out;
}

std::vector<QVector> tangent_basis(const ParamEmbedding& e, const std::vector<Rational>& q) {
    auto jac = e.map.jacobian_at(q);
    const std::size_t pd = e.map.source().dim();
    std::vector<QVector> dirs;
    if (e.constraint) {
        QVector dg;
        for (std::size_t j = 0; j < pd; ++j) dg.push_back(e.constraint->derivative(j).evaluate(std::span<const Rational>(q)));
        dirs = kernel(QMatrix{dg}, pd);
    } else {
        for (std::size_t j = 0; j < pd; ++j) {
            QVector v(pd, Rational(0));
            v[j] = Rational(1);
            dirs.push_back(std::move(v));
        }
    }
    std::vector<QVector> out;
    for (const auto& dir : dirs) {
        QVector t(jac.size(), Rational(0));
        for (std::size_t i = 0; i < jac.size(); ++i)
            for (std::size_t j = 0; j < pd; ++j) t[i] += jac[i][j] * dir[j];
        out.push_back(std::move(t));
    }
    if (span_rank(out) != out.size()) throw InvalidArgument("embedding is not immersive at " + PointQ(e.map.source(), q).to_string());
    return out;
}

FoliationResult char_foliation_at(const KForm& alpha, const ParamEmbedding& e, const PointQ& q) {
    require_same_chart(e.map.source(), q.chart, "foliation parameter point");
    auto tv = tangent_basis(e, q.coords);
    auto img = e.map.evaluate(q.coords);
    PointData d = point_data(alpha, img);
    QVector av;
    for (const auto& v : tv) av.push_back(dot(d.a, v));
    FoliationResult out;
    auto coeff = kernel(QMatrix{av}, tv.size());
    if (coeff.size() == tv.size()) {
        out.singular = true;
        return out;
    }
    std::vector<QVector> w;
    for (const auto& c : coeff) w.push_back(combine(tv, c));
    out.basis = omega_perp_in_xi(d, w);
    return out;
}

bool DividingData::all_nondegenerate() const {
    for (const auto& s : samples)
        if (s.sign != 0 && !s.nondegenerate) return false;
    return true;
}

DividingData dividing_data(const ParamEmbedding& sigma, const KForm& alpha, const VectorField& x,
                           const std::vector<PointQ>& samples) {
    DividingData out;
    RationalFunction ax = interior_product(x, alpha).as_scalar();
    out.u = sigma.map.apply(ax).simplified();
    if (out.u.is_zero()) throw InvalidArgument("u vanishes identically on the hypersurface");
    out.beta = pullback(sigma.map, alpha);
    RationalFunction inv = RationalFunction(out.u.den(), out.u.num());
    out.lambda_plus = inv * out.beta;
    out.lambda_minus = out.lambda_plus;
    KForm dl = ext_d(out.lambda_plus);
    const std::size_t m = sigma.map.source().dim() / 2;
    KForm top = wedge_power(dl, static_cast<unsigned>(m));
    for (const auto& s : samples) {
        RegionSample r{s, out.u.evaluate(std::span<const Rational>(s.coords)).sign(), false};
        if (r.sign != 0) r.nondegenerate = !top.evaluate(std::span<const Rational>(s.coords)).empty();
        out.samples.push_back(std::move(r));
    }
    return out;
}

std::size_t LocusReport::passed() const {
    std::size_t n = 0;
    for (const auto& s : samples) n += s.ok() ? 1 : 0;
    return n;
}

LocusReport reeb_on_locus_check(const KForm& alpha, const std::vector<Polynomial>& constraints,
                                const VectorField& r, const std::vector<PointQ>& samples) {
    LocusReport out;
    const std::size_t d = alpha.chart().dim();
    for (const auto& p : samples) {
        require_same_chart(alpha.chart(), p.chart, "locus sample");
        std::span<const Rational> x(p.coords);
        QMatrix dg;
        for (const auto& g : constraints) {
            if (!g.evaluate(x).is_zero()) throw InvalidArgument("sample " + p.to_string() + " is off the locus");
            QVector row;
            for (std::size_t j = 0; j < d; ++j) row.push_back(g.derivative(j).evaluate(x));
            dg.push_back(std::move(row));
        }
        PointData pd = point_data(alpha, x);
        QVector rv = r.evaluate(x);
        LocusSampleResult res{p};
        res.alpha_one = dot(pd.a, rv) == Rational(1);
        res.tangent = true;
        for (const auto& row : dg) res.tangent = res.tangent && dot(row, rv).is_zero();
        res.kernel = true;
        for (const auto& v : kernel(dg, d)) res.kernel = res.kernel && omega_at(pd.w, rv, v).is_zero();
        out.samples.push_back(std::move(res));
    }
    return out;
}

std::string IdealIdentity::to_string() const {
    switch (kind) {
        case Kind::Equal: return "Equal";
        case Kind::EqualUpToConstant: return "EqualUpToConstant(" + constant.to_string() + ")";
        case Kind::Differ: return "Differ(" + remainder.to_string() + ")";
    }
    return "";
}

IdealIdentity ideal_identity_check(const Polynomial& p, const Polynomial& q, const Polynomial& g) {
    IdealIdentity out;
    Polynomial rp = mod_reduce(p, g), rq = mod_reduce(q, g);
    out.remainder = rp - rq;
    if (out.remainder.is_zero()) {
        out.kind = IdealIdentity::Kind::Equal;
        return out;
    }
    if (!rq.is_zero() && !rp.is_zero()) {
        const auto& [e, cq] = rq.leading();
        auto it = rp.terms().find(e);
        if (it != rp.terms().end()) {
            Rational c = it->second / cq;
            Polynomial diff = rp - rq * c;
            if (diff.is_zero()) {
                out.kind = IdealIdentity::Kind::EqualUpToConstant;
                out.constant = c;
                out.remainder = diff;
                return out;
            }
        }
    }
    out.kind = IdealIdentity::Kind::Differ;
    return out;
}

}  // namespace ccw
