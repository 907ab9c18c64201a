#include "ccw/models.hpp"

#include "ccw/errors.hpp"

namespace ccw {

namespace {

Polynomial var(const Chart& c, std::size_t i) { return Polynomial::variable(c, i); }
RationalFunction rf(Polynomial p) { return RationalFunction(std::move(p)); }
Polynomial cst(const Chart& c, const Rational& r) { return Polynomial(c, r); }

std::size_t xi(std::size_t i) { return 2 * i; }
std::size_t yi(std::size_t i) { return 2 * i + 1; }

std::optional<Rational> rational_sqrt(const Rational& r) {
    if (r.sign() < 0) return std::nullopt;
    mpz_class n = r.num(), d = r.den(), sn, sd;
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
    return Rational(sn, sd);
}

PointQ axis_point(const Chart& c, const Rational& z) {
    std::vector<Rational> x(c.dim(), Rational(0));
    x.back() = z;
    return {c, x};
}

FactCheck fact(std::string name, bool ok, std::string detail = {}) { return {std::move(name), ok, std::move(detail)}; }

}  // namespace

Chart darboux_chart(std::size_t n) {
    if (n < 1) throw InvalidArgument("Darboux chart needs n >= 1");
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= n; ++i) {
        names.push_back("x" + std::to_string(i));
        names.push_back("y" + std::to_string(i));
    }
    names.emplace_back("z");
    return Chart(names);
}

Chart symplectic_chart(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= n; ++i) {
        names.push_back("x" + std::to_string(i));
        names.push_back("y" + std::to_string(i));
    }
    return Chart(names);
}

KForm standard_alpha(const Chart& c) {
    const std::size_t n = (c.dim() - 1) / 2;
    KForm a = KForm::basis(c, c.dim() - 1);
    Rational h(1, 2);
    for (std::size_t i = 0; i < n; ++i) {
        a += rf(h * var(c, xi(i))) * KForm::basis(c, yi(i));
        a -= rf(h * var(c, yi(i))) * KForm::basis(c, xi(i));
    }
    return a;
}

bool all_ok(const std::vector<FactCheck>& facts) {
    for (const auto& f : facts)
        if (!f.ok) return false;
    return true;
}

std::vector<FactCheck> self_check(const ModelBundle& m) {
    std::vector<FactCheck> out;
    const ContactBundle& b = m.bundle;
    if (m.expected_contact_constant) {
        ContactCheck cc = check_contact(b);
        bool ok = cc.kind == ContactCheck::Kind::ExactConstant && cc.constant == *m.expected_contact_constant;
        out.push_back(fact("contact constant " + m.expected_contact_constant->to_string(), ok, cc.to_string()));
    }
    if (b.X) {
        ExpansionResult e = expansion_coefficient(b, *b.X);
        out.push_back(fact("contact vector field", e.is_contact_field(), e.residual.to_string()));
        if (m.expected_mu)
            out.push_back(fact("mu = " + m.expected_mu->to_string(), e.mu == *m.expected_mu, e.mu.to_string()));
        if (m.expected_h)
            out.push_back(fact("H = " + m.expected_h->to_string(), e.hamiltonian == *m.expected_h,
                               e.hamiltonian.to_string()));
        for (const auto& p : m.expected_critical) {
            CriticalPointCheck c = verify_critical_point(b, p);
            out.push_back(fact("critical point " + p.to_string(), c.is_zero && c.mu_nonzero(),
                               c.is_zero ? "mu=" + c.mu.to_string() : "component " + std::to_string(c.witness_component)));
        }
    }
    return out;
}

ModelBundle darboux(std::size_t n) {
    Chart c = darboux_chart(n);
    ModelBundle m{"darboux", ContactBundle(standard_alpha(c)), std::nullopt, std::nullopt, std::nullopt, {}};
    Rational f(1);
    for (std::size_t i = 2; i <= n; ++i) f *= Rational(static_cast<long>(i));
    m.expected_contact_constant = f;
    return m;
}

VectorField standard_field(const Chart& c, std::size_t k) {
    const std::size_t n = (c.dim() - 1) / 2;
    if (k > n) throw InvalidArgument("standard field index must be <= n");
    VectorField x(c);
    x[c.dim() - 1] = rf(var(c, c.dim() - 1));
    Rational h(1, 2);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < k) {
            x[xi(i)] = rf(-var(c, xi(i)));
            x[yi(i)] = rf(Rational(2) * var(c, yi(i)));
        } else {
            x[xi(i)] = rf(h * var(c, xi(i)));
            x[yi(i)] = rf(h * var(c, yi(i)));
        }
    }
    return x;
}

Polynomial standard_phi(const Chart& c, std::size_t k) {
    const std::size_t n = (c.dim() - 1) / 2;
    Polynomial z = var(c, c.dim() - 1);
    Polynomial phi = z * z;
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial x2 = var(c, xi(i)).pow(2), y2 = var(c, yi(i)).pow(2);
        phi += (i < k ? -x2 : x2) + y2;
    }
    return phi;
}

ModelBundle standard_convex(std::size_t n, std::size_t k) {
    if (k > 2 * n + 1) throw InvalidArgument("index out of range for the standard convex model");
    Chart c = darboux_chart(n);
    bool sub = k <= n;
    std::size_t kk = sub ? k : 2 * n + 1 - k;
    VectorField x = standard_field(c, kk);
    Polynomial phi = standard_phi(c, kk);
    Polynomial h = var(c, c.dim() - 1);
    for (std::size_t i = 0; i < kk; ++i) h += Rational(3, 2) * var(c, xi(i)) * var(c, yi(i));
    if (!sub) {
        x = -x;
        phi = -phi;
        h = -h;
    }
    ModelBundle m{"stdconvex", ContactBundle(standard_alpha(c), x, phi), std::nullopt,
                  RationalFunction(c, Rational(sub ? 1 : -1)), rf(h), {axis_point(c, Rational(0))}};
    return m;
}

WeinsteinModel weinstein_standard(std::size_t n, std::size_t k) {
    if (n < 1 || k > n) throw InvalidArgument("Weinstein model needs 0 <= k <= n, n >= 1");
    WeinsteinModel w;
    w.chart = symplectic_chart(n);
    const Chart& c = w.chart;
    w.omega = KForm(c, 2);
    w.X = VectorField(c);
    w.phi = Polynomial(c);
    Rational h(1, 2);
    for (std::size_t i = 0; i < n; ++i) {
        w.omega += wedge(KForm::basis(c, xi(i)), KForm::basis(c, yi(i)));
        Polynomial x = var(c, xi(i)), y = var(c, yi(i));
        if (i < k) {
            w.X[xi(i)] = rf(Rational(2) * x);
            w.X[yi(i)] = rf(-y);
            w.phi += x * x - y * y;
        } else {
            w.X[xi(i)] = rf(h * x);
            w.X[yi(i)] = rf(h * y);
            w.phi += x * x + y * y;
        }
    }
    w.lambda = interior_product(w.X, w.omega);
    w.liouville_residual = lie_derivative(w.X, w.omega) - w.omega;
    return w;
}

SphereReport sphere_example_report(std::size_t n) {
    if (n < 2) throw InvalidArgument("sphere example needs n >= 2");
    SphereReport r;
    r.n = n;
    r.chart = symplectic_chart(n);
    const Chart& c = r.chart;
    r.alpha = KForm(c, 1);
    r.g = cst(c, Rational(-1));
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial x = var(c, xi(i)), y = var(c, yi(i));
        r.alpha += rf(-y) * KForm::basis(c, xi(i)) + rf(x) * KForm::basis(c, yi(i));
        r.g += x * x + y * y;
    }
    Polynomial x1 = var(c, 0), y1 = var(c, 1);
    Rational h(1, 2);
    r.xh = VectorField(c);
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial x = var(c, xi(i)), y = var(c, yi(i));
        Polynomial cx = x1 * x - y1 * y, cy = x1 * y + y1 * x;
        if (i == 0) cx -= cst(c, Rational(1));
        r.xh[xi(i)] = rf(h * cx);
        r.xh[yi(i)] = rf(h * cy);
    }
    r.phi = -x1;

    Polynomial zero(c);
    Polynomial dg_x = r.xh.apply(rf(r.g)).num();
    r.tangency = ideal_identity_check(dg_x, zero, r.g);
    r.hamiltonian = ideal_identity_check(interior_product(r.xh, r.alpha).as_scalar().num(), y1, r.g);

    // Tangential part of grad(phi): |grad phi|^2 - (dphi(N))^2 with N the unit normal on S.
    Polynomial grad2(c), dphi_n(c);
    for (std::size_t j = 0; j < c.dim(); ++j) {
        Polynomial d = r.phi.derivative(j);
        grad2 += d * d;
        dphi_n += d * var(c, j);
    }
    Polynomial one = cst(c, Rational(1));
    r.dphi_norm = ideal_identity_check(grad2 - dphi_n * dphi_n, one - x1 * x1, r.g);

    Polynomial xh2(c);
    for (std::size_t j = 0; j < c.dim(); ++j) xh2 += r.xh[j].num() * r.xh[j].num();
    r.xh_norm = ideal_identity_check(xh2, Rational(1, 4) * (one - x1 * x1 + Rational(3) * y1 * y1), r.g);
    r.dphi_xh = ideal_identity_check(r.xh.apply(rf(r.phi)).num(), one - x1 * x1 + y1 * y1, r.g);
    return r;
}

Chart jet_chart(std::size_t n) {
    if (n < 1) throw InvalidArgument("jet chart needs n >= 1");
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= n; ++i) names.push_back("q" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) names.push_back("p" + std::to_string(i));
    names.emplace_back("z");
    return Chart(names);
}

Polynomial jet_quadratic_base(std::size_t n) {
    Chart c = jet_chart(n);
    Polynomial s(c);
    for (std::size_t i = 0; i < n; ++i) s += var(c, i).pow(2);
    return s;
}

JetExample jet_example(std::size_t n, const Polynomial& phi_base, const Rational& scale) {
    Chart c = jet_chart(n);
    Polynomial base = phi_base.chart().valid() ? phi_base : Polynomial(c);
    require_same_chart(base.chart(), c, "jet example base function");
    for (std::size_t j = n; j < c.dim(); ++j)
        if (!base.derivative(j).is_zero()) throw InvalidArgument("jet base function must depend on q only");
    Polynomial phi = base * scale;
    std::size_t zi = c.dim() - 1;
    KForm alpha = KForm::basis(c, zi);
    Polynomial h = var(c, zi);
    for (std::size_t i = 0; i < n; ++i) {
        alpha -= rf(var(c, n + i)) * KForm::basis(c, i);
        h -= var(c, n + i) * phi.derivative(i);
    }
    ContactBundle probe(alpha);
    JetExample out;
    out.hamiltonian = rf(h);
    VectorField x = ham_to_field(probe, out.hamiltonian);
    Polynomial tilde = phi;
    for (std::size_t i = 0; i < n; ++i) tilde += Rational(1, 2) * var(c, n + i).pow(2);
    tilde += Rational(1, 2) * var(c, zi).pow(2);
    out.model = ModelBundle{"jet", ContactBundle(alpha, x, tilde), std::nullopt, std::nullopt, out.hamiltonian,
                            {}};
    out.dphi_x = x.apply(rf(tilde));
    out.displayed_matches = true;
    out.flipped_hessian_matches = true;
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial hp(c);
        for (std::size_t j = 0; j < n; ++j) hp += phi.derivative(i).derivative(j) * var(c, n + j);
        Polynomial p = var(c, n + i);
        out.p_components.push_back(x[n + i]);
        out.displayed_p_components.push_back(rf(p + hp));
        out.displayed_matches = out.displayed_matches && x[n + i] == rf(p + hp);
        out.flipped_hessian_matches = out.flipped_hessian_matches && x[n + i] == rf(p - hp);
    }
    Box box = Box::cube(c.dim(), Rational(1));
    for_each_grid_point(box, 5, [&](const std::vector<Rational>& pt) {
        bool origin = true;
        for (const auto& v : pt) origin = origin && v.is_zero();
        if (origin) return true;
        ++out.samples;
        if (out.dphi_x.evaluate(std::span<const Rational>(pt)).sign() > 0) ++out.positive_samples;
        return true;
    });
    return out;
}

Polynomial cancellation_hamiltonian(const Chart& c, const Rational& eps) {
    const std::size_t n = (c.dim() - 1) / 2;
    Polynomial z = var(c, c.dim() - 1);
    Polynomial h = -(z * z) - cst(c, eps);
    for (std::size_t i = 0; i < n; ++i) h -= Rational(3, 2) * var(c, xi(i)) * var(c, yi(i));
    return h;
}

Polynomial cancellation_phi(const Chart& c, const Rational& eps) {
    const std::size_t n = (c.dim() - 1) / 2;
    Polynomial z = var(c, c.dim() - 1);
    Polynomial phi = Rational(1, 3) * z.pow(3) + eps * z;
    for (std::size_t i = 0; i < n; ++i)
        phi += Rational(1, 4) * (var(c, yi(i)).pow(2) - var(c, xi(i)).pow(2));
    return phi;
}

ModelBundle cancellation_model(std::size_t n, const Rational& eps) {
    if (!(Rational(-1) < eps && eps < Rational(1))) throw InvalidArgument("cancellation model needs -1 < eps < 1");
    Chart c = darboux_chart(n);
    KForm alpha = KForm(c, 1) - standard_alpha(c);
    std::size_t zi = c.dim() - 1;
    Polynomial z = var(c, zi);
    VectorField x(c);
    x[zi] = rf(z * z + cst(c, eps));
    for (std::size_t i = 0; i < n; ++i) {
        x[xi(i)] = rf(var(c, xi(i)) * (z - cst(c, Rational(3, 2))));
        x[yi(i)] = rf(var(c, yi(i)) * (z + cst(c, Rational(3, 2))));
    }
    ModelBundle m{"cancelmodel", ContactBundle(alpha, x, cancellation_phi(c, eps)), std::nullopt,
                  rf(Rational(2) * z), rf(cancellation_hamiltonian(c, eps)), {}};
    if (auto r = rational_sqrt(-eps); r && !r->is_zero()) {
        m.expected_critical.push_back(axis_point(c, *r));
        m.expected_critical.push_back(axis_point(c, -*r));
    }
    return m;
}

std::vector<FactCheck> cancellation_facts(std::size_t n, const Rational& eps) {
    ModelBundle m = cancellation_model(n, eps);
    const Chart& c = m.bundle.chart;
    const VectorField& x = *m.bundle.X;
    std::vector<FactCheck> out;
    Chart axis{"z"};
    std::vector<RationalFunction> emb(c.dim(), RationalFunction(axis));
    emb.back() = rf(Polynomial::variable(axis, 0));
    PolyMap on_axis(axis, c, emb);
    bool invariant = true;
    for (std::size_t j = 0; j + 1 < c.dim(); ++j) invariant = invariant && on_axis.apply(x[j]).is_zero();
    out.push_back(fact("z-axis invariant", invariant));
    Polynomial za = Polynomial::variable(axis, 0);
    RationalFunction expected_z = rf(za * za + Polynomial(axis, eps));
    out.push_back(fact("axis field is (z^2+eps) d/dz", on_axis.apply(x[c.dim() - 1]) == expected_z));

    Polynomial z = var(c, c.dim() - 1);
    Polynomial expect = (z * z + cst(c, eps)).pow(2);
    for (std::size_t i = 0; i < n; ++i) {
        expect += Rational(1, 2) * var(c, xi(i)).pow(2) * (cst(c, Rational(3, 2)) - z);
        expect += Rational(1, 2) * var(c, yi(i)).pow(2) * (z + cst(c, Rational(3, 2)));
    }
    RationalFunction dphi = x.apply(rf(*m.bundle.phi));
    out.push_back(fact("dphi(X) identity", dphi == rf(expect), dphi.to_string()));

    // z^2 + eps on the axis: negative strictly between the critical points, positive otherwise.
    bool signs = true;
    auto r = rational_sqrt(-eps);
    for (int j = -20; j <= 20; ++j) {
        Rational t(j, 20);
        Rational v = t * t + eps;
        if (eps.sign() > 0) signs = signs && v.sign() > 0;
        else if (r) {
            int want = abs(t) < *r ? -1 : (abs(t) == *r ? 0 : 1);
            signs = signs && v.sign() == want;
        }
    }
    out.push_back(fact(eps.sign() > 0 ? "no critical points on the axis" : "single axis segment between critical points",
                       signs));
    return out;
}

GammaLocus cancellation_gamma_locus(std::size_t n, const Rational& delta, const Rational& eps, std::size_t count) {
    Chart c = darboux_chart(n);
    std::size_t zi = c.dim() - 1;
    Polynomial z = var(c, zi);
    GammaLocus g;
    Polynomial sx = cst(c, -(delta * delta));
    Polynomial hx = z * z + cst(c, eps);
    for (std::size_t i = 0; i < n; ++i) {
        sx += var(c, xi(i)).pow(2);
        hx += Rational(3, 2) * var(c, xi(i)) * var(c, yi(i));
    }
    g.constraints = {sx, hx};
    RationalFunction scale(cst(c, Rational(4)), (cst(c, Rational(3)) - Rational(2) * z) * (delta * delta));
    g.reeb = VectorField(c);
    for (std::size_t i = 0; i < n; ++i) g.reeb[yi(i)] = scale * rf(var(c, xi(i)) * z);
    g.reeb[zi] = scale * rf(cst(c, Rational(-3, 4) * delta * delta));

    for (std::size_t j = 0; j < count; ++j) {
        // x on the sphere of radius delta via stereographic coordinates.
        std::vector<Rational> x(n, Rational(0));
        if (n == 1) {
            x[0] = (j % 2 == 0) ? delta : -delta;
        } else {
            Rational t(static_cast<long>(j % 7) - 3, 4);
            Rational den = t * t + Rational(1);
            x[0] = delta * Rational(2) * t / den;
            x[1] = delta * (t * t - Rational(1)) / den;
            if (j % 2) x[1] = -x[1];
        }
        Rational zv(static_cast<long>(j) - static_cast<long>(count / 2), static_cast<long>(count + 1));
        Rational lam = (-eps - zv * zv) / (Rational(3, 2) * delta * delta);
        std::vector<Rational> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = lam * x[i];
        if (n >= 2) {
            Rational w(static_cast<long>(j % 3), 5);
            y[0] -= w * x[1];
            y[1] += w * x[0];
        }
        std::vector<Rational> pt;
        for (std::size_t i = 0; i < n; ++i) {
            pt.push_back(x[i]);
            pt.push_back(y[i]);
        }
        pt.push_back(zv);
        g.samples.emplace_back(c, pt);
    }
    return g;
}

ParamEmbedding cancellation_sigma1(const Rational& delta) {
    Chart amb = darboux_chart(1);
    Chart par{"y1", "z"};
    return {PolyMap(par, amb,
                    {rf(cst(par, delta)), rf(Polynomial::variable(par, 0)), rf(Polynomial::variable(par, 1))}),
            std::nullopt};
}

Chart collar_chart() { return Chart{"s", "v", "x"}; }

ModelBundle sutured_collar(const Rational& cc) {
    if (cc.sign() <= 0) throw InvalidArgument("collar constant must be positive");
    Chart c = collar_chart();
    KForm alpha = rf(cst(c, cc)) * KForm::basis(c, 0) + rf(var(c, 1)) * KForm::basis(c, 2);
    VectorField x(c, {rf(var(c, 0)), rf(var(c, 1)), RationalFunction(c)});
    ModelBundle m{"suturecollar", ContactBundle(alpha, x), cc, RationalFunction(c, Rational(1)),
                  rf(cc * var(c, 0)), {}};
    return m;
}

SutureCheck suture_model_check() {
    Chart c{"u", "t", "x"};
    Polynomial u = var(c, 0), t = var(c, 1), x = var(c, 2);
    Rational h(1, 2);
    KForm du = KForm::basis(c, 0), dt = KForm::basis(c, 1), dx = KForm::basis(c, 2);
    KForm a = rf(h * u) * dt - rf(h * t) * du + dx;
    KForm target = rf(u) * dt + dx;
    PolyMap shear(c, c, {rf(u), rf(t), rf(x + h * u * t)});
    PolyMap wrong(c, c, {rf(u), rf(t), rf(x + u * t)});
    SutureCheck out;
    out.shear_residual = pullback(shear, a) - target;
    out.identity_residual = pullback(PolyMap::identity(c), a) - a;
    out.wrong_shear_residual = pullback(wrong, a) - target;
    return out;
}

HandleRegion make_handle_region(std::size_t n, std::size_t k, const Rational& eps) {
    if (k > 2 * n + 1) throw InvalidArgument("handle index out of range");
    if (eps.sign() <= 0) throw InvalidArgument("handle size must be positive");
    HandleRegion r;
    r.n = n;
    r.k = k;
    r.sup = k > n;
    r.eps = eps;
    return r;
}

std::pair<Rational, Rational> handle_radii_squared(const HandleRegion& r, const PointQ& p) {
    if (p.coords.size() != 2 * r.n + 1) throw InvalidArgument("point dimension does not match the handle");
    std::size_t kk = r.sup ? 2 * r.n + 1 - r.k : r.k;
    Rational rl(0), rc(0);
    for (std::size_t i = 0; i < r.n; ++i) {
        Rational x2 = p[xi(i)] * p[xi(i)], y2 = p[yi(i)] * p[yi(i)];
        if (i < kk) {
            rl += x2;
            rc += y2;
        } else {
            rc += x2 + y2;
        }
    }
    rc += p.coords.back() * p.coords.back();
    return {rl, rc};
}

Rational chi_squared(const HandleRegion& r, const Rational& w) {
    Rational p1 = Rational(1) + r.delta / Rational(2);
    Rational w1 = p1 * p1;
    if (w >= w1) return w - Rational(1);
    Rational h2 = w1 - Rational(1);
    Rational cap2 = r.cap_fraction * r.cap_fraction * h2;
    Rational t = w / w1;
    return cap2 + (h2 - cap2) * (Rational(3) * t * t - Rational(2) * t * t * t);
}

bool handle_region_membership(const HandleRegion& r, const PointQ& p) {
    auto [rl, rc] = handle_radii_squared(r, p);
    Rational e2 = r.eps * r.eps;
    Rational pp = (r.sup ? rc : rl) / e2;
    Rational qq = (r.sup ? rl : rc) / e2;
    Rational edge = Rational(1) + r.delta;
    if (pp > edge * edge) return false;
    if (pp - qq > Rational(1)) return false;
    return qq <= chi_squared(r, pp);
}

}  // namespace ccw
