#include "ccw/contact.hpp"

#include <cmath>

#include "ccw/errors.hpp"
#include "ccw/linsolve.hpp"

namespace ccw {

std::string Box::to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < dim(); ++i) {
        if (i) s += ",";
        s += lo[i].to_string() + ":" + hi[i].to_string();
    }
    return s + "]";
}

ContactBundle::ContactBundle(KForm a, std::optional<VectorField> x, std::optional<Polynomial> f)
    : chart(a.chart()), alpha(std::move(a)), X(std::move(x)), phi(std::move(f)) {
    if (alpha.grade() != 1) throw InvalidArgument("contact form must be a 1-form");
    if (chart.dim() % 2 == 0) throw InvalidArgument("contact chart must be odd-dimensional");
    if (X) require_same_chart(X->chart(), chart, "contact bundle field");
    if (phi && phi->chart().valid()) require_same_chart(phi->chart(), chart, "contact bundle function");
    domain = Box::cube(chart.dim(), Rational(1));
}

std::string ContactCheck::to_string() const {
    switch (kind) {
        case Kind::ExactConstant: return "ExactConstant(" + constant.to_string() + ")";
        case Kind::NonvanishingSampled: return "NonvanishingSampled(" + std::to_string(samples) + ")";
        case Kind::Fails: return "Fails(" + (witness ? witness->to_string() : std::string("identically zero")) + ")";
    }
    return "";
}

ContactCheck check_contact(const ContactBundle& b, std::size_t grid) {
    ContactCheck out;
    KForm top = wedge(b.alpha, wedge_power(ext_d(b.alpha), static_cast<unsigned>(b.n())));
    out.top = top.coefficient(top.is_zero() ? 0 : top.coeffs().begin()->first);
    if (top.is_zero()) {
        out.top = RationalFunction(b.chart);
        out.kind = ContactCheck::Kind::Fails;
        return out;
    }
    out.top = out.top.simplified();
    if (out.top.is_constant()) {
        out.kind = ContactCheck::Kind::ExactConstant;
        out.constant = out.top.constant_value();
        return out;
    }
    const std::size_t d = b.chart.dim();
    std::size_t per_axis = std::max<std::size_t>(grid, 2);
    while (per_axis > 2 && std::pow(static_cast<double>(per_axis), static_cast<double>(d)) >
                               static_cast<double>(kMaxContactSamples))
        --per_axis;
    out.kind = ContactCheck::Kind::NonvanishingSampled;
    for_each_grid_point(b.domain, per_axis, [&](const std::vector<Rational>& x) {
        ++out.samples;
        if (out.top.evaluate(std::span<const Rational>(x)).is_zero()) {
            out.kind = ContactCheck::Kind::Fails;
            out.witness = PointQ(b.chart, x);
            return false;
        }
        return true;
    });
    return out;
}

namespace {

// Rows expressing i_V(d alpha) = rhs componentwise, plus alpha(V) = a0.
RFMatrix contact_system(const ContactBundle& b) {
    auto m = two_form_matrix(ext_d(b.alpha));
    auto a = one_form_vector(b.alpha);
    const std::size_t d = b.chart.dim();
    RFMatrix rows;
    rows.push_back(a);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<RationalFunction> row(d, RationalFunction(b.chart));
        for (std::size_t i = 0; i < d; ++i) row[i] = m[i][j];
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

VectorField reeb_field(const ContactBundle& b) {
    std::vector<RationalFunction> rhs(b.chart.dim() + 1, RationalFunction(b.chart));
    rhs[0] = RationalFunction(b.chart, Rational(1));
    return {b.chart, solve_unique(contact_system(b), rhs)};
}

VectorField ham_to_field(const ContactBundle& b, const RationalFunction& h, const VectorField& reeb) {
    RationalFunction hh = h.chart().valid() ? h : RationalFunction(b.chart);
    RationalFunction rh = reeb.apply(hh);
    auto a = one_form_vector(b.alpha);
    const std::size_t d = b.chart.dim();
    std::vector<RationalFunction> rhs;
    rhs.push_back(hh);
    for (std::size_t j = 0; j < d; ++j) rhs.push_back(rh * a[j] - hh.derivative(j));
    return {b.chart, solve_unique(contact_system(b), rhs)};
}

VectorField ham_to_field(const ContactBundle& b, const RationalFunction& h) {
    return ham_to_field(b, h, reeb_field(b));
}

RationalFunction field_to_ham(const ContactBundle& b, const VectorField& x) {
    return interior_product(x, b.alpha).as_scalar();
}

ExpansionResult expansion_coefficient(const ContactBundle& b, const VectorField& x) {
    ExpansionResult out;
    out.hamiltonian = field_to_ham(b, x);
    out.mu = reeb_field(b).apply(out.hamiltonian).simplified();
    out.residual = lie_derivative(x, b.alpha) - out.mu * b.alpha;
    return out;
}

CriticalPointCheck verify_critical_point(const ContactBundle& b, const PointQ& p) {
    if (!b.X) throw InvalidArgument("bundle has no vector field");
    require_same_chart(p.chart, b.chart, "critical point");
    CriticalPointCheck out;
    auto v = b.X->evaluate(std::span<const Rational>(p.coords));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_zero()) {
            out.witness_component = i;
            out.witness_value = v[i];
            return out;
        }
    }
    out.is_zero = true;
    out.mu = expansion_coefficient(b, *b.X).mu.evaluate(std::span<const Rational>(p.coords));
    return out;
}

VectorField liouville_field(const KForm& lambda) {
    const Chart& c = lambda.chart();
    if (lambda.grade() != 1) throw InvalidArgument("Liouville form must be a 1-form");
    if (c.dim() % 2 != 0) throw InvalidArgument("Liouville chart must be even-dimensional");
    auto m = two_form_matrix(ext_d(lambda));
    auto l = one_form_vector(lambda);
    const std::size_t d = c.dim();
    RFMatrix rows;
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<RationalFunction> row(d, RationalFunction(c));
        for (std::size_t i = 0; i < d; ++i) row[i] = m[i][j];
        rows.push_back(std::move(row));
    }
    return {c, solve_unique(rows, l)};
}

}  // namespace ccw
