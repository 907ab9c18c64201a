#include "ccw/ratfunc.hpp"

#include "ccw/errors.hpp"

namespace ccw {

namespace {

// A default-constructed value has no chart and stands for zero.
RationalFunction lift(const RationalFunction& a, const Chart& chart) {
    if (a.chart().valid() || !chart.valid()) return a;
    return RationalFunction(chart);
}

}  // namespace

RationalFunction::RationalFunction(Polynomial p) : num_(std::move(p)) {
    den_ = Polynomial(num_.chart(), Rational(1));
}

RationalFunction::RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (num_.chart().valid() && den_.chart().valid())
        require_same_chart(num_.chart(), den_.chart(), "rational function");
    if (den_.is_zero()) throw DenominatorVanishes("rational function with zero denominator");
    normalize();
}

void RationalFunction::normalize() {
    if (num_.is_zero()) {
        den_ = Polynomial(num_.chart().valid() ? num_.chart() : den_.chart(), Rational(1));
        return;
    }
    if (den_.is_constant()) {
        Rational c = den_.constant_term();
        if (!c.is_one()) num_ *= Rational(1) / c;
        den_ = Polynomial(num_.chart(), Rational(1));
        return;
    }
    Rational lc = den_.leading().second;
    if (!lc.is_one()) {
        Rational inv = Rational(1) / lc;
        num_ *= inv;
        den_ *= inv;
    }
}

Rational RationalFunction::constant_value() const {
    if (!is_constant()) throw InvalidArgument("rational function is not constant: " + to_string());
    return num_.constant_term() / den_.constant_term();
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o0) {
    RationalFunction o = lift(o0, chart());
    *this = lift(*this, o.chart());
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (den_ == o.den_) {
        num_ += o.num_;
    } else {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ = den_ * o.den_;
    }
    normalize();
    return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) { return *this += -o; }

RationalFunction& RationalFunction::operator*=(const RationalFunction& o0) {
    RationalFunction o = lift(o0, chart());
    *this = lift(*this, o.chart());
    if (is_zero()) return *this;
    if (o.is_zero()) return *this = o;
    num_ = num_ * o.num_;
    if (!o.is_polynomial()) den_ = den_ * o.den_;
    normalize();
    return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o0) {
    RationalFunction o = lift(o0, chart());
    if (o.is_zero()) throw DenominatorVanishes("division by the zero rational function");
    *this = lift(*this, o.chart());
    if (is_zero()) return *this;
    num_ = num_ * o.den_;
    den_ = den_ * o.num_;
    normalize();
    return *this;
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction out = *this;
    out.num_ = -out.num_;
    return out;
}

RationalFunction operator*(RationalFunction a, const Rational& c) {
    a.num_ *= c;
    if (a.num_.is_zero()) a.normalize();
    return a;
}

bool operator==(const RationalFunction& a0, const RationalFunction& b0) {
    RationalFunction a = lift(a0, b0.chart());
    RationalFunction b = lift(b0, a.chart());
    if (a.den_ == b.den_) return a.num_ == b.num_;
    return a.num_ * b.den_ == b.num_ * a.den_;
}

RationalFunction RationalFunction::pow(unsigned e) const {
    RationalFunction out(num_.pow(e), den_.pow(e));
    return out;
}

RationalFunction RationalFunction::derivative(std::size_t var) const {
    if (!chart().valid()) return *this;
    if (is_polynomial()) return RationalFunction(num_.derivative(var));
    Polynomial top = num_.derivative(var) * den_ - num_ * den_.derivative(var);
    return RationalFunction(std::move(top), den_ * den_).simplified();
}

Rational RationalFunction::evaluate(std::span<const Rational> x) const {
    if (!chart().valid()) return Rational(0);
    Rational d = den_.evaluate(x);
    if (d.is_zero()) throw DenominatorVanishes("denominator " + den_.to_string() + " vanishes");
    return num_.evaluate(x) / d;
}

double RationalFunction::evaluate(std::span<const double> x) const {
    if (!chart().valid()) return 0.0;
    if (is_polynomial()) return num_.evaluate(x);
    double d = den_.evaluate(x);
    if (d == 0.0) throw DenominatorVanishes("denominator " + den_.to_string() + " vanishes");
    return num_.evaluate(x) / d;
}

RationalFunction RationalFunction::simplified() const {
    if (is_polynomial()) return *this;
    if (auto q = try_divide(num_, den_)) return RationalFunction(std::move(*q));
    // The denominator may be a constant multiple of a polynomial factor of
    // the numerator; splitting off a common monomial content is cheap.
    auto min_exp = [](const Polynomial& p) {
        Exponents m = p.terms().begin()->first;
        for (const auto& [e, c] : p.terms())
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], e[i]);
        return m;
    };
    Exponents a = min_exp(num_), b = min_exp(den_);
    Exponents g(a.size());
    bool any = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = std::min(a[i], b[i]);
        any = any || g[i] > 0;
    }
    if (!any) return *this;
    Polynomial mono = Polynomial::monomial(chart(), g, Rational(1));
    return RationalFunction(exact_divide(num_, mono), exact_divide(den_, mono));
}

std::string RationalFunction::to_string() const {
    if (!chart().valid()) return "0";
    if (is_polynomial()) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

}  // namespace ccw
