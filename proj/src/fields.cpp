#include "ccw/fields.hpp"

#include "ccw/errors.hpp"

namespace ccw {

VectorField::VectorField(const Chart& chart) : chart_(chart), comps_(chart.dim(), RationalFunction(chart)) {}

VectorField::VectorField(const Chart& chart, std::vector<RationalFunction> comps)
    : chart_(chart), comps_(std::move(comps)) {
    if (comps_.size() != chart_.dim())
        throw InvalidArgument("vector field needs " + std::to_string(chart_.dim()) + " components");
    for (auto& c : comps_) {
        if (!c.chart().valid()) c = RationalFunction(chart_);
        require_same_chart(c.chart(), chart_, "vector field component");
    }
}

VectorField VectorField::coordinate(const Chart& chart, std::size_t var) {
    VectorField v(chart);
    v.comps_.at(var) = RationalFunction(chart, Rational(1));
    return v;
}

bool VectorField::is_zero() const {
    for (const auto& c : comps_)
        if (!c.is_zero()) return false;
    return true;
}

VectorField& VectorField::operator+=(const VectorField& o) {
    require_same_chart(chart_, o.chart_, "vector field sum");
    for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
    require_same_chart(chart_, o.chart_, "vector field difference");
    for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= o.comps_[i];
    return *this;
}

VectorField VectorField::operator-() const {
    VectorField out = *this;
    for (auto& c : out.comps_) c = -c;
    return out;
}

VectorField operator*(const RationalFunction& f, const VectorField& v) {
    VectorField out = v;
    for (auto& c : out.comps_) c = f * c;
    return out;
}

bool operator==(const VectorField& a, const VectorField& b) {
    if (!(a.chart_ == b.chart_)) return false;
    for (std::size_t i = 0; i < a.comps_.size(); ++i)
        if (!(a.comps_[i] == b.comps_[i])) return false;
    return true;
}

RationalFunction VectorField::apply(const RationalFunction& f) const {
    RationalFunction out(chart_);
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        if (comps_[i].is_zero()) continue;
        RationalFunction df = f.derivative(i);
        if (!df.is_zero()) out += comps_[i] * df;
    }
    return out;
}

std::vector<Rational> VectorField::evaluate(std::span<const Rational> x) const {
    std::vector<Rational> out;
    out.reserve(comps_.size());
    for (const auto& c : comps_) out.push_back(c.evaluate(x));
    return out;
}

std::vector<double> VectorField::evaluate(std::span<const double> x) const {
    std::vector<double> out;
    out.reserve(comps_.size());
    for (const auto& c : comps_) out.push_back(c.evaluate(x));
    return out;
}

namespace {

std::string coefficient_prefix(const RationalFunction& c, bool& negative) {
    negative = false;
    if (c.is_polynomial() && c.num().size() == 1) {
        const auto& [e, v] = c.num().leading();
        negative = v.sign() < 0;
        std::string s = (negative ? -c : c).to_string();
        if (total_degree(e) == 0 && abs(v).is_one()) return "";
        return s + "*";
    }
    return "(" + c.to_string() + ")*";
}

}  // namespace

std::string render_terms(const std::vector<std::pair<const RationalFunction*, std::string>>& terms) {
    std::string s;
    for (const auto& [c, basis] : terms) {
        bool neg = false;
        std::string pre = coefficient_prefix(*c, neg);
        if (s.empty()) {
            s += neg ? "-" : "";
        } else {
            s += neg ? " - " : " + ";
        }
        s += pre + basis;
    }
    return s.empty() ? "0" : s;
}

std::string VectorField::to_string() const {
    std::vector<std::pair<const RationalFunction*, std::string>> terms;
    for (std::size_t i = 0; i < comps_.size(); ++i)
        if (!comps_[i].is_zero()) terms.emplace_back(&comps_[i], "d/d" + chart_.name(i));
    return render_terms(terms);
}

PolyMap::PolyMap(Chart source, Chart target, std::vector<RationalFunction> exprs)
    : source_(std::move(source)), target_(std::move(target)), exprs_(std::move(exprs)) {
    if (exprs_.size() != target_.dim())
        throw InvalidArgument("map needs one expression per target coordinate");
    for (auto& e : exprs_) {
        if (!e.chart().valid()) e = RationalFunction(source_);
        require_same_chart(e.chart(), source_, "map expression");
    }
}

PolyMap PolyMap::identity(const Chart& chart) {
    std::vector<RationalFunction> ex;
    for (std::size_t i = 0; i < chart.dim(); ++i) ex.emplace_back(Polynomial::variable(chart, i));
    return {chart, chart, std::move(ex)};
}

RationalFunction PolyMap::apply(const Polynomial& f) const {
    if (f.chart().valid()) require_same_chart(f.chart(), target_, "map composition");
    std::vector<std::vector<RationalFunction>> powers(target_.dim());
    RationalFunction out(source_);
    for (const auto& [e, c] : f.terms()) {
        RationalFunction t(source_, c);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            auto& pw = powers[i];
            if (pw.empty()) pw.emplace_back(source_, Rational(1));
            while (pw.size() <= e[i]) pw.push_back(pw.back() * exprs_[i]);
            t *= pw[e[i]];
        }
        out += t;
    }
    return out;
}

RationalFunction PolyMap::apply(const RationalFunction& f) const {
    if (f.is_polynomial()) return apply(f.num());
    return (apply(f.num()) / apply(f.den())).simplified();
}

std::vector<Rational> PolyMap::evaluate(std::span<const Rational> x) const {
    std::vector<Rational> out;
    out.reserve(exprs_.size());
    for (const auto& e : exprs_) out.push_back(e.evaluate(x));
    return out;
}

std::vector<std::vector<Rational>> PolyMap::jacobian_at(std::span<const Rational> x) const {
    std::vector<std::vector<Rational>> j(target_.dim(), std::vector<Rational>(source_.dim()));
    for (std::size_t i = 0; i < target_.dim(); ++i)
        for (std::size_t k = 0; k < source_.dim(); ++k) j[i][k] = exprs_[i].derivative(k).evaluate(x);
    return j;
}

}  // namespace ccw
