#include "ccw/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ccw/errors.hpp"

namespace ccw {

unsigned total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0U); }

bool GrevlexGreater::operator()(const Exponents& a, const Exponents& b) const {
    unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

namespace {

void adopt_chart(Chart& mine, const Chart& other, const char* what) {
    if (!mine.valid()) {
        mine = other;
        return;
    }
    if (other.valid()) require_same_chart(mine, other, what);
}

bool divides(const Exponents& d, const Exponents& e) {
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > e[i]) return false;
    return true;
}

}  // namespace

Polynomial::Polynomial(Chart chart, const Rational& c) : chart_(std::move(chart)) {
    if (!c.is_zero()) terms_.emplace(Exponents(chart_.dim(), 0), c);
}

Polynomial Polynomial::variable(const Chart& chart, std::size_t i) {
    Exponents e(chart.dim(), 0);
    e.at(i) = 1;
    return monomial(chart, std::move(e), Rational(1));
}

Polynomial Polynomial::monomial(const Chart& chart, Exponents e, const Rational& c) {
    if (e.size() != chart.dim()) throw InvalidArgument("exponent vector length mismatch");
    Polynomial p(chart);
    if (!c.is_zero()) p.terms_.emplace(std::move(e), c);
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

Rational Polynomial::constant_term() const {
    if (terms_.empty()) return Rational(0);
    auto it = terms_.find(Exponents(chart_.dim(), 0));
    return it == terms_.end() ? Rational(0) : it->second;
}

unsigned Polynomial::degree() const {
    return terms_.empty() ? 0 : total_degree(terms_.begin()->first);
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    adopt_chart(chart_, o.chart_, "polynomial sum");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    adopt_chart(chart_, o.chart_, "polynomial difference");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (auto& [e, v] : out.terms_) v = -v;
    return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Chart chart = a.chart_;
    adopt_chart(chart, b.chart_, "polynomial product");
    Polynomial out(chart);
    if (a.is_zero() || b.is_zero()) return out;
    Exponents e(chart.dim());
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

Polynomial Polynomial::times_term(const Exponents& e, const Rational& c) const {
    Polynomial out(chart_);
    if (c.is_zero()) return out;
    Exponents f(e.size());
    for (const auto& [ea, ca] : terms_) {
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = ea[i] + e[i];
        out.terms_.emplace_hint(out.terms_.end(), f, ca * c);
    }
    return out;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial out(chart_, Rational(1));
    Polynomial b = *this;
    while (e) {
        if (e & 1U) out = out * b;
        e >>= 1U;
        if (e) b = b * b;
    }
    return out;
}

Polynomial Polynomial::derivative(std::size_t var) const {
    Polynomial out(chart_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents f = e;
        --f[var];
        out.add_term(f, c * Rational(static_cast<long>(e[var])));
    }
    return out;
}

Rational Polynomial::evaluate(std::span<const Rational> x) const {
    if (x.size() != chart_.dim() && !terms_.empty())
        throw InvalidArgument("evaluation point has wrong dimension");
    std::vector<std::vector<Rational>> powers(x.size());
    Rational sum(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            auto& pw = powers[i];
            if (pw.empty()) pw.emplace_back(1);
            while (pw.size() <= e[i]) pw.push_back(pw.back() * x[i]);
            t *= pw[e[i]];
        }
        sum += t;
    }
    return sum;
}

double Polynomial::evaluate(std::span<const double> x) const {
    if (x.size() != chart_.dim() && !terms_.empty())
        throw InvalidArgument("evaluation point has wrong dimension");
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c.to_double();
        for (std::size_t i = 0; i < e.size(); ++i)
            for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
        sum += t;
    }
    return sum;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        bool is_const = total_degree(e) == 0;
        Rational mag = abs(c);
        if (first) {
            if (c.sign() < 0) s += "-";
        } else {
            s += c.sign() < 0 ? " - " : " + ";
        }
        first = false;
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += chart_.name(i);
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (is_const) {
            s += mag.to_string();
        } else if (mag.is_one()) {
            s += mono;
        } else {
            s += mag.to_string() + "*" + mono;
        }
    }
    return s;
}

DivisionResult divide(const Polynomial& p, const Polynomial& g) {
    if (g.is_zero()) throw InvalidArgument("division by the zero polynomial");
    Chart chart = p.chart().valid() ? p.chart() : g.chart();
    if (p.chart().valid()) require_same_chart(p.chart(), g.chart(), "polynomial division");
    DivisionResult out{Polynomial(chart), Polynomial(chart)};
    Polynomial r = p;
    const auto& [lg_e, lg_c] = g.leading();
    Exponents f(chart.dim());
    while (!r.is_zero()) {
        auto [e, c] = r.leading();
        if (divides(lg_e, e)) {
            for (std::size_t i = 0; i < f.size(); ++i) f[i] = e[i] - lg_e[i];
            Rational q = c / lg_c;
            out.quotient.add_term(f, q);
            r -= g.times_term(f, q);
        } else {
            out.remainder.add_term(e, c);
            r.add_term(e, -c);
        }
    }
    return out;
}

Polynomial mod_reduce(const Polynomial& p, const Polynomial& g) { return divide(p, g).remainder; }

std::optional<Polynomial> try_divide(const Polynomial& p, const Polynomial& g) {
    if (g.is_zero()) throw InvalidArgument("division by the zero polynomial");
    if (g.is_constant()) return p * (Rational(1) / g.constant_term());
    // Early exit: the remainder is nonzero as soon as a leading term fails.
    Chart chart = p.chart().valid() ? p.chart() : g.chart();
    Polynomial q(chart);
    Polynomial r = p;
    const auto& [lg_e, lg_c] = g.leading();
    Exponents f(chart.dim());
    while (!r.is_zero()) {
        auto [e, c] = r.leading();
        if (!divides(lg_e, e)) return std::nullopt;
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = e[i] - lg_e[i];
        Rational qc = c / lg_c;
        q.add_term(f, qc);
        r -= g.times_term(f, qc);
    }
    return q;
}

Polynomial exact_divide(const Polynomial& p, const Polynomial& g) {
    auto q = try_divide(p, g);
    if (!q) throw InvalidArgument("polynomial division is not exact");
    return *q;
}

}  // namespace ccw
