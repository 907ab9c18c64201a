#include "ccw/kform.hpp"

#include <bit>

#include "ccw/errors.hpp"

namespace ccw {

std::vector<std::size_t> mask_indices(BasisMask m) {
    std::vector<std::size_t> out;
    while (m) {
        out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        m &= m - 1;
    }
    return out;
}

BasisMask indices_mask(std::span<const std::size_t> idx) {
    BasisMask m = 0;
    for (auto i : idx) m |= BasisMask{1} << i;
    return m;
}

int wedge_sign(BasisMask a, BasisMask b) {
    if (a & b) return 0;
    int inversions = 0;
    for (BasisMask rest = b; rest; rest &= rest - 1) {
        int j = std::countr_zero(rest);
        BasisMask above = j >= 31 ? 0 : (a >> (j + 1));
        inversions += std::popcount(above);
    }
    return (inversions & 1) ? -1 : 1;
}

KForm::KForm(const Chart& chart, unsigned grade) : chart_(chart), grade_(grade) {
    if (grade > chart.dim()) throw InvalidArgument("form grade exceeds chart dimension");
}

KForm KForm::scalar(const RationalFunction& f) {
    KForm out(f.chart(), 0);
    out.add_term(0, f);
    return out;
}

KForm KForm::basis(const Chart& chart, std::size_t var) {
    KForm out(chart, 1);
    if (var >= chart.dim()) throw InvalidArgument("basis index out of range");
    out.add_term(BasisMask{1} << var, RationalFunction(chart, Rational(1)));
    return out;
}

KForm KForm::term(const Chart& chart, std::span<const std::size_t> idx, const RationalFunction& c) {
    KForm out(chart, static_cast<unsigned>(idx.size()));
    BasisMask m = indices_mask(idx);
    if (static_cast<std::size_t>(std::popcount(m)) != idx.size()) return out;
    // Sort the tuple, tracking the permutation parity.
    std::vector<std::size_t> v(idx.begin(), idx.end());
    int sign = 1;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[i] > v[j]) sign = -sign;
    out.add_term(m, sign > 0 ? c : -c);
    return out;
}

KForm KForm::volume(const Chart& chart) {
    KForm out(chart, static_cast<unsigned>(chart.dim()));
    BasisMask m = chart.dim() >= 32 ? ~BasisMask{0} : ((BasisMask{1} << chart.dim()) - 1);
    out.add_term(m, RationalFunction(chart, Rational(1)));
    return out;
}

RationalFunction KForm::coefficient(BasisMask m) const {
    auto it = coeffs_.find(m);
    return it == coeffs_.end() ? RationalFunction(chart_) : it->second;
}

void KForm::add_term(BasisMask m, const RationalFunction& c) {
    if (c.is_zero()) return;
    if (static_cast<unsigned>(std::popcount(m)) != grade_) throw InvalidArgument("basis tuple has wrong length");
    if (c.chart().valid()) require_same_chart(c.chart(), chart_, "form coefficient");
    auto [it, inserted] = coeffs_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

KForm& KForm::operator+=(const KForm& o) {
    if (!chart_.valid()) return *this = o;
    require_same_chart(chart_, o.chart_, "form sum");
    if (grade_ != o.grade_ && !o.is_zero() && !is_zero()) throw InvalidArgument("sum of forms of different grade");
    if (is_zero()) grade_ = o.grade_;
    for (const auto& [m, c] : o.coeffs_) add_term(m, c);
    return *this;
}

KForm& KForm::operator-=(const KForm& o) { return *this += -o; }

KForm KForm::operator-() const {
    KForm out = *this;
    for (auto& [m, c] : out.coeffs_) c = -c;
    return out;
}

KForm operator*(const RationalFunction& f, const KForm& a) {
    KForm out(a.chart_, a.grade_);
    for (const auto& [m, c] : a.coeffs_) out.add_term(m, f * c);
    return out;
}

bool operator==(const KForm& a, const KForm& b) {
    if (!(a.chart_ == b.chart_)) return false;
    if (a.is_zero() && b.is_zero()) return true;
    if (a.grade_ != b.grade_) return false;
    return (a - b).is_zero();
}

std::map<BasisMask, Rational> KForm::evaluate(std::span<const Rational> x) const {
    std::map<BasisMask, Rational> out;
    for (const auto& [m, c] : coeffs_) {
        Rational v = c.evaluate(x);
        if (!v.is_zero()) out.emplace(m, v);
    }
    return out;
}

std::string KForm::to_string() const {
    if (grade_ == 0) return coefficient(0).to_string();
    std::vector<std::pair<const RationalFunction*, std::string>> terms;
    for (const auto& [m, c] : coeffs_) {
        std::string b;
        for (auto i : mask_indices(m)) {
            if (!b.empty()) b += "^";
            b += "d" + chart_.name(i);
        }
        terms.emplace_back(&c, b);
    }
    return render_terms(terms);
}

KForm wedge(const KForm& a, const KForm& b) {
    require_same_chart(a.chart(), b.chart(), "wedge");
    unsigned g = a.grade() + b.grade();
    if (g > a.chart().dim()) return KForm(a.chart(), static_cast<unsigned>(a.chart().dim()));
    KForm out(a.chart(), g);
    for (const auto& [ma, ca] : a.coeffs()) {
        for (const auto& [mb, cb] : b.coeffs()) {
            int s = wedge_sign(ma, mb);
            if (s == 0) continue;
            RationalFunction c = ca * cb;
            out.add_term(ma | mb, s > 0 ? c : -c);
        }
    }
    return out;
}

KForm ext_d(const KForm& a) {
    const Chart& chart = a.chart();
    if (a.grade() >= chart.dim()) return KForm(chart, static_cast<unsigned>(chart.dim()));
    KForm out(chart, a.grade() + 1);
    for (const auto& [m, c] : a.coeffs()) {
        for (std::size_t j = 0; j < chart.dim(); ++j) {
            BasisMask bit = BasisMask{1} << j;
            if (m & bit) continue;
            RationalFunction dc = c.derivative(j);
            if (dc.is_zero()) continue;
            int below = std::popcount(m & (bit - 1));
            out.add_term(m | bit, (below & 1) ? -dc : dc);
        }
    }
    return out;
}

KForm interior_product(const VectorField& x, const KForm& a) {
    require_same_chart(x.chart(), a.chart(), "interior product");
    if (a.grade() == 0) return KForm(a.chart(), 0);
    KForm out(a.chart(), a.grade() - 1);
    for (const auto& [m, c] : a.coeffs()) {
        auto idx = mask_indices(m);
        for (std::size_t p = 0; p < idx.size(); ++p) {
            const RationalFunction& xi = x[idx[p]];
            if (xi.is_zero()) continue;
            RationalFunction t = xi * c;
            out.add_term(m & ~(BasisMask{1} << idx[p]), (p & 1) ? -t : t);
        }
    }
    return out;
}

KForm lie_derivative(const VectorField& x, const KForm& a) {
    KForm out = interior_product(x, ext_d(a));
    if (a.grade() > 0) out += ext_d(interior_product(x, a));
    return out;
}

KForm differential(const RationalFunction& f) {
    KForm out(f.chart(), 1);
    for (std::size_t j = 0; j < f.chart().dim(); ++j) out.add_term(BasisMask{1} << j, f.derivative(j));
    return out;
}

KForm pullback(const PolyMap& f, const KForm& a) {
    require_same_chart(f.target(), a.chart(), "pullback");
    std::vector<KForm> dfs;
    dfs.reserve(f.exprs().size());
    for (const auto& e : f.exprs()) dfs.push_back(differential(e));
    unsigned g = a.grade();
    if (g > f.source().dim()) return KForm(f.source(), static_cast<unsigned>(f.source().dim()));
    KForm out(f.source(), g);
    for (const auto& [m, c] : a.coeffs()) {
        KForm t = KForm::scalar(f.apply(c));
        for (auto i : mask_indices(m)) {
            t = wedge(t, dfs[i]);
            if (t.is_zero()) break;
        }
        if (!t.is_zero()) out += t;
    }
    return out;
}

KForm wedge_power(const KForm& a, unsigned n) {
    KForm out = KForm::scalar(RationalFunction(a.chart(), Rational(1)));
    for (unsigned i = 0; i < n; ++i) out = wedge(out, a);
    return out;
}

std::vector<std::vector<RationalFunction>> two_form_matrix(const KForm& omega) {
    // A zero form of lower grade stands in for d of a top-degree form.
    if (omega.grade() != 2 && !omega.is_zero()) throw InvalidArgument("two_form_matrix needs a 2-form");
    std::size_t d = omega.chart().dim();
    std::vector<std::vector<RationalFunction>> m(d, std::vector<RationalFunction>(d, RationalFunction(omega.chart())));
    for (const auto& [mask, c] : omega.coeffs()) {
        auto idx = mask_indices(mask);
        m[idx[0]][idx[1]] = c;
        m[idx[1]][idx[0]] = -c;
    }
    return m;
}

std::vector<RationalFunction> one_form_vector(const KForm& a) {
    if (a.grade() != 1) throw InvalidArgument("one_form_vector needs a 1-form");
    std::vector<RationalFunction> v(a.chart().dim(), RationalFunction(a.chart()));
    for (const auto& [mask, c] : a.coeffs()) v[static_cast<std::size_t>(std::countr_zero(mask))] = c;
    return v;
}

}  // namespace ccw
