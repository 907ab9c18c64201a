#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ccw/ratfunc.hpp"

namespace ccw {

/// Vector field with one rational-function component per coordinate.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const Chart& chart);
    VectorField(const Chart& chart, std::vector<RationalFunction> comps);

    /// d/d(var).
    static VectorField coordinate(const Chart& chart, std::size_t var);

    const Chart& chart() const { return chart_; }
    std::size_t dim() const { return comps_.size(); }
    const RationalFunction& operator[](std::size_t i) const { return comps_[i]; }
    RationalFunction& operator[](std::size_t i) { return comps_[i]; }
    const std::vector<RationalFunction>& components() const { return comps_; }

    bool is_zero() const;

    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
    VectorField operator-() const;
    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
    friend VectorField operator*(const RationalFunction& f, const VectorField& v);
    friend bool operator==(const VectorField& a, const VectorField& b);

    /// Directional derivative X(f).
    RationalFunction apply(const RationalFunction& f) const;

    std::vector<Rational> evaluate(std::span<const Rational> x) const;
    std::vector<double> evaluate(std::span<const double> x) const;

    /// "c1*d/dx + c2*d/dy"; zero field renders as "0".
    std::string to_string() const;

private:
    Chart chart_;
    std::vector<RationalFunction> comps_;
};

/// Joins (coefficient, basis symbol) pairs as "c*basis + ...". Multi-term
/// coefficients are parenthesized; unit coefficients are dropped.
std::string render_terms(const std::vector<std::pair<const RationalFunction*, std::string>>& terms);

/// Map between charts given by one expression (in source coordinates) per
/// target coordinate.
class PolyMap {
public:
    PolyMap() = default;
    PolyMap(Chart source, Chart target, std::vector<RationalFunction> exprs);

    static PolyMap identity(const Chart& chart);

    const Chart& source() const { return source_; }
    const Chart& target() const { return target_; }
    const std::vector<RationalFunction>& exprs() const { return exprs_; }

    /// f o F for f on the target chart.
    RationalFunction apply(const Polynomial& f) const;
    RationalFunction apply(const RationalFunction& f) const;

    /// Image point (exact).
    std::vector<Rational> evaluate(std::span<const Rational> x) const;

    /// Jacobian column j: F_*(d/du_j), evaluated at a parameter point.
    std::vector<std::vector<Rational>> jacobian_at(std::span<const Rational> x) const;

private:
    Chart source_;
    Chart target_;
    std::vector<RationalFunction> exprs_;
};

}  // namespace ccw
