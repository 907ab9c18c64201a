#pragma once

#include <span>
#include <string>

#include "ccw/polynomial.hpp"

namespace ccw {

/// Quotient of polynomials, stored unreduced. Equality is cross-multiplication.
///
/// A constant denominator is always folded into the numerator, so polynomial
/// values carry the denominator 1; that keeps the common case cheap.
class RationalFunction {
public:
    RationalFunction() = default;
    explicit RationalFunction(const Chart& chart) : num_(chart), den_(chart, Rational(1)) {}
    RationalFunction(Polynomial p);  // NOLINT(google-explicit-constructor)
    RationalFunction(Polynomial num, Polynomial den);
    RationalFunction(const Chart& chart, const Rational& c)
        : RationalFunction(Polynomial(chart, c)) {}

    const Chart& chart() const { return num_.chart(); }
    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    /// Constant value; precondition is_constant().
    Rational constant_value() const;

    RationalFunction& operator+=(const RationalFunction& o);
    RationalFunction& operator-=(const RationalFunction& o);
    RationalFunction& operator*=(const RationalFunction& o);
    RationalFunction& operator/=(const RationalFunction& o);
    RationalFunction operator-() const;

    friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
    friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
    friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
    friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
    friend RationalFunction operator*(RationalFunction a, const Rational& c);
    friend RationalFunction operator*(const Rational& c, RationalFunction a) { return std::move(a) * c; }

    /// n1*d2 - n2*d1 == 0.
    friend bool operator==(const RationalFunction& a, const RationalFunction& b);

    RationalFunction pow(unsigned e) const;
    RationalFunction derivative(std::size_t var) const;

    /// Throws DenominatorVanishes when the denominator is zero at x.
    Rational evaluate(std::span<const Rational> x) const;
    double evaluate(std::span<const double> x) const;

    /// Cancels the denominator when it divides the numerator exactly and
    /// normalizes the denominator's leading coefficient to 1.
    RationalFunction simplified() const;

    /// Polynomial text, or "(num)/(den)".
    std::string to_string() const;

private:
    void normalize();

    Polynomial num_;
    Polynomial den_;
};

}  // namespace ccw
