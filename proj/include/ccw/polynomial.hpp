#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccw/chart.hpp"
#include "ccw/rational.hpp"

namespace ccw {

using Exponents = std::vector<unsigned>;

/// Graded reverse lexicographic order on exponent vectors, with the chart's
/// declared variable order (first variable is the largest).
struct GrevlexGreater {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

unsigned total_degree(const Exponents& e);

/// Sparse multivariate polynomial with exact rational coefficients.
/// Terms are kept in decreasing grevlex order, so the first term is leading.
class Polynomial {
public:
    using TermMap = std::map<Exponents, Rational, GrevlexGreater>;

    Polynomial() = default;
    explicit Polynomial(Chart chart) : chart_(std::move(chart)) {}
    Polynomial(Chart chart, const Rational& c);

    static Polynomial constant(const Chart& chart, const Rational& c) { return {chart, c}; }
    static Polynomial variable(const Chart& chart, std::size_t i);
    static Polynomial monomial(const Chart& chart, Exponents e, const Rational& c);

    const Chart& chart() const { return chart_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Value of the constant term (the polynomial itself when is_constant()).
    Rational constant_term() const;
    unsigned degree() const;

    /// Leading term in grevlex order; precondition !is_zero().
    const std::pair<const Exponents, Rational>& leading() const { return *terms_.begin(); }

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    Polynomial operator-() const;

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.terms_ == b.terms_;
    }

    Polynomial pow(unsigned e) const;
    Polynomial derivative(std::size_t var) const;

    Rational evaluate(std::span<const Rational> x) const;
    double evaluate(std::span<const double> x) const;

    /// Multiplies by a monomial c*x^e.
    Polynomial times_term(const Exponents& e, const Rational& c) const;

    /// Canonical text: terms in monomial order, "p/q" coefficients, "x^2*y".
    std::string to_string() const;

    void add_term(const Exponents& e, const Rational& c);

private:
    Chart chart_;
    TermMap terms_;
};

struct DivisionResult {
    Polynomial quotient;
    Polynomial remainder;
};

/// Multivariate division of p by the single divisor g (grevlex).
/// p = quotient * g + remainder, and no term of remainder is divisible by LT(g).
DivisionResult divide(const Polynomial& p, const Polynomial& g);

/// Remainder of division by g; zero exactly when p lies in the ideal (g).
Polynomial mod_reduce(const Polynomial& p, const Polynomial& g);

/// Quotient p/g when g divides p; throws InvalidArgument otherwise.
Polynomial exact_divide(const Polynomial& p, const Polynomial& g);

/// Quotient when g divides p, nullopt otherwise.
std::optional<Polynomial> try_divide(const Polynomial& p, const Polynomial& g);

}  // namespace ccw
