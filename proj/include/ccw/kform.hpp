#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ccw/fields.hpp"

namespace ccw {

/// Strictly increasing index tuple, encoded as a bit set over coordinates.
using BasisMask = std::uint32_t;

std::vector<std::size_t> mask_indices(BasisMask m);
BasisMask indices_mask(std::span<const std::size_t> idx);

/// Differential k-form on a chart with rational-function coefficients.
class KForm {
public:
    using CoeffMap = std::map<BasisMask, RationalFunction>;

    KForm() = default;
    KForm(const Chart& chart, unsigned grade);

    static KForm zero(const Chart& chart, unsigned grade) { return {chart, grade}; }
    static KForm scalar(const RationalFunction& f);
    /// d(var).
    static KForm basis(const Chart& chart, std::size_t var);
    static KForm term(const Chart& chart, std::span<const std::size_t> idx, const RationalFunction& c);
    /// Standard volume form dx_1 ^ ... ^ dx_dim.
    static KForm volume(const Chart& chart);

    const Chart& chart() const { return chart_; }
    unsigned grade() const { return grade_; }
    const CoeffMap& coeffs() const { return coeffs_; }
    RationalFunction coefficient(BasisMask m) const;
    /// Coefficient of the grade-0 part (precondition grade()==0).
    RationalFunction as_scalar() const { return coefficient(0); }

    bool is_zero() const { return coeffs_.empty(); }

    KForm& operator+=(const KForm& o);
    KForm& operator-=(const KForm& o);
    KForm operator-() const;
    friend KForm operator+(KForm a, const KForm& b) { return a += b; }
    friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
    friend KForm operator*(const RationalFunction& f, const KForm& a);
    friend bool operator==(const KForm& a, const KForm& b);

    void add_term(BasisMask m, const RationalFunction& c);

    /// Constant coefficients at x (exact).
    std::map<BasisMask, Rational> evaluate(std::span<const Rational> x) const;

    /// "c*dx1^dy1 + ..." in increasing tuple order; zero renders as "0".
    std::string to_string() const;

private:
    Chart chart_;
    unsigned grade_ = 0;
    CoeffMap coeffs_;
};

/// Sign of dx_I ^ dx_J relative to dx_{I u J}; 0 when I and J overlap.
int wedge_sign(BasisMask a, BasisMask b);

KForm wedge(const KForm& a, const KForm& b);
KForm ext_d(const KForm& a);
KForm interior_product(const VectorField& x, const KForm& a);
/// Cartan formula i_X d a + d i_X a.
KForm lie_derivative(const VectorField& x, const KForm& a);
KForm pullback(const PolyMap& f, const KForm& a);
/// n-th wedge power (n >= 0); power 0 is the constant 1.
KForm wedge_power(const KForm& a, unsigned n);

/// Differential of a scalar.
KForm differential(const RationalFunction& f);

/// Matrix of a 2-form: omega(e_i, e_j).
std::vector<std::vector<RationalFunction>> two_form_matrix(const KForm& omega);

/// One-form coefficients as a dense covector.
std::vector<RationalFunction> one_form_vector(const KForm& a);

}  // namespace ccw
