#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ccw/kform.hpp"

// Terse constructors for hand-written fixtures.
namespace ccw::build {

inline Polynomial v(const Chart& c, const std::string& n) { return Polynomial::variable(c, *c.index_of(n)); }
inline Polynomial k(const Chart& c, long num, long den = 1) { return Polynomial(c, Rational(num, den)); }
inline RationalFunction f(Polynomial p) { return RationalFunction(std::move(p)); }
inline KForm d(const Chart& c, const std::string& n) { return KForm::basis(c, *c.index_of(n)); }

inline VectorField field(const Chart& c, const std::vector<std::pair<std::string, RationalFunction>>& parts) {
    VectorField x(c);
    for (const auto& [n, coeff] : parts) x[*c.index_of(n)] += coeff;
    return x;
}

inline PointQ pt(const Chart& c, std::vector<Rational> x) { return {c, std::move(x)}; }

}  // namespace ccw::build
