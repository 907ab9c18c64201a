#include "doctest.h"

#include "ccw/errors.hpp"
#include "ccw/kform.hpp"
#include "ccw/linsolve.hpp"
#include "../support/generators.hpp"

using namespace ccw;

namespace {

Polynomial var(const Chart& c, const char* n) { return Polynomial::variable(c, *c.index_of(n)); }
KForm dv(const Chart& c, const char* n) { return KForm::basis(c, *c.index_of(n)); }
RationalFunction rf(Polynomial p) { return RationalFunction(std::move(p)); }
Polynomial k(const Chart& c, long n, long d = 1) { return Polynomial(c, Rational(n, d)); }

// Coordinate-formula Lie derivative, independent of the Cartan route.
KForm lie_by_coordinates(const VectorField& x, const KForm& a) {
    KForm out(a.chart(), a.grade());
    for (const auto& [m, c] : a.coeffs()) {
        auto idx = mask_indices(m);
        out += KForm::term(a.chart(), idx, x.apply(c));
        for (std::size_t p = 0; p < idx.size(); ++p) {
            KForm t = KForm::scalar(c);
            for (std::size_t q = 0; q < idx.size(); ++q)
                t = wedge(t, q == p ? differential(x[idx[q]]) : KForm::basis(a.chart(), idx[q]));
            out += t;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("rational normal form") {
    Rational r(6, -4);
    CHECK(r.to_string() == "-3/2");
    CHECK(Rational::parse("10/4") == Rational(5, 2));
    CHECK(Rational(0, 7).to_string() == "0");
    CHECK_THROWS_AS(Rational::parse("1/0"), InvalidArgument);
    CHECK_THROWS_AS(Rational::parse("1/"), InvalidArgument);
}

TEST_CASE("chart validation") {
    CHECK_THROWS_AS(Chart({"x", "x"}), InvalidArgument);
    Chart c{"x", "y"};
    CHECK(c.dim() == 2);
    CHECK(c == Chart({"x", "y"}));
    CHECK_FALSE(c == Chart({"y", "x"}));
}

TEST_CASE("grevlex order and rendering") {
    Chart c{"x", "y", "z"};
    // x*z vs y^2: same degree, smaller exponent in z wins.
    Polynomial p = var(c, "x") * var(c, "z") + var(c, "y").pow(2) + var(c, "x") + k(c, 3, 2);
    CHECK(p.to_string() == "y^2 + x*z + x + 3/2");
    CHECK((-var(c, "x")).to_string() == "-x");
    CHECK(Polynomial(c).to_string() == "0");
}

TEST_CASE("evaluate") {
    Chart c{"x", "y"};
    Polynomial p = var(c, "x").pow(2) + var(c, "y");
    std::vector<Rational> at{2, 3};
    CHECK(p.evaluate(std::span<const Rational>(at)) == Rational(7));
    RationalFunction inv(k(c, 1), var(c, "x"));
    std::vector<Rational> zero{0, 1};
    CHECK_THROWS_AS(inv.evaluate(std::span<const Rational>(zero)), DenominatorVanishes);

    Chart d{"x1", "y1", "z"};
    Polynomial h = var(d, "z") + Rational(3, 2) * var(d, "x1") * var(d, "y1");
    std::vector<Rational> one{1, 1, 1};
    CHECK(h.evaluate(std::span<const Rational>(one)) == Rational(5, 2));
}

TEST_CASE("mod_reduce") {
    Chart c{"x1", "y1"};
    Polynomial x = var(c, "x1"), y = var(c, "y1");
    Polynomial g = x * x + y * y - k(c, 1);
    CHECK(mod_reduce(g, g).is_zero());
    CHECK(mod_reduce(x * x * y, g) == y - y.pow(3));
    CHECK(mod_reduce(k(c, 1), g) == k(c, 1));
    auto [q, r] = divide(x * x * y, g);
    CHECK(q * g + r == x * x * y);
}

TEST_CASE("wedge") {
    Chart c{"x", "y", "z"};
    KForm dx = dv(c, "x"), dy = dv(c, "y"), dz = dv(c, "z");
    CHECK(wedge(dx, dy) == -wedge(dy, dx));
    KForm t = wedge(dz, wedge(dx, dy));
    CHECK(t.coefficient(0b111).constant_value() == Rational(1));

    Chart d{"x1", "y1", "z"};
    Polynomial x = var(d, "x1"), y = var(d, "y1");
    KForm alpha = dv(d, "z") + rf(Rational(1, 2) * x) * dv(d, "y1") - rf(Rational(1, 2) * y) * dv(d, "x1");
    KForm top = wedge(alpha, ext_d(alpha));
    // dz^dx1^dy1 is an even permutation of dx1^dy1^dz.
    CHECK(top == KForm::volume(d));
    CHECK(top.to_string() == "dx1^dy1^dz");
}

TEST_CASE("ext_d") {
    Chart c{"x", "y", "z"};
    Polynomial x = var(c, "x"), y = var(c, "y");
    CHECK(ext_d(rf(x) * dv(c, "y")) == wedge(dv(c, "x"), dv(c, "y")));
    CHECK(ext_d(ext_d(rf(x * x * y) * dv(c, "z"))).is_zero());

    Chart d{"x1", "y1", "x2", "y2"};
    KForm lam(d, 1), omega(d, 2);
    for (int i = 1; i <= 2; ++i) {
        std::string xs = "x" + std::to_string(i), ys = "y" + std::to_string(i);
        lam += rf(Rational(1, 2) * var(d, xs.c_str())) * dv(d, ys.c_str());
        lam -= rf(Rational(1, 2) * var(d, ys.c_str())) * dv(d, xs.c_str());
        omega += wedge(dv(d, xs.c_str()), dv(d, ys.c_str()));
    }
    CHECK(ext_d(lam) == omega);
}

TEST_CASE("interior product") {
    Chart c{"x", "y", "z"};
    KForm dxdy = wedge(dv(c, "x"), dv(c, "y"));
    CHECK(interior_product(VectorField::coordinate(c, 0), dxdy) == dv(c, "y"));
    CHECK(interior_product(VectorField::coordinate(c, 2), dxdy).is_zero());
    VectorField radial(c, {rf(var(c, "x")), rf(var(c, "y")), RationalFunction(c)});
    CHECK(interior_product(radial, dxdy) == rf(var(c, "x")) * dv(c, "y") - rf(var(c, "y")) * dv(c, "x"));
}

TEST_CASE("lie derivative") {
    Chart c{"x", "z"};
    CHECK(lie_derivative(VectorField::coordinate(c, 1), rf(var(c, "z")) * dv(c, "x")) == dv(c, "x"));
    Chart line{"x"};
    VectorField two_x(line, {rf(Rational(2) * var(line, "x"))});
    CHECK(lie_derivative(two_x, dv(line, "x")) == rf(k(line, 2)) * dv(line, "x"));
}

TEST_CASE("pullback") {
    Chart src{"u", "t", "x"};
    Polynomial u = var(src, "u"), t = var(src, "t"), x = var(src, "x");
    PolyMap shear(src, src, {rf(u), rf(t), rf(x + Rational(1, 2) * u * t)});
    KForm a = rf(Rational(1, 2) * u) * dv(src, "t") - rf(Rational(1, 2) * t) * dv(src, "u") + dv(src, "x");
    CHECK(pullback(shear, a) == rf(u) * dv(src, "t") + dv(src, "x"));
    CHECK(pullback(PolyMap::identity(src), a) == a);

    Chart s{"s"};
    Chart uv{"u", "v"};
    Polynomial sv = var(s, "s");
    PolyMap f(s, uv, {rf(sv * sv), rf(sv)});
    CHECK(pullback(f, dv(uv, "u")) == rf(Rational(2) * sv) * dv(s, "s"));
}

TEST_CASE("rational functions") {
    Chart c{"x", "y"};
    Polynomial x = var(c, "x"), y = var(c, "y");
    RationalFunction a(x * x - y * y, x - y);
    CHECK(a == rf(x + y));
    CHECK(a.simplified().is_polynomial());
    RationalFunction b(k(c, 1), x);
    CHECK(b.derivative(0) == RationalFunction(k(c, -1), x * x));
    CHECK((b * rf(x)) == rf(k(c, 1)));
}

TEST_CASE("solve_unique") {
    Chart c{"x", "y"};
    Polynomial x = var(c, "x"), y = var(c, "y");
    RFMatrix a{{rf(x), rf(y)}, {rf(k(c, 1)), rf(k(c, -1))}};
    std::vector<RationalFunction> b{rf(k(c, 1)), RationalFunction(c)};
    auto sol = solve_unique(a, b);
    CHECK(sol[0] == RationalFunction(k(c, 1), x + y));
    CHECK(sol[1] == RationalFunction(k(c, 1), x + y));

    RFMatrix sing{{rf(x), rf(y)}, {rf(x * x), rf(x * y)}};
    CHECK_THROWS_AS(solve_unique(sing, b), SingularSystem);

    RFMatrix over{{rf(k(c, 1))}, {rf(k(c, 1))}};
    std::vector<RationalFunction> bad{rf(k(c, 1)), rf(k(c, 2))};
    CHECK_THROWS_AS(solve_unique(over, bad), InconsistentSystem);
    std::vector<RationalFunction> good{rf(x), rf(x)};
    CHECK(solve_unique(over, good)[0] == rf(x));
}

TEST_CASE("exact linear algebra at points") {
    QMatrix m{{1, 2, 3}, {2, 4, 6}};
    CHECK(rank(m) == 1);
    auto ker = kernel(m, 3);
    CHECK(ker.size() == 2);
    for (const auto& v : ker) CHECK(v[0] + Rational(2) * v[1] + Rational(3) * v[2] == Rational(0));
    CHECK(determinant(QMatrix{{2, 1}, {1, 1}}) == Rational(1));
}

TEST_CASE("property: ring axioms") {
    testgen::Rng rng(11);
    Chart c = testgen::chart_of_dim(3);
    for (int i = 0; i < 100; ++i) {
        Polynomial a = testgen::random_poly(rng, c), b = testgen::random_poly(rng, c),
                   d = testgen::random_poly(rng, c);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + d == a + (b + d));
        CHECK((a * b) * d == a * (b * d));
        CHECK(a * (b + d) == a * b + a * d);
    }
}

TEST_CASE("property: exterior calculus identities") {
    testgen::Rng rng(5);
    for (int i = 0; i < 60; ++i) {
        std::size_t dim = 2 + static_cast<std::size_t>(rng() % 4);
        Chart c = testgen::chart_of_dim(dim);
        unsigned g = static_cast<unsigned>(rng() % dim);
        unsigned h = static_cast<unsigned>(rng() % (dim - g + 1));
        KForm a = testgen::random_form(rng, c, g), b = testgen::random_form(rng, c, h);
        VectorField x = testgen::random_field(rng, c);
        CHECK(ext_d(ext_d(a)).is_zero());
        CHECK(lie_derivative(x, a) == lie_by_coordinates(x, a));
        KForm lhs = interior_product(x, wedge(a, b));
        KForm rhs = wedge(interior_product(x, a), b);
        KForm second = wedge(a, interior_product(x, b));
        rhs += (g % 2) ? -second : second;
        CHECK(lhs == rhs);
        KForm ab = wedge(a, b), ba = wedge(b, a);
        CHECK(ab == (((g * h) % 2) ? -ba : ba));
        PolyMap f = testgen::random_map(rng, c, c);
        CHECK(pullback(f, ext_d(a)) == ext_d(pullback(f, a)));
        CHECK(pullback(f, wedge(a, b)) == wedge(pullback(f, a), pullback(f, b)));
    }
}

TEST_CASE("property: mod_reduce quotient reconstruction") {
    testgen::Rng rng(3);
    Chart c = testgen::chart_of_dim(3);
    for (int i = 0; i < 100; ++i) {
        Polynomial g = testgen::random_poly(rng, c, 2, 3);
        if (g.is_zero()) continue;
        Polynomial q0 = testgen::random_poly(rng, c);
        Polynomial p = q0 * g;
        CHECK(mod_reduce(p, g).is_zero());
        Polynomial p2 = p + testgen::random_poly(rng, c);
        auto [q, r] = divide(p2, g);
        CHECK(q * g + r == p2);
        const Exponents& lead = g.leading().first;
        for (const auto& [e, coef] : r.terms()) {
            bool divisible = true;
            for (std::size_t j = 0; j < e.size(); ++j) divisible = divisible && e[j] >= lead[j];
            CHECK_FALSE(divisible);
        }
    }
}
