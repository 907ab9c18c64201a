#include "doctest.h"

#include "ccw/contact.hpp"
#include "ccw/errors.hpp"
#include "ccw/models.hpp"
#include "../support/build.hpp"
#include "../support/generators.hpp"

using namespace ccw;
using namespace ccw::build;

TEST_CASE("check_contact constants") {
    // Hand expansion: alpha ^ (d alpha)^n = n! dx1^dy1^...^dz.
    const Rational expected[] = {Rational(1), Rational(2), Rational(6)};
    for (std::size_t n = 1; n <= 3; ++n) {
        Chart c = darboux_chart(n);
        ContactCheck r = check_contact(ContactBundle(standard_alpha(c)));
        CHECK(r.kind == ContactCheck::Kind::ExactConstant);
        CHECK(r.constant == expected[n - 1]);
    }
    Chart c{"x", "y", "z"};
    CHECK(check_contact(ContactBundle(d(c, "z"))).kind == ContactCheck::Kind::Fails);
}

TEST_CASE("check_contact sampled") {
    Chart c{"x", "y", "z"};
    // (1 + x^2) dz - y dx: top coefficient 1 + x^2, nonconstant but never zero.
    KForm a = f(k(c, 1) + v(c, "x") * v(c, "x")) * d(c, "z") - f(v(c, "y")) * d(c, "x");
    ContactCheck r = check_contact(ContactBundle(a));
    CHECK(r.kind == ContactCheck::Kind::NonvanishingSampled);
    CHECK(r.samples == 11 * 11 * 11);
    // dz + x^3 dy has top coefficient 3x^2, zero on the grid plane x = 0.
    KForm b = d(c, "z") + f(v(c, "x").pow(3)) * d(c, "y");
    ContactCheck s = check_contact(ContactBundle(b));
    CHECK(s.kind == ContactCheck::Kind::Fails);
    CHECK(s.witness.has_value());
}

TEST_CASE("reeb fields") {
    for (std::size_t n = 1; n <= 3; ++n) {
        Chart c = darboux_chart(n);
        CHECK(reeb_field(ContactBundle(standard_alpha(c))) == VectorField::coordinate(c, c.dim() - 1));
    }
    Chart sc{"s", "v", "x"};
    KForm collar = f(k(sc, 3)) * d(sc, "s") + f(v(sc, "v")) * d(sc, "x");
    CHECK(reeb_field(ContactBundle(collar)) == field(sc, {{"s", f(k(sc, 1, 3))}}));
    Chart c{"x", "y", "z"};
    CHECK(reeb_field(ContactBundle(d(c, "z") - f(v(c, "y")) * d(c, "x"))) == VectorField::coordinate(c, 2));
    CHECK_THROWS_AS(reeb_field(ContactBundle(d(c, "z"))), SingularSystem);
}

TEST_CASE("ham_to_field and field_to_ham") {
    Chart c = darboux_chart(1);
    ContactBundle b(standard_alpha(c));
    VectorField r = reeb_field(b);
    CHECK(ham_to_field(b, RationalFunction(c, Rational(1))) == r);
    CHECK(field_to_ham(b, r) == RationalFunction(c, Rational(1)));

    Polynomial x = v(c, "x1"), y = v(c, "y1"), z = v(c, "z");
    VectorField x1 = field(c, {{"z", f(z)}, {"x1", f(-x)}, {"y1", f(k(c, 2) * y)}});
    RationalFunction h1 = f(z + Rational(3, 2) * x * y);
    CHECK(ham_to_field(b, h1) == x1);
    CHECK(field_to_ham(b, x1) == h1);

    Chart c2 = darboux_chart(2);
    VectorField x2 = standard_field(c2, 2);
    Polynomial h2 = v(c2, "z") + Rational(3, 2) * (v(c2, "x1") * v(c2, "y1") + v(c2, "x2") * v(c2, "y2"));
    CHECK(field_to_ham(ContactBundle(standard_alpha(c2)), x2) == f(h2));

    // Cancellation model, typed independently of the models module.
    Rational eps(-1, 4);
    KForm alpha = -d(c, "z") - f(Rational(1, 2) * x) * d(c, "y1") + f(Rational(1, 2) * y) * d(c, "x1");
    ContactBundle cb(alpha);
    VectorField xe = field(c, {{"z", f(z * z + k(c, -1, 4))},
                               {"x1", f(x * z - Rational(3, 2) * x)},
                               {"y1", f(y * z + Rational(3, 2) * y)}});
    RationalFunction he = f(-(z * z) - Rational(3, 2) * x * y - Polynomial(c, eps));
    CHECK(ham_to_field(cb, he) == xe);
    CHECK(field_to_ham(cb, xe) == he);
}

TEST_CASE("expansion coefficients") {
    ModelBundle sub = standard_convex(1, 0), sup = standard_convex(1, 2);
    ExpansionResult es = expansion_coefficient(sub.bundle, *sub.bundle.X);
    CHECK(es.mu == RationalFunction(sub.bundle.chart, Rational(1)));
    CHECK(es.is_contact_field());
    CHECK(expansion_coefficient(sup.bundle, *sup.bundle.X).mu == RationalFunction(sup.bundle.chart, Rational(-1)));

    Chart line{"x"};
    ContactBundle lb(d(line, "x"));
    VectorField two_x = field(line, {{"x", f(k(line, 2) * v(line, "x"))}});
    CHECK(expansion_coefficient(lb, two_x).mu == RationalFunction(line, Rational(2)));

    Chart c = darboux_chart(1);
    ContactBundle db(standard_alpha(c));
    CHECK_FALSE(expansion_coefficient(db, VectorField::coordinate(c, 0)).is_contact_field());
}

TEST_CASE("verify_critical_point") {
    ModelBundle m = standard_convex(2, 1);
    Chart c = m.bundle.chart;
    auto at0 = verify_critical_point(m.bundle, pt(c, {0, 0, 0, 0, 0}));
    CHECK(at0.is_zero);
    CHECK(at0.mu == Rational(1));
    auto off = verify_critical_point(m.bundle, pt(c, {1, 0, 0, 0, 0}));
    CHECK_FALSE(off.is_zero);

    ModelBundle ce = cancellation_model(1, Rational(-1, 4));
    auto cp = verify_critical_point(ce.bundle, pt(ce.bundle.chart, {0, 0, Rational(1, 2)}));
    CHECK(cp.is_zero);
    CHECK(cp.mu == Rational(1));
}

TEST_CASE("liouville fields") {
    Chart c{"x", "y"};
    KForm l1 = f(Rational(1, 2) * v(c, "x")) * d(c, "y") - f(Rational(1, 2) * v(c, "y")) * d(c, "x");
    CHECK(liouville_field(l1) == field(c, {{"x", f(Rational(1, 2) * v(c, "x"))}, {"y", f(Rational(1, 2) * v(c, "y"))}}));
    CHECK(liouville_field(f(v(c, "x")) * d(c, "y")) == field(c, {{"x", f(v(c, "x"))}}));
    Chart vx{"v", "x"};
    CHECK(liouville_field(f(v(vx, "v")) * d(vx, "x")) == field(vx, {{"v", f(v(vx, "v"))}}));
}

TEST_CASE("property: catalog contact identities") {
    std::vector<ModelBundle> catalog;
    for (std::size_t n = 1; n <= 2; ++n)
        for (std::size_t kk = 0; kk <= 2 * n + 1; ++kk) catalog.push_back(standard_convex(n, kk));
    catalog.push_back(cancellation_model(1, Rational(-1, 4)));
    catalog.push_back(cancellation_model(2, Rational(1, 9)));
    catalog.push_back(sutured_collar(Rational(2, 3)));
    for (const auto& m : catalog) {
        const ContactBundle& b = m.bundle;
        VectorField r = reeb_field(b);
        CHECK(interior_product(r, b.alpha).as_scalar() == RationalFunction(b.chart, Rational(1)));
        CHECK(interior_product(r, ext_d(b.alpha)).is_zero());
        CHECK(ham_to_field(b, field_to_ham(b, *b.X)) == *b.X);
        CHECK(expansion_coefficient(b, *b.X).is_contact_field());
    }
}

TEST_CASE("property: mu of a Hamiltonian field is dH(R)") {
    testgen::Rng rng(17);
    Chart c = darboux_chart(2);
    ContactBundle b(standard_alpha(c));
    VectorField r = reeb_field(b);
    for (int i = 0; i < 30; ++i) {
        RationalFunction h(testgen::random_poly(rng, c, 3, 4));
        VectorField x = ham_to_field(b, h, r);
        ExpansionResult e = expansion_coefficient(b, x);
        CHECK(e.is_contact_field());
        CHECK(e.mu == r.apply(h));
        CHECK(e.hamiltonian == h);
    }
}

TEST_CASE("property: Liouville identity") {
    testgen::Rng rng(23);
    Chart c{"x1", "y1", "x2", "y2"};
    for (int i = 0; i < 20; ++i) {
        // Standard Liouville form plus an exact perturbation keeps d(lambda) standard.
        KForm lam = f(v(c, "x1")) * d(c, "y1") + f(v(c, "x2")) * d(c, "y2");
        lam += differential(RationalFunction(testgen::random_poly(rng, c, 3, 3)));
        VectorField z = liouville_field(lam);
        CHECK(interior_product(z, ext_d(lam)) == lam);
    }
}
