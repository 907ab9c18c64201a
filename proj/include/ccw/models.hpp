#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccw/contact.hpp"
#include "ccw/submanifolds.hpp"

namespace ccw {

/// (x1, y1, ..., xn, yn, z).
Chart darboux_chart(std::size_t n);
/// (x1, y1, ..., xn, yn).
Chart symplectic_chart(std::size_t n);
/// dz + 1/2 sum (x dy - y dx) on a Darboux chart.
KForm standard_alpha(const Chart& c);

struct ModelBundle {
    std::string name;
    ContactBundle bundle;
    std::optional<Rational> expected_contact_constant;
    std::optional<RationalFunction> expected_mu;
    std::optional<RationalFunction> expected_h;
    std::vector<PointQ> expected_critical;
};

struct FactCheck {
    std::string fact;
    bool ok = false;
    std::string detail;
};

/// Runs every expected fact carried by the model.
std::vector<FactCheck> self_check(const ModelBundle& m);
bool all_ok(const std::vector<FactCheck>& facts);

ModelBundle darboux(std::size_t n);

/// X_k for 0 <= k <= n and the matching Morse function phi_k.
VectorField standard_field(const Chart& c, std::size_t k);
Polynomial standard_phi(const Chart& c, std::size_t k);
/// Index-k model for 0 <= k <= 2n+1; supercritical indices use (-X, -phi) of the dual index.
ModelBundle standard_convex(std::size_t n, std::size_t k);

struct WeinsteinModel {
    Chart chart;
    KForm omega;
    KForm lambda;
    VectorField X;
    Polynomial phi;
    /// L_X omega - omega.
    KForm liouville_residual;
};

WeinsteinModel weinstein_standard(std::size_t n, std::size_t k);

struct SphereReport {
    std::size_t n = 0;
    Chart chart;
    KForm alpha;
    Polynomial g;
    VectorField xh;
    Polynomial phi;
    IdealIdentity tangency;       // dg(X_H) vs 0
    IdealIdentity hamiltonian;    // alpha(X_H) vs y1
    IdealIdentity dphi_norm;      // |dphi|_S|^2 vs 1 - x1^2
    IdealIdentity xh_norm;        // |X_H|^2 vs 1/4 (1 - x1^2 + 3 y1^2)
    IdealIdentity dphi_xh;        // dphi(X_H) vs 1 - x1^2 + y1^2
};

SphereReport sphere_example_report(std::size_t n);

/// (q1..qn, p1..pn, z).
Chart jet_chart(std::size_t n);

struct JetExample {
    ModelBundle model;  // X = X_H, phi = phi + |p|^2/2 + z^2/2
    RationalFunction hamiltonian;
    RationalFunction dphi_x;
    std::vector<RationalFunction> p_components;
    /// p_i + sum_j H_ij p_j as printed in the source example.
    std::vector<RationalFunction> displayed_p_components;
    bool displayed_matches = false;
    /// p_i - sum_j H_ij p_j, the form produced by ham_to_field.
    bool flipped_hessian_matches = false;
    std::size_t samples = 0;
    std::size_t positive_samples = 0;
};

/// phi_base is a polynomial in q on the jet chart; it is multiplied by `scale`.
JetExample jet_example(std::size_t n, const Polynomial& phi_base, const Rational& scale);
/// sum q_i^2 on the jet chart.
Polynomial jet_quadratic_base(std::size_t n);

ModelBundle cancellation_model(std::size_t n, const Rational& eps);
Polynomial cancellation_phi(const Chart& c, const Rational& eps);
Polynomial cancellation_hamiltonian(const Chart& c, const Rational& eps);
/// Axis invariance, the dphi(X) identity and the sign of z^2 + eps along the axis.
std::vector<FactCheck> cancellation_facts(std::size_t n, const Rational& eps);

struct GammaLocus {
    std::vector<Polynomial> constraints;
    VectorField reeb;
    std::vector<PointQ> samples;
};

/// The dividing set on {sum x^2 = delta^2} for the cancellation model, its
/// displayed Reeb field and `count` rational sample points on it.
GammaLocus cancellation_gamma_locus(std::size_t n, const Rational& delta, const Rational& eps, std::size_t count);

/// Hypersurface {x1 = delta} for n = 1, parametrized by (y1, z).
ParamEmbedding cancellation_sigma1(const Rational& delta);

/// (s, v, x) with v = e^tau.
Chart collar_chart();
ModelBundle sutured_collar(const Rational& c);

struct SutureCheck {
    KForm shear_residual;
    KForm identity_residual;
    KForm wrong_shear_residual;
    bool passed() const { return shear_residual.is_zero() && identity_residual.is_zero() && !wrong_shear_residual.is_zero(); }
};

SutureCheck suture_model_check();

struct HandleRegion {
    std::size_t n = 1;
    std::size_t k = 0;
    bool sup = false;
    Rational eps{1};
    Rational delta{1, 4};
    /// Cap height of chi at p = 0 as a fraction of chi(1 + delta/2).
    Rational cap_fraction{1, 2};
};

HandleRegion make_handle_region(std::size_t n, std::size_t k, const Rational& eps);

/// Squared radii (r_L^2, r_C^2) in the isotropic / coisotropic directions.
std::pair<Rational, Rational> handle_radii_squared(const HandleRegion& r, const PointQ& p);
/// chi(p)^2 as a function of w = p^2 on [0, (1+delta)^2].
Rational chi_squared(const HandleRegion& r, const Rational& w);
bool handle_region_membership(const HandleRegion& r, const PointQ& p);

}  // namespace ccw
