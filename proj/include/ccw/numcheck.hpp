#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ccw/contact.hpp"

namespace ccw {

/// Radial cutoff: 1 on [0, a], 0 on [b, inf), quintic smoothstep between.
class BumpProfile {
public:
    BumpProfile(Rational a, Rational b);

    const Rational& inner() const { return a_; }
    const Rational& outer() const { return b_; }

    double value(double r) const;
    double derivative(double r) const;
    /// Closed-form bound on |rho'|: 15 / (8 (b - a)).
    double derivative_bound() const;

    BumpProfile scaled(const Rational& f) const { return {a_ * f, b_ * f}; }

private:
    Rational a_, b_;
};

/// 1 - S((r - a)/(b - a)) with S the quintic smoothstep, for real radii.
double smoothstep_cutoff(double r, double a, double b);
double smoothstep_cutoff_derivative(double r, double a, double b);

enum class ScanMode { Exact, Float };

struct ScanSpec {
    Box box;
    std::vector<std::size_t> counts;
    ScanMode mode = ScanMode::Float;

    static ScanSpec uniform(const Box& box, std::size_t count, ScanMode mode = ScanMode::Float);
    std::size_t points() const;
    /// Throws InvalidArgument for bad boxes or fewer than min_count points on an axis.
    void validate(std::size_t min_count = 3) const;
    /// Grid point by lexicographic index (last axis fastest).
    std::vector<Rational> point_exact(std::size_t flat) const;
    std::vector<double> point(std::size_t flat) const;
};

struct Witness {
    std::size_t index = 0;
    std::vector<double> point;
    double value = 0.0;
};

struct GradientLikeReport {
    ScanMode mode = ScanMode::Float;
    std::size_t points = 0;
    std::size_t excluded = 0;
    double exclusion_radius = 0.0;
    /// Largest delta in [0, 10] with a nonnegative margin at every scanned point.
    double best_delta = 0.0;
    /// min of dphi(X) - best_delta (|X|^2 + |dphi|^2) outside the excluded balls.
    double min_margin = 0.0;
    /// min of dphi(X) / (|X|^2 + |dphi|^2); exact in Exact mode.
    double min_ratio = 0.0;
    std::optional<Rational> min_ratio_exact;
    std::optional<Witness> tight;
    /// Points where the margin is negative, or dphi(X) < 0 inside an excluded ball.
    std::vector<Witness> witnesses;
    std::size_t sign_violations = 0;

    bool certified() const { return best_delta > 0 && sign_violations == 0; }
};

/// Requires b.X and b.phi. The metric is the Euclidean one of the chart.
GradientLikeReport grad_like_scan(const ContactBundle& b, const ScanSpec& spec, const std::vector<PointQ>& critical,
                                  std::optional<double> exclusion_radius = std::nullopt);

/// 1/8 of the smallest half-width.
double default_exclusion_radius(const Box& box);

struct TransversalityReport {
    std::size_t points = 0;
    std::size_t slab_points = 0;
    double slab_tolerance = 0.0;
    double required_margin = 0.0;
    double min_abs = 0.0;
    std::optional<Witness> worst;
    std::size_t failures = 0;

    bool passed() const { return slab_points > 0 && failures == 0; }
};

/// |dpsi(X)| at grid points with |psi| <= slab; a point fails when the value is
/// zero or below `margin`.
TransversalityReport transversality_scan(const VectorField& x, const Polynomial& psi, const ScanSpec& spec,
                                         double margin = 0.0, double slab = 1e-12);

struct Finding {
    std::string code;
    std::string detail;
};

struct InterpolationSample {
    std::size_t stage = 0;
    double t = 0.0;
    GradientLikeReport scan;
};

struct HamiltonianInterpolationReport {
    std::vector<Finding> findings;
    GradientLikeReport start;
    GradientLikeReport end;
    std::vector<InterpolationSample> samples;
    /// Smallest best_delta and min_margin over the samples.
    double worst_delta = 0.0;
    double worst_margin = 0.0;
    /// Operator-norm bound of d alpha: xi -> xi* (both directions) and max |alpha| on the grid.
    double c_alpha = 0.0;
    double d_alpha = 0.0;
    Rational mu0, mu1;

    bool passed() const;
};

/// H_t built in `stages` steps on nested balls around `center`; every sample is scanned
/// in float mode against b.phi.
HamiltonianInterpolationReport hamiltonian_interpolation_check(const ContactBundle& b, const RationalFunction& h0,
                                                               const RationalFunction& h1, const BumpProfile& rho,
                                                               std::size_t stages, std::size_t t_samples,
                                                               const ScanSpec& spec, const PointQ& center);

struct MorseInterpolationReport {
    std::vector<Finding> findings;
    std::size_t samples = 0;
    double min_derivative = 0.0;
    std::optional<Witness> worst;
    double worst_s = 0.0;

    bool passed() const { return findings.empty() && min_derivative > 0; }
};

/// Phi_s = (1 - s rho) phi0 + s rho phi1 with rho(t) = rho.value(t_hi - t).
MorseInterpolationReport morse_interpolation_check(const Polynomial& phi0, const Polynomial& phi1, std::size_t t_var,
                                                   const BumpProfile& rho, const ScanSpec& spec,
                                                   std::size_t s_samples = 11);

/// Components in the frame (d/ds, d/dtau, R_beta) of the collar alpha = C ds + e^tau beta.
struct CollarVector {
    double s = 0.0;
    double tau = 0.0;
    double reeb = 0.0;
};

enum class SutureHamiltonian { Exponential, Cosh };

struct SutureFamily {
    double epsilon;
    double K;
    SutureHamiltonian variant = SutureHamiltonian::Exponential;

    double C() const;
    double rho(double tau) const;
    double rho_prime(double tau) const;
    double h0(double s, double tau) const;
    double h1(double s) const;
    /// dH_t(d/ds).
    double ds_h(double t, double s, double tau) const;
    /// Contact field of H_t.
    CollarVector field(double t, double s, double tau) const;
    /// Closed-form X_0, and X_t written as (1 - t rho) X_0 + t rho X_1 + t (H_1 - H_0) e^-tau rho' R_beta.
    CollarVector displayed_x0(double s, double tau) const;
    CollarVector displayed_xt(double t, double s, double tau) const;
};

struct SutureScanReport {
    double epsilon = 0.0;
    double K = 0.0;
    std::size_t s_count = 0, tau_count = 0, t_count = 0;
    double min_ds_h = 0.0;
    std::optional<Witness> worst;
    /// min of s X^s at s = +-1 and of X^tau at tau = 0 across t.
    double min_side_transversality = 0.0;
    double min_top_transversality = 0.0;

    bool passed() const { return min_ds_h > 0 && min_side_transversality > 0 && min_top_transversality > 0; }
};

/// spec.counts are (s, tau, Gamma) grid sizes; the Gamma axis may have one point since the
/// family is constant along it. spec.box is ignored: s in [-1, 1], tau in [-K, 0].
SutureScanReport suture_standardization_scan(double epsilon, double K, const ScanSpec& spec, std::size_t t_count = 11,
                                             SutureHamiltonian variant = SutureHamiltonian::Exponential);

}  // namespace ccw
