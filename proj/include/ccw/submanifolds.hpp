#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccw/contact.hpp"
#include "ccw/linsolve.hpp"

namespace ccw {

/// Parametrized locus: a map from parameter space, optionally cut down to
/// {g = 0} in the parameter chart.
struct ParamEmbedding {
    PolyMap map;
    std::optional<Polynomial> constraint;
};

struct IsotropyResult {
    bool yes = false;
    /// Pullback of alpha (wedged with dg when constrained).
    KForm residual;
};

IsotropyResult is_isotropic(const ParamEmbedding& e, const KForm& alpha);

struct SubspaceClass {
    enum class Label { Isotropic, Coisotropic, Symplectic, Mixed };
    Label label = Label::Mixed;
    bool in_xi = false;        // V inside ker alpha
    bool isotropic = false;    // in_xi and d alpha vanishes on V
    bool coisotropic = false;  // W^omega inside W, W = V cap ker alpha
    bool symplectic = false;   // W cap W^omega = 0
    std::size_t dim_v = 0, dim_w = 0, dim_w_perp = 0, dim_radical = 0;

    std::string label_name() const;
};

/// Throws InvalidArgument on linearly dependent vectors.
SubspaceClass subspace_class_at(const KForm& alpha, const std::vector<QVector>& vectors, const PointQ& p);

/// Tangent vectors (ambient coordinates) of the embedded locus at a parameter point.
std::vector<QVector> tangent_basis(const ParamEmbedding& e, const std::vector<Rational>& q);

struct FoliationResult {
    bool singular = false;
    std::vector<QVector> basis;
};

FoliationResult char_foliation_at(const KForm& alpha, const ParamEmbedding& e, const PointQ& q);

struct RegionSample {
    PointQ point;
    int sign = 0;  // sign of u
    bool nondegenerate = false;
};

struct DividingData {
    RationalFunction u;
    KForm beta;
    KForm lambda_plus;
    KForm lambda_minus;
    std::vector<RegionSample> samples;
    bool all_nondegenerate() const;
};

/// Throws InvalidArgument when u vanishes identically.
DividingData dividing_data(const ParamEmbedding& sigma, const KForm& alpha, const VectorField& x,
                           const std::vector<PointQ>& samples = {});

struct LocusSampleResult {
    PointQ point;
    bool alpha_one = false;
    bool tangent = false;
    bool kernel = false;
    bool ok() const { return alpha_one && tangent && kernel; }
};

struct LocusReport {
    std::vector<LocusSampleResult> samples;
    std::size_t passed() const;
    bool ok() const { return passed() == samples.size(); }
};

/// Checks alpha(R) = 1, R tangent to the locus and d alpha(R, v) = 0 for v
/// tangent to the locus. Throws InvalidArgument for a sample off the locus.
LocusReport reeb_on_locus_check(const KForm& alpha, const std::vector<Polynomial>& constraints,
                                const VectorField& r, const std::vector<PointQ>& samples);

struct IdealIdentity {
    enum class Kind { Equal, EqualUpToConstant, Differ };
    Kind kind = Kind::Differ;
    Rational constant{1};
    Polynomial remainder;

    std::string to_string() const;
};

/// Compares p and q modulo (g); fits p = c q when they are not equal.
IdealIdentity ideal_identity_check(const Polynomial& p, const Polynomial& q, const Polynomial& g);

}  // namespace ccw
