#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ccw/kform.hpp"

namespace ccw {

/// Closed rational box, one interval per coordinate.
struct Box {
    std::vector<Rational> lo;
    std::vector<Rational> hi;

    static Box cube(std::size_t dim, const Rational& r) {
        return {std::vector<Rational>(dim, -r), std::vector<Rational>(dim, r)};
    }
    std::size_t dim() const { return lo.size(); }
    std::string to_string() const;
};

/// A chart with a contact form and optional gradient-like data.
struct ContactBundle {
    Chart chart;
    KForm alpha;
    std::optional<VectorField> X;
    std::optional<Polynomial> phi;
    Box domain;

    ContactBundle() = default;
    ContactBundle(KForm a, std::optional<VectorField> x = std::nullopt, std::optional<Polynomial> f = std::nullopt);

    std::size_t n() const { return (chart.dim() - 1) / 2; }
};

struct ContactCheck {
    enum class Kind { ExactConstant, NonvanishingSampled, Fails };
    Kind kind = Kind::Fails;
    /// Constant c with alpha ^ (d alpha)^n = c * vol (ExactConstant only).
    Rational constant;
    std::optional<PointQ> witness;
    std::size_t samples = 0;
    /// Coefficient of the volume form.
    RationalFunction top;

    bool passed() const { return kind != Kind::Fails; }
    std::string to_string() const;
};

/// Samples per axis are reduced so the full grid stays below this count.
inline constexpr std::size_t kMaxContactSamples = 100000;

ContactCheck check_contact(const ContactBundle& b, std::size_t grid = 11);

/// Reeb field, solved over the fraction field. Throws SingularSystem.
VectorField reeb_field(const ContactBundle& b);

/// Contact vector field of the Hamiltonian H.
VectorField ham_to_field(const ContactBundle& b, const RationalFunction& h);
/// Same, reusing a known Reeb field.
VectorField ham_to_field(const ContactBundle& b, const RationalFunction& h, const VectorField& reeb);

/// alpha(X).
RationalFunction field_to_ham(const ContactBundle& b, const VectorField& x);

struct ExpansionResult {
    RationalFunction hamiltonian;
    RationalFunction mu;
    /// L_X alpha - mu alpha.
    KForm residual;

    bool is_contact_field() const { return residual.is_zero(); }
};

ExpansionResult expansion_coefficient(const ContactBundle& b, const VectorField& x);

struct CriticalPointCheck {
    bool is_zero = false;
    /// First nonvanishing component when !is_zero.
    std::size_t witness_component = 0;
    Rational witness_value;
    /// mu at p when is_zero.
    Rational mu;
    bool mu_nonzero() const { return !mu.is_zero(); }
};

/// Requires b.X.
CriticalPointCheck verify_critical_point(const ContactBundle& b, const PointQ& p);

/// Field Z with i_Z d(lambda) = lambda, on an even-dimensional chart.
VectorField liouville_field(const KForm& lambda);

/// Calls fn(point) for each point of the uniform grid with `count` points per axis.
template <class Fn>
void for_each_grid_point(const Box& box, std::size_t count, Fn&& fn) {
    const std::size_t d = box.dim();
    std::vector<std::size_t> idx(d, 0);
    std::vector<Rational> x(d);
    Rational steps(static_cast<long>(count - 1));
    while (true) {
        for (std::size_t i = 0; i < d; ++i)
            x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * Rational(static_cast<long>(idx[i])) / steps;
        if (!fn(static_cast<const std::vector<Rational>&>(x))) return;
        std::size_t k = 0;
        while (k < d && ++idx[k] == count) idx[k++] = 0;
        if (k == d) return;
    }
}

}  // namespace ccw
