#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ccw/rational.hpp"

namespace ccw {

/// pi_k(U(l)) as far as the implemented table reaches.
struct FramingGroup {
    enum class Kind { Z, Trivial, Cyclic, Unsupported };
    Kind kind = Kind::Trivial;
    /// Group order for Cyclic.
    long order = 1;

    static FramingGroup z() { return {Kind::Z, 0}; }
    static FramingGroup trivial() { return {Kind::Trivial, 1}; }
    static FramingGroup cyclic(long m);
    static FramingGroup unsupported() { return {Kind::Unsupported, 0}; }

    /// Integer normal form of a framing element.
    long reduce(long framing) const;
    std::string to_string() const;
    friend bool operator==(const FramingGroup&, const FramingGroup&) = default;
};

FramingGroup framing_group(long k, long l);

/// Framing group of the attaching datum of an index-k handle in dimension 2n+1.
/// Supercritical indices use the dual subcritical index.
FramingGroup handle_framing_group(long n, long index);

/// Isotropic attaching sphere of a subcritical handle.
struct FramedSphere {
    std::string id;
    long sphere_dim = -1;
    long framing = 0;
    std::vector<std::string> tags;
    /// Filling labels carried through duality (empty unless dualized from balanced data).
    std::string dual_plus, dual_minus;

    friend bool operator==(const FramedSphere&, const FramedSphere&) = default;
};

/// Coisotropic attaching datum of a supercritical handle.
struct BalancedCoisotropicData {
    std::string equator;
    std::string plus, minus;
    /// Dimension of the coisotropic sphere and rank of its characteristic foliation.
    long k = 0;
    long r = 0;
    long framing = 0;
    std::vector<std::string> tags;

    friend bool operator==(const BalancedCoisotropicData&, const BalancedCoisotropicData&) = default;
};

struct Handle {
    long index = 0;
    Rational level;
    std::variant<FramedSphere, BalancedCoisotropicData> attach;

    bool is_sphere() const { return std::holds_alternative<FramedSphere>(attach); }
    long framing() const;
    const std::vector<std::string>& tags() const;
    friend bool operator==(const Handle&, const Handle&) = default;
};

/// Flow lines from the handle at position `from` to the one at `to`.
struct Trajectory {
    std::size_t from = 0;
    std::size_t to = 0;
    long count = 1;
    bool transverse = true;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct HandleDecomposition {
    long n = 1;
    std::vector<Handle> handles;
    std::vector<Trajectory> trajectories;
    std::string bottom;
    /// Word recorded on the middle cylinder of a split decomposition.
    std::vector<std::string> monodromy;

    friend bool operator==(const HandleDecomposition&, const HandleDecomposition&) = default;
};

/// Subcritical handle on the given level.
Handle sub_handle(long n, long index, const Rational& level, long framing = 0, std::string id = {});
/// Supercritical handle with default balanced data.
Handle sup_handle(long n, long index, const Rational& level, long framing = 0, std::string equator = {});

struct ValidationFinding {
    std::string code;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationFinding> findings;
    long euler = 0;
    bool valid() const { return findings.empty(); }
};

ValidationReport validate(const HandleDecomposition& d);
long euler_number(const HandleDecomposition& d);
bool is_split(const HandleDecomposition& d);

struct RearrangeResult {
    HandleDecomposition decomposition;
    std::vector<std::string> notes;
};

/// Stable reorder putting subcritical handles first.
RearrangeResult rearrange_split(const HandleDecomposition& d);

/// Labels and relation tags of a smoothly cancelling n / (n+1) pair.
struct BypassData {
    std::string lambda_n;
    std::string lambda_n1;
    std::string a_plus;
    std::string d_minus;
    std::vector<std::string> tags;
};

/// Tags: "reeb_pushoff(<lambda_n>)" and "standard_annulus" (first model), or
/// "meridian_unknot(<lambda_n>)", "standard_disk" and "slice_annulus" (second model).
bool is_trivial_bypass(const BypassData& b);

/// Bypass data read off a pair of handles of index n and n+1.
BypassData bypass_data(const Handle& lower, const Handle& upper);

/// Removes handles at positions i and j. Throws HandleMoveError.
HandleDecomposition cancel_pair(const HandleDecomposition& d, std::size_t i, std::size_t j);

HandleDecomposition dualize(const HandleDecomposition& d);

struct WeinsteinHandle {
    long index = 0;
    long framing = 0;
    std::string id;
    friend bool operator==(const WeinsteinHandle&, const WeinsteinHandle&) = default;
};

struct AbstractOpenBook {
    std::vector<WeinsteinHandle> page;
    std::vector<std::string> monodromy;
    friend bool operator==(const AbstractOpenBook&, const AbstractOpenBook&) = default;
};

std::vector<WeinsteinHandle> subcritical_to_weinstein(long n, const std::vector<Handle>& handles);

/// certificate[i] is the position, in the dualized supercritical list, matched to
/// subcritical handle i. Defaults to the identity.
AbstractOpenBook to_open_book(const HandleDecomposition& d,
                              const std::optional<std::vector<std::size_t>>& certificate = std::nullopt);
HandleDecomposition from_open_book(const AbstractOpenBook& b, long n);

std::string decomposition_to_json(const HandleDecomposition& d, int indent = 2);
HandleDecomposition decomposition_from_json(const std::string& text);
std::string open_book_to_json(const AbstractOpenBook& b, int indent = 2);
AbstractOpenBook open_book_from_json(const std::string& text);

}  // namespace ccw
