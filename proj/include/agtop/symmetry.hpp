#pragma once

// GL_g(Z)-equivalence and automorphisms of cones, orientations, and the orbit
// registry.

#include "agtop/cone.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace agtop {

/// matrix * source.generator(i) = sign[i] * target.generator(perm[i]).
struct ConeTransform {
    IntMatrix matrix;
    std::vector<int> perm;
    std::vector<int> sign;

    int det() const;
};

/// Invariants of a full-rank cone: T = sum v v^t and H = V^t adj(T) V.
struct ConeInvariants {
    IntMatrix h;
    std::vector<std::vector<std::int64_t>> row_signature;
    std::vector<std::int64_t> fingerprint;
};
ConeInvariants cone_invariants(const PerfectCone& c);

/// Requires both cones to have the same ambient dimension.
std::optional<ConeTransform> equivalent(const PerfectCone& a, const PerfectCone& b);
/// Stabilizer matrices of the cone. Rank-deficient cones use their reduction,
/// lifted back by the reducing transform.
std::vector<ConeTransform> automorphisms(const PerfectCone& c);

/// Ordered generator subset whose forms give a basis of the span, with a
/// coordinate subset on which that span projects isomorphically.
struct Orientation {
    std::vector<int> basis;
    std::vector<int> rows;
    int base_sign = 1;

    /// Sign of the ordered forms (which must lie in the span) against this orientation.
    int sign_of(std::span<const Vec> forms) const;
};
/// Lexicographically least spanning index subset; with an rng the subset and
/// its sign are drawn at random instead.
Orientation reference_orientation(const PerfectCone& c, std::mt19937_64* rng = nullptr);

int orientation_sign(const PerfectCone& c, const ConeTransform& t);
int orientation_sign(const PerfectCone& c, const Orientation& o, const ConeTransform& t);
bool is_alternating(const PerfectCone& c);

struct Orbit {
    std::string id;
    PerfectCone rep;  // full rank in ambient = rank
    int rank = 0;
    int dim = 0;
    ConeInvariants inv;
    Orientation orientation;
    bool alternating = false;
    bool sl_alternating = false;
    bool has_det_minus_one = false;
    std::size_t stabilizer_size = 0;
};

/// Maps vectors of a located cone to generators of the orbit representative:
/// x -> b * trunc(a * x).
struct OrbitMatch {
    int orbit = -1;
    IntMatrix a;
    IntMatrix b;
    ConeTransform on_generators;  // generator correspondence (perm / sign) into rep

    Vec apply(const Vec& x) const;
};

class OrbitRegistry {
public:
    explicit OrbitRegistry(std::uint64_t seed = 0) : rng_(seed), seeded_(seed != 0) {}

    /// Existing orbit of c, or none.
    std::optional<OrbitMatch> locate(const PerfectCone& c) const;
    /// Orbit index of c, creating a new orbit when c is not yet known.
    int classify(const PerfectCone& c);
    /// Like classify but reports whether a new orbit was created.
    int classify(const PerfectCone& c, bool& created);

    const std::vector<Orbit>& orbits() const { return orbits_; }
    const Orbit& orbit(int i) const { return orbits_[i]; }
    int size() const { return static_cast<int>(orbits_.size()); }
    std::optional<int> find_id(const std::string& id) const;

    /// Orbit indices grouped by cone dimension.
    std::map<int, std::vector<int>> by_dimension() const;

    void write(std::ostream& os) const;

private:
    int insert(const PerfectCone& full_rank);

    std::mt19937_64 rng_;
    bool seeded_;
    std::vector<Orbit> orbits_;
    std::map<std::vector<std::int64_t>, std::vector<int>> buckets_;
    std::map<std::pair<int, int>, int> counters_;
};

/// Registry built from a stream of cones sharing one ambient dimension.
OrbitRegistry classify_orbits(const std::vector<PerfectCone>& cones, std::uint64_t seed = 0);

/// Random unimodular matrix built from elementary row moves, swaps and sign flips.
IntMatrix random_unimodular(int n, std::mt19937_64& rng, int steps = 12);

} // namespace agtop
