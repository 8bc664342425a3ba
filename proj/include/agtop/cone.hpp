#pragma once

// Cones spanned by rank-one forms v v^t, their face lattices, and reduction to
// a smaller ambient dimension.

#include "agtop/exact.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

namespace agtop {

using Mask = std::uint64_t;
inline constexpr int kMaxGenerators = 64;

class PerfectCone {
public:
    PerfectCone() = default;
    /// Validates primitivity and distinctness up to sign; generators are stored sign-normalized.
    PerfectCone(int g, std::vector<Vec> generators);

    static PerfectCone zero(int g) { return PerfectCone(g, {}); }

    int g() const { return g_; }
    int size() const { return static_cast<int>(gens_.size()); }
    const std::vector<Vec>& generators() const { return gens_; }
    const Vec& generator(int i) const { return gens_[i]; }
    int rank() const { return rank_; }
    int dimension() const { return dim_; }
    bool is_boundary() const { return rank_ < g_; }

    /// Sub-cone on the generators selected by mask, in increasing index order.
    PerfectCone subcone(Mask m) const;
    /// Sym-coordinate vectors of the generators.
    std::vector<Vec> forms() const;
    Mask full_mask() const { return size() == 64 ? ~Mask{0} : (Mask{1} << size()) - 1; }

    bool operator==(const PerfectCone& o) const { return g_ == o.g_ && gens_ == o.gens_; }

private:
    int g_ = 0;
    std::vector<Vec> gens_;
    int rank_ = 0;
    int dim_ = 0;
};

/// Faces as generator-index masks, bucketed by dimension (0 .. dim).
struct FaceLattice {
    std::vector<std::vector<Mask>> by_dim;
    std::vector<Mask> facets;

    std::size_t count() const;
    /// Alternating sum of (-1)^dim over all faces, the empty face included.
    long euler_characteristic() const;
};

/// Facet masks via double description (simplicial cones short-circuit).
std::vector<Mask> facets(const PerfectCone& c);
FaceLattice faces(const PerfectCone& c);

/// Primitive integer normals of the facets in the coordinates chosen by `span_rows`.
struct FacetNormals {
    std::vector<int> span_rows;
    std::vector<Vec> normals;
    std::vector<Mask> masks;
};
FacetNormals facet_normals(const PerfectCone& c);

/// Indices i1 < ... < ik of a set of rows whose restriction has full rank k.
std::vector<int> spanning_rows(std::span<const Vec> vectors, int k);

struct Reduction {
    PerfectCone cone;  // ambient = rank of the input
    IntMatrix transform;  // g x g unimodular; transform * v has zeros past the rank
};
/// Throws for full-rank input.
Reduction reduce(const PerfectCone& c);
/// Same as reduce but returns the identity transform for full-rank cones.
Reduction reduce_to_rank(const PerfectCone& c);

PerfectCone pad(const PerfectCone& c, int g);
/// Generators of c mapped by a unimodular matrix.
PerfectCone transform(const PerfectCone& c, const IntMatrix& a);

/// `cone g=<int> n=<int>` followed by n rows of g integers.
void write_cone(std::ostream& os, const PerfectCone& c);
PerfectCone read_cone(std::istream& is, int* line_no = nullptr);

} // namespace agtop
