#pragma once

// Graphic and regular-matroid cones, coloops, inflation and deflation.

#include "agtop/cone.hpp"

#include <iosfwd>
#include <utility>
#include <vector>

namespace agtop {

/// Simple graph; each edge is stored as (tail, head).
class SimpleGraph {
public:
    SimpleGraph(int vertices, std::vector<std::pair<int, int>> edges);

    int vertices() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    static SimpleGraph complete(int n);

private:
    int n_;
    std::vector<std::pair<int, int>> edges_;
};

/// Signed incidence matrix: +1 at the tail, -1 at the head.
IntMatrix incidence_matrix(const SimpleGraph& g);
/// Cone on the columns of the incidence matrix with its last row deleted.
PerfectCone graphic_cone(const SimpleGraph& g);

enum class TuStatus { Verified, NotTotallyUnimodular, Unverified };
inline constexpr int kTuColumnCap = 20;
TuStatus is_tu(const IntMatrix& a, int column_cap = kTuColumnCap);

struct TURepresentation {
    IntMatrix matrix;
    bool verified = false;

    /// Runs the exhaustive check; throws when the matrix is not TU.
    static TURepresentation checked(IntMatrix a);
};

/// Cone of the columns placed in ambient g (rows padded with zeros).
PerfectCone tu_cone(const TURepresentation& a, int g);

/// Indices of the Z^g-coloops of s.
std::vector<int> zg_coloops(std::span<const Vec> s);
/// Columns lying in every column basis.
std::vector<int> matroid_coloops(const TURepresentation& a);

/// All maximal minors of the (full-rank) generator matrix lie in {-1, 0, 1}.
bool is_matroidal(const PerfectCone& c);

/// Appends e_{r+1} to a coloop-free cone of rank r, returned full rank in ambient r + 1.
PerfectCone inflate(const PerfectCone& c);
/// Removes the unique coloop of a full-rank cone; result is full rank in ambient g - 1.
PerfectCone deflate(const PerfectCone& c);

/// For two Z^g-coloops s[i], s[j]: a unimodular matrix with columns s[i], s[j], w_3..w_g
/// such that every other element of s lies in the span of the w's.
IntMatrix coloop_split_basis(std::span<const Vec> s, int i, int j);

/// `graph v=<int>` followed by `u w` lines.
SimpleGraph read_graph(std::istream& is);
void write_graph(std::ostream& os, const SimpleGraph& g);

} // namespace agtop
