#pragma once

// Orbit atlas (all perfect-cone orbits of rank <= g with their facet
// differentials) and the chain complexes P, V, I, R, C cut out of it.

#include "agtop/quadform.hpp"
#include "agtop/symmetry.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace agtop {

struct AtlasOptions {
    std::uint64_t seed = 0;
    int jobs = 1;
    /// Re-locate every lower-rank face of every top cone (the second route to the boundary strata).
    bool cross_check = false;
    std::function<void(const std::string&)> log;
};

/// One term of the boundary of an orbit: sum of eta over the facets in `target`'s orbit.
struct FacetContribution {
    int target = -1;
    long coefficient = 0;
    int facets = 0;
};

class Atlas {
public:
    /// catalogs[r] is the perfect-form catalog in dimension r, for r = 1 .. g.
    static Atlas build(int g, const std::vector<FormCatalog>& catalogs, const AtlasOptions& opts = {});
    /// Uses the bundled catalogs.
    static Atlas build_bundled(int g, const AtlasOptions& opts = {});

    int g() const { return g_; }
    const OrbitRegistry& registry() const { return reg_; }
    const Orbit& orbit(int i) const { return reg_.orbit(i); }

    int coloops(int i) const { return coloops_[i]; }
    bool matroidal(int i) const { return matroidal_[i]; }
    /// Boundary of alternating orbit i in terms of alternating orbits.
    const std::vector<FacetContribution>& boundary(int i) const { return boundary_[i]; }
    /// Human-readable notes such as differential entries of absolute value >= 2.
    const std::vector<std::string>& notes() const { return notes_; }

    /// delta(target, source) from the facet-transport rule.
    long differential_entry(int target, int source) const;

private:
    int g_ = 0;
    OrbitRegistry reg_;
    std::vector<int> coloops_;
    std::vector<bool> matroidal_;
    std::vector<std::vector<FacetContribution>> boundary_;
    std::vector<std::string> notes_;
};

struct SparseEntry {
    int row = 0;
    int col = 0;
    long value = 0;
};

struct ChainComplexQ {
    std::string label;
    int g = 0;
    int min_degree = -1;
    int max_degree = -1;
    /// Basis orbit ids for each degree in [min_degree, max_degree].
    std::map<int, std::vector<std::string>> basis;
    /// d[n] : degree n -> degree n - 1, rows indexed by basis[n-1], columns by basis[n].
    std::map<int, std::vector<SparseEntry>> d;

    int dim(int n) const;
    IntMatrix dense(int n) const;
};

enum class ComplexKind { Perfect, Voronoi, Inflation, Matroid, Coloop };
ComplexKind parse_kind(const std::string& s);
std::string kind_name(ComplexKind k);

/// Generator predicate of each complex.
bool in_complex(const Atlas& atlas, int orbit, ComplexKind kind, int g);
/// Complex of the given kind in ambient g <= atlas.g().
ChainComplexQ build_complex(const Atlas& atlas, ComplexKind kind, int g);
ChainComplexQ build_perfect_complex(const Atlas& atlas, int g);
ChainComplexQ build_voronoi_complex(const Atlas& atlas, int g);
ChainComplexQ build_inflation_complex(const Atlas& atlas, int g);
std::pair<ChainComplexQ, ChainComplexQ> build_matroid_complexes(const Atlas& atlas, int g);

/// Checks that the subcomplex's basis is closed under the ambient boundary.
bool is_subcomplex(const ChainComplexQ& sub, const ChainComplexQ& ambient, std::string* why = nullptr);

struct ComplexTriple {
    ChainComplexQ previous;  // P^(g-1)
    ChainComplexQ current;   // P^(g)
    ChainComplexQ quotient;  // V^(g)
    /// Degree -> (dim P^(g-1), dim P^(g), dim V^(g)).
    std::map<int, std::array<int, 3>> dims;
    bool exact = true;
    bool chain_maps = true;
    std::vector<std::string> problems;
};
ComplexTriple exact_triple(const Atlas& atlas, int g);

void write_complex(std::ostream& os, const ChainComplexQ& c);
ChainComplexQ read_complex(std::istream& is);

} // namespace agtop
