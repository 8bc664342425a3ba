#pragma once

// Rational homology of the built complexes, top-weight re-indexing,
// long-exact-sequence bookkeeping and the weight-0 Satake column.

#include "agtop/complexes.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace agtop {

struct VerifyResult {
    bool ok = true;
    int degree = 0;  // first failing composite d[degree-1] * d[degree]
    int row = 0;
    int col = 0;
    long value = 0;
    std::string message;
};
VerifyResult verify_complex(const ChainComplexQ& c);

struct BettiReport {
    std::string label;
    int g = 0;
    std::map<int, int> chain_dims;
    std::map<int, int> ranks;  // rank of d[n]
    std::map<int, int> h;
    long euler_chains = 0;
    long euler_homology = 0;

    int at(int n) const;
    bool acyclic() const;
};
BettiReport betti(const ChainComplexQ& c);

/// Cohomological degree k -> dim Gr^W_top H^k(A_g), nonzero entries only.
std::map<int, int> top_weight_table(int g, const BettiReport& report);
std::map<int, int> top_weight_table(int g, const std::map<int, int>& homology);
/// Sum over k of (-1)^k dim Gr^W_top H^k(A_g).
long top_weight_euler(const std::map<int, int>& table);

struct SatakeEntry {
    int p = 0;
    int q = 0;
    int dim = 0;
};
/// Nonzero weight-0 E^1 entries in column p = g.
std::vector<SatakeEntry> satake_weight0_column(int g, const BettiReport& report);
std::vector<SatakeEntry> satake_weight0_column(int g, const std::map<int, int>& homology);

/// Degree -> dimension, where an absent value means unknown.
using DegreeMap = std::map<int, std::optional<int>>;

struct LesEntry {
    std::optional<int> dim;
    std::string reason;
};
struct LesResult {
    std::map<int, LesEntry> p;
    bool consistent = true;
    std::vector<std::string> problems;
    int unknowns() const;
};
/// Solves H_n(P^(g)) from H(P^(g-1)), H(V^(g)) and the degrees n where the
/// connecting map H_n(V^(g)) -> H_{n-1}(P^(g-1)) is declared an isomorphism.
/// Degrees outside the maps are taken as 0 within [lo, hi].
LesResult les_solve(const DegreeMap& h_prev, const DegreeMap& h_v, const std::set<int>& iso, int lo, int hi);

struct LesInput {
    int g = 0;
    DegreeMap h_prev;
    DegreeMap h_v;
    std::set<int> iso;
    std::vector<std::string> sources;
    bool has_prev = false;
};
/// Lines: `g <int>`, `prev <n> <dim|?>`, `voronoi <n> <dim|?>`, `iso <n>...`, `source <text>`.
LesInput read_les_input(std::istream& is);
LesInput read_les_input_file(const std::string& path);
LesResult les_solve(const LesInput& in);
/// Forced dimensions of a solved sequence, unknown entries left empty.
DegreeMap degree_map(const LesResult& r);
/// Path of the bundled input file for g.
std::string bundled_les_path(int g);
/// Solves g from `dir`/g<g>_inputs.txt; inputs without prev lines take H(P^(g-1)) from the solved g-1 step.
LesResult les_solve_chain(int g, const std::string& dir);
/// Same, with an explicit H(P^(g0-1)) replacing the prev lines of the first file g0 in the chain.
LesResult les_solve_chain(int g, const std::string& dir, int g0, const DegreeMap& base);

void write_betti(std::ostream& os, const BettiReport& r);
void write_betti_table(std::ostream& os, const BettiReport& r);
std::map<int, int> read_betti(std::istream& is);

} // namespace agtop
