#include "agtop/matroid.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace agtop {

SimpleGraph::SimpleGraph(int vertices, std::vector<std::pair<int, int>> edges) : n_(vertices), edges_(std::move(edges))
{
    if (n_ < 1)
        throw std::invalid_argument("graph needs at least one vertex");
    std::set<std::pair<int, int>> seen;
    for (auto [u, w] : edges_) {
        if (u < 0 || w < 0 || u >= n_ || w >= n_)
            throw std::invalid_argument("edge endpoint out of range");
        if (u == w)
            throw std::invalid_argument("loops are not allowed");
        if (!seen.insert({std::min(u, w), std::max(u, w)}).second)
            throw std::invalid_argument("parallel edges are not allowed");
    }
}

SimpleGraph SimpleGraph::complete(int n)
{
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            e.emplace_back(i, j);
    return SimpleGraph(n, std::move(e));
}

IntMatrix incidence_matrix(const SimpleGraph& g)
{
    IntMatrix a(g.vertices(), static_cast<int>(g.edges().size()));
    for (int j = 0; j < a.cols(); ++j) {
        a(g.edges()[j].first, j) = 1;
        a(g.edges()[j].second, j) = -1;
    }
    return a;
}

PerfectCone graphic_cone(const SimpleGraph& g)
{
    const IntMatrix a = incidence_matrix(g);
    const int rows = g.vertices() - 1;
    std::vector<Vec> cols;
    for (int j = 0; j < a.cols(); ++j) {
        Vec v = a.column(j);
        v.resize(rows);
        cols.push_back(std::move(v));
    }
    return PerfectCone(rows, std::move(cols));
}

namespace {

bool next_subset(std::vector<int>& s, int n)
{
    const int k = static_cast<int>(s.size());
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i)
        --i;
    if (i < 0)
        return false;
    ++s[i];
    for (int j = i + 1; j < k; ++j)
        s[j] = s[j - 1] + 1;
    return true;
}

} // namespace

TuStatus is_tu(const IntMatrix& a, int column_cap)
{
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (std::abs(a(i, j)) > 1)
                return TuStatus::NotTotallyUnimodular;
    if (a.cols() > column_cap)
        return TuStatus::Unverified;
    const int kmax = std::min(a.rows(), a.cols());
    for (int k = 2; k <= kmax; ++k) {
        std::vector<int> rs(k);
        std::iota(rs.begin(), rs.end(), 0);
        do {
            std::vector<int> cs(k);
            std::iota(cs.begin(), cs.end(), 0);
            do {
                IntMatrix m(k, k);
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j)
                        m(i, j) = a(rs[i], cs[j]);
                if (abs(determinant(m)) > 1)
                    return TuStatus::NotTotallyUnimodular;
            } while (next_subset(cs, a.cols()));
        } while (next_subset(rs, a.rows()));
    }
    return TuStatus::Verified;
}

TURepresentation TURepresentation::checked(IntMatrix a)
{
    switch (is_tu(a)) {
    case TuStatus::Verified:
        return {std::move(a), true};
    case TuStatus::NotTotallyUnimodular:
        throw std::invalid_argument("matrix is not totally unimodular");
    default:
        throw std::invalid_argument("matrix too large for exhaustive TU verification");
    }
}

PerfectCone tu_cone(const TURepresentation& a, int g)
{
    if (!a.verified)
        throw std::invalid_argument("tu_cone: representation is not verified");
    if (rank(a.matrix) > g || a.matrix.rows() > g)
        throw std::invalid_argument("tu_cone: rank exceeds ambient dimension");
    std::vector<Vec> cols;
    for (int j = 0; j < a.matrix.cols(); ++j) {
        Vec v = a.matrix.column(j);
        if (is_zero(v))
            throw std::invalid_argument("tu_cone: zero column");
        v.resize(g, 0);
        cols.push_back(std::move(v));
    }
    return PerfectCone(g, std::move(cols));
}

std::vector<int> zg_coloops(std::span<const Vec> s)
{
    std::vector<int> out;
    if (s.empty())
        return out;
    const int g = static_cast<int>(s[0].size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        std::vector<Vec> others;
        for (std::size_t j = 0; j < s.size(); ++j)
            if (j != k)
                others.push_back(s[j]);
        // rows of the left kernel give coordinates on Z^g / sat(span(others))
        const IntMatrix ann = others.empty() ? IntMatrix::identity(g)
                                             : integer_left_kernel(IntMatrix::from_columns(g, others));
        if (gcd_of(ann * s[k]) == 1)
            out.push_back(static_cast<int>(k));
    }
    return out;
}

std::vector<int> matroid_coloops(const TURepresentation& a)
{
    std::vector<int> out;
    const int full = rank(a.matrix);
    for (int j = 0; j < a.matrix.cols(); ++j) {
        std::vector<Vec> cols;
        for (int k = 0; k < a.matrix.cols(); ++k)
            if (k != j)
                cols.push_back(a.matrix.column(k));
        if (rank_of(cols) < full)
            out.push_back(j);
    }
    return out;
}

bool is_matroidal(const PerfectCone& c)
{
    const Reduction red = reduce_to_rank(c);
    const PerfectCone& r = red.cone;
    const int k = r.g();
    if (k == 0)
        return true;
    std::vector<int> cs(k);
    std::iota(cs.begin(), cs.end(), 0);
    do {
        std::vector<Vec> cols;
        for (int j : cs)
            cols.push_back(r.generator(j));
        if (abs(determinant(IntMatrix::from_columns(k, cols))) > 1)
            return false;
    } while (next_subset(cs, r.size()));
    return true;
}

PerfectCone inflate(const PerfectCone& c)
{
    const PerfectCone r = reduce_to_rank(c).cone;
    if (!zg_coloops(r.generators()).empty())
        throw std::invalid_argument("inflate: cone has a coloop");
    const int g = r.g() + 1;
    std::vector<Vec> gens = r.generators();
    for (auto& v : gens)
        v.push_back(0);
    Vec e(g, 0);
    e[g - 1] = 1;
    gens.push_back(e);
    return PerfectCone(g, std::move(gens));
}

PerfectCone deflate(const PerfectCone& c)
{
    const PerfectCone r = reduce_to_rank(c).cone;
    const auto col = zg_coloops(r.generators());
    if (col.size() != 1)
        throw std::invalid_argument("deflate: cone must have exactly one coloop, found " + std::to_string(col.size()));
    const int g = r.g();
    const Vec& v = r.generator(col[0]);
    std::vector<Vec> others;
    for (int j = 0; j < r.size(); ++j)
        if (j != col[0])
            others.push_back(r.generator(j));
    // f with f(v) = 1 and f(others) = 0, then Z^g = ker f (+) Z v
    Vec f = integer_left_kernel(IntMatrix::from_columns(g, others)).row(0);
    if (dot(f, v) < 0)
        for (auto& x : f)
            x = -x;
    IntMatrix fcol(g, 1);
    for (int i = 0; i < g; ++i)
        fcol(i, 0) = f[i];
    const IntMatrix kernel = integer_left_kernel(fcol);
    std::vector<Vec> basis;
    for (int i = 0; i < kernel.rows(); ++i)
        basis.push_back(kernel.row(i));
    basis.push_back(v);
    const auto a = unimodular_inverse(IntMatrix::from_columns(g, basis));
    if (!a)
        throw std::logic_error("deflate: coloop basis is not unimodular");
    std::vector<Vec> gens;
    for (const auto& w : others) {
        Vec x = *a * w;
        x.resize(g - 1);
        gens.push_back(std::move(x));
    }
    return PerfectCone(g - 1, std::move(gens));
}

IntMatrix coloop_split_basis(std::span<const Vec> s, int i, int j)
{
    const int n = static_cast<int>(s.size());
    if (i == j || i < 0 || j < 0 || i >= n || j >= n)
        throw std::invalid_argument("coloop_split_basis: need two distinct indices");
    const int g = static_cast<int>(s[i].size());
    // f_k vanishes on everything but s[k] and takes the value 1 there
    auto functional = [&](int k) {
        std::vector<Vec> others;
        for (int m = 0; m < n; ++m)
            if (m != k)
                others.push_back(s[m]);
        const IntMatrix ann = others.empty() ? IntMatrix::identity(g)
                                             : integer_left_kernel(IntMatrix::from_columns(g, others));
        const Vec w = ann * s[k];
        if (gcd_of(w) != 1)
            throw std::invalid_argument("coloop_split_basis: element " + std::to_string(k) + " is not a Z^g-coloop");
        // u with u . w = 1 from the first row of the echelon transform of the column w
        IntMatrix wc(static_cast<int>(w.size()), 1);
        for (std::size_t r = 0; r < w.size(); ++r)
            wc(static_cast<int>(r), 0) = w[r];
        const Echelon e = unimodular_echelon(wc);
        Vec f(g, 0);
        for (int r = 0; r < ann.rows(); ++r)
            for (int c = 0; c < g; ++c)
                f[c] = checked_add(f[c], checked_mul(e.transform(0, r), ann(r, c)));
        if (dot(f, s[k]) < 0)
            for (auto& x : f)
                x = -x;
        return f;
    };
    const Vec fi = functional(i), fj = functional(j);
    IntMatrix both(g, 2);
    for (int r = 0; r < g; ++r) {
        both(r, 0) = fi[r];
        both(r, 1) = fj[r];
    }
    const IntMatrix kernel = integer_left_kernel(both);
    std::vector<Vec> cols{s[i], s[j]};
    for (int r = 0; r < kernel.rows(); ++r)
        cols.push_back(kernel.row(r));
    IntMatrix b = IntMatrix::from_columns(g, cols);
    if (abs(determinant(b)) != 1)
        throw std::logic_error("coloop_split_basis: result is not unimodular");
    return b;
}

SimpleGraph read_graph(std::istream& is)
{
    std::string line;
    int ln = 0;
    int v = -1;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(is, line)) {
        ++ln;
        if (auto p = line.find('#'); p != std::string::npos)
            line.erase(p);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        if (v < 0) {
            if (std::sscanf(line.c_str(), " graph v=%d", &v) != 1 || v < 1)
                throw std::runtime_error("graph line " + std::to_string(ln) + ": expected 'graph v=<int>'");
            continue;
        }
        std::istringstream ss(line);
        int a, b;
        std::string rest;
        if (!(ss >> a >> b) || (ss >> rest))
            throw std::runtime_error("graph line " + std::to_string(ln) + ": expected 'u w'");
        edges.emplace_back(a, b);
    }
    if (v < 0)
        throw std::runtime_error("graph: missing header");
    return SimpleGraph(v, std::move(edges));
}

void write_graph(std::ostream& os, const SimpleGraph& g)
{
    os << "graph v=" << g.vertices() << '\n';
    for (auto [u, w] : g.edges())
        os << u << ' ' << w << '\n';
}

} // namespace agtop
