#include "agtop/homology.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace agtop {

VerifyResult verify_complex(const ChainComplexQ& c)
{
    VerifyResult res;
    for (int n = c.min_degree + 1; n <= c.max_degree; ++n) {
        const int rows = c.dim(n - 2), mid = c.dim(n - 1), cols = c.dim(n);
        if (rows == 0 || mid == 0 || cols == 0)
            continue;
        std::map<std::pair<int, int>, Integer> acc;
        std::map<int, std::vector<std::pair<int, long>>> by_col_prev;  // d[n-1] column -> (row, value)
        if (auto it = c.d.find(n - 1); it != c.d.end())
            for (const auto& e : it->second)
                by_col_prev[e.col].emplace_back(e.row, e.value);
        if (auto it = c.d.find(n); it != c.d.end())
            for (const auto& e : it->second)
                for (const auto& [r, v] : by_col_prev[e.row])
                    acc[{r, e.col}] += Integer(v) * Integer(e.value);
        for (const auto& [pos, v] : acc)
            if (sgn(v) != 0) {
                res.ok = false;
                res.degree = n;
                res.row = pos.first;
                res.col = pos.second;
                res.value = to_int64(v);
                res.message = "d[" + std::to_string(n - 1) + "] * d[" + std::to_string(n) + "] has entry " +
                              v.get_str() + " at (" + std::to_string(pos.first) + ", " + std::to_string(pos.second) + ")";
                return res;
            }
    }
    return res;
}

int BettiReport::at(int n) const
{
    auto it = h.find(n);
    return it == h.end() ? 0 : it->second;
}

bool BettiReport::acyclic() const
{
    for (const auto& [n, d] : h)
        if (d != 0)
            return false;
    return true;
}

BettiReport betti(const ChainComplexQ& c)
{
    BettiReport r;
    r.label = c.label;
    r.g = c.g;
    for (int n = c.min_degree; n <= c.max_degree + 1; ++n)
        r.ranks[n] = (c.dim(n) == 0 || c.dim(n - 1) == 0) ? 0 : rank(c.dense(n));
    for (int n = c.min_degree; n <= c.max_degree; ++n) {
        const int dn = c.dim(n);
        r.chain_dims[n] = dn;
        r.h[n] = dn - r.ranks[n] - r.ranks[n + 1];
        const long s = (n % 2 == 0) ? 1 : -1;
        r.euler_chains += s * dn;
        r.euler_homology += s * r.h[n];
    }
    return r;
}

std::map<int, int> top_weight_table(int g, const std::map<int, int>& homology)
{
    // H_{i-1}(P^(g)) = Gr^W_{2d} H^{2d-i}(A_g) with 2d = g(g+1)
    std::map<int, int> out;
    for (const auto& [n, d] : homology)
        if (d != 0)
            out[g * (g + 1) - (n + 1)] = d;
    return out;
}

std::map<int, int> top_weight_table(int g, const BettiReport& report) { return top_weight_table(g, report.h); }

long top_weight_euler(const std::map<int, int>& table)
{
    long chi = 0;
    for (const auto& [k, d] : table)
        chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(d);
    return chi;
}

std::vector<SatakeEntry> satake_weight0_column(int g, const std::map<int, int>& homology)
{
    // dim Gr^W_0 H^j_c(A_g) = dim H_{j-1}(P^(g)), placed at (p, q) = (g, j - g)
    std::vector<SatakeEntry> out;
    for (const auto& [n, d] : homology)
        if (d != 0)
            out.push_back({g, n + 1 - g, d});
    return out;
}

std::vector<SatakeEntry> satake_weight0_column(int g, const BettiReport& report)
{
    return satake_weight0_column(g, report.h);
}

int LesResult::unknowns() const
{
    int k = 0;
    for (const auto& [n, e] : p)
        k += !e.dim.has_value();
    return k;
}

namespace {

std::optional<int> lookup(const DegreeMap& m, int n)
{
    auto it = m.find(n);
    if (it == m.end())
        return 0;
    return it->second;
}

std::string show(const std::optional<int>& x) { return x ? std::to_string(*x) : "?"; }

} // namespace

LesResult les_solve(const DegreeMap& h_prev, const DegreeMap& h_v, const std::set<int>& iso, int lo, int hi)
{
    LesResult res;
    // r[n] = rank of the connecting map H_n(V) -> H_{n-1}(P^(g-1))
    std::map<int, std::optional<int>> r;
    std::map<int, std::string> why;
    for (int n = lo; n <= hi + 1; ++n) {
        const auto v = lookup(h_v, n);
        const auto a = lookup(h_prev, n - 1);
        if (iso.count(n)) {
            if (!v || !a || *v != *a) {
                res.consistent = false;
                res.problems.push_back("degree " + std::to_string(n) + ": declared isomorphism between H_" +
                                       std::to_string(n) + "(V) of dim " + show(v) + " and H_" +
                                       std::to_string(n - 1) + "(Pprev) of dim " + show(a));
                r[n] = std::nullopt;
            } else {
                r[n] = *v;
            }
            why[n] = "connecting map at " + std::to_string(n) + " declared iso";
        } else if ((v && *v == 0) || (a && *a == 0)) {
            r[n] = 0;
            why[n] = "connecting map at " + std::to_string(n) + " has a zero end";
        } else {
            r[n] = std::nullopt;
            why[n] = "connecting map at " + std::to_string(n) + " undetermined";
        }
    }
    for (int n = lo; n <= hi; ++n) {
        const auto a = lookup(h_prev, n);
        const auto v = lookup(h_v, n);
        LesEntry e;
        std::ostringstream reason;
        reason << "window H_" << n << "(Pprev)=" << show(a) << " -> H_" << n << "(P) -> H_" << n << "(V)=" << show(v)
               << "; " << why[n + 1] << "; " << why[n];
        e.reason = reason.str();
        if (a && v && r[n] && r[n + 1]) {
            const int d = *a - *r[n + 1] + *v - *r[n];
            if (d < 0) {
                res.consistent = false;
                res.problems.push_back("degree " + std::to_string(n) + ": negative forced dimension");
            } else {
                e.dim = d;
            }
        }
        res.p[n] = std::move(e);
    }
    return res;
}

LesInput read_les_input(std::istream& is)
{
    LesInput in;
    std::string line;
    int ln = 0;
    auto fail = [&](const std::string& w) { throw std::runtime_error("les input line " + std::to_string(ln) + ": " + w); };
    auto value = [&](const std::string& tok) -> std::optional<int> {
        if (tok == "?")
            return std::nullopt;
        try {
            std::size_t used = 0;
            const int v = std::stoi(tok, &used);
            if (used != tok.size() || v < 0)
                fail("bad dimension '" + tok + "'");
            return v;
        } catch (const std::logic_error&) {
            fail("bad dimension '" + tok + "'");
        }
        return std::nullopt;
    };
    while (std::getline(is, line)) {
        ++ln;
        if (auto p = line.find('#'); p != std::string::npos)
            line.erase(p);
        std::istringstream ss(line);
        std::string kw;
        if (!(ss >> kw))
            continue;
        if (kw == "g") {
            if (!(ss >> in.g) || in.g < 1)
                fail("bad g");
        } else if (kw == "prev" || kw == "voronoi") {
            int n;
            std::string tok;
            if (!(ss >> n >> tok))
                fail("expected '<degree> <dim|?>'");
            (kw == "prev" ? in.h_prev : in.h_v)[n] = value(tok);
            in.has_prev = in.has_prev || kw == "prev";
        } else if (kw == "iso") {
            int n;
            while (ss >> n)
                in.iso.insert(n);
        } else if (kw == "source") {
            std::string rest;
            std::getline(ss, rest);
            in.sources.push_back(rest);
        } else {
            fail("unknown keyword '" + kw + "'");
        }
    }
    if (in.g < 1)
        throw std::runtime_error("les input: missing 'g' line");
    return in;
}

LesInput read_les_input_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open " + path);
    return read_les_input(f);
}

LesResult les_solve(const LesInput& in) { return les_solve(in.h_prev, in.h_v, in.iso, -1, sym_dim(in.g) - 1); }

DegreeMap degree_map(const LesResult& r)
{
    DegreeMap m;
    for (const auto& [n, e] : r.p)
        m[n] = e.dim;
    return m;
}

std::string bundled_les_path(int g) { return std::string(AGTOP_DATA_DIR) + "/tables/g" + std::to_string(g) + "_inputs.txt"; }

namespace {

std::string les_path(const std::string& dir, int g) { return dir + "/g" + std::to_string(g) + "_inputs.txt"; }

LesResult chain(int g, const std::string& dir, int g0, const DegreeMap* base)
{
    LesInput in = read_les_input_file(les_path(dir, g));
    if (in.g != g)
        throw std::runtime_error(les_path(dir, g) + ": file declares g " + std::to_string(in.g));
    if (base && g == g0) {
        in.h_prev = *base;
    } else if (!in.has_prev) {
        if (g <= 1)
            throw std::runtime_error("les chain: no H(P^(g-1)) available below g = " + std::to_string(g));
        const LesResult prev = chain(g - 1, dir, g0, base);
        in.h_prev = degree_map(prev);
    }
    return les_solve(in);
}

} // namespace

LesResult les_solve_chain(int g, const std::string& dir) { return chain(g, dir, 0, nullptr); }

LesResult les_solve_chain(int g, const std::string& dir, int g0, const DegreeMap& base)
{
    if (g0 > g)
        throw std::invalid_argument("les chain: start above target");
    return chain(g, dir, g0, &base);
}

void write_betti(std::ostream& os, const BettiReport& r)
{
    for (const auto& [n, d] : r.h)
        os << "H " << n << ' ' << d << '\n';
}

void write_betti_table(std::ostream& os, const BettiReport& r)
{
    os << "homology of " << r.label << '\n';
    os << std::setw(8) << "degree" << std::setw(8) << "chains" << std::setw(8) << "rank d" << std::setw(8) << "H" << '\n';
    for (const auto& [n, d] : r.chain_dims)
        os << std::setw(8) << n << std::setw(8) << d << std::setw(8) << r.ranks.at(n) << std::setw(8) << r.h.at(n)
           << '\n';
    os << "euler characteristic " << r.euler_chains << '\n';
}

std::map<int, int> read_betti(std::istream& is)
{
    std::map<int, int> h;
    std::string kw;
    int n, d;
    while (is >> kw >> n >> d)
        if (kw == "H")
            h[n] = d;
    return h;
}

} // namespace agtop
