#include "agtop/cone.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace agtop {

PerfectCone::PerfectCone(int g, std::vector<Vec> generators) : g_(g)
{
    if (g < 0)
        throw std::invalid_argument("negative ambient dimension");
    if (generators.size() > kMaxGenerators)
        throw std::invalid_argument("more than 64 generators");
    std::set<Vec> seen;
    for (auto& v : generators) {
        if (static_cast<int>(v.size()) != g)
            throw std::invalid_argument("generator " + to_string(v) + " has wrong length");
        if (!is_primitive(v))
            throw std::invalid_argument("generator " + to_string(v) + " is not primitive");
        v = sign_normalized(std::move(v));
        if (!seen.insert(v).second)
            throw std::invalid_argument("generator " + to_string(v) + " repeated up to sign");
    }
    gens_ = std::move(generators);
    rank_ = rank_of(gens_);
    const auto f = forms();
    dim_ = rank_of(f);
}

PerfectCone PerfectCone::subcone(Mask m) const
{
    std::vector<Vec> sub;
    for (int i = 0; i < size(); ++i)
        if (m >> i & 1)
            sub.push_back(gens_[i]);
    return PerfectCone(g_, std::move(sub));
}

std::vector<Vec> PerfectCone::forms() const
{
    std::vector<Vec> f;
    f.reserve(gens_.size());
    for (const auto& v : gens_)
        f.push_back(sym_coords(v));
    return f;
}

std::size_t FaceLattice::count() const
{
    std::size_t n = 0;
    for (const auto& b : by_dim)
        n += b.size();
    return n;
}

long FaceLattice::euler_characteristic() const
{
    long chi = 0;
    for (std::size_t d = 0; d < by_dim.size(); ++d)
        chi += (d % 2 ? -1L : 1L) * static_cast<long>(by_dim[d].size());
    return chi;
}

std::vector<int> spanning_rows(std::span<const Vec> vectors, int k)
{
    std::vector<int> rows;
    if (k == 0 || vectors.empty())
        return rows;
    const int len = static_cast<int>(vectors[0].size());
    int have = 0;
    for (int j = 0; j < len && have < k; ++j) {
        rows.push_back(j);
        IntMatrix m(static_cast<int>(vectors.size()), static_cast<int>(rows.size()));
        for (int i = 0; i < m.rows(); ++i)
            for (int c = 0; c < m.cols(); ++c)
                m(i, c) = vectors[i][rows[c]];
        const int r = rank(m);
        if (r > have)
            have = r;
        else
            rows.pop_back();
    }
    if (have < k)
        throw std::logic_error("spanning_rows: vectors span less than requested");
    return rows;
}

namespace {

Vec restrict_to(const Vec& v, const std::vector<int>& rows)
{
    Vec out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        out[i] = v[rows[i]];
    return out;
}

int popcount(Mask m) { return std::popcount(m); }

struct Ray {
    Vec y;
    Mask zeros;
};

} // namespace

FacetNormals facet_normals(const PerfectCone& c)
{
    FacetNormals out;
    const int d = c.dimension();
    const int n = c.size();
    if (d == 0)
        return out;
    const auto forms = c.forms();
    out.span_rows = spanning_rows(forms, d);
    std::vector<Vec> u;
    for (const auto& w : forms)
        u.push_back(restrict_to(w, out.span_rows));

    if (d == 1) {
        // a single ray: the only facet is the apex
        out.normals.push_back(Vec{1});
        out.masks.push_back(0);
        return out;
    }

    std::vector<int> basis;
    {
        std::vector<Vec> chosen;
        for (int i = 0; i < n && static_cast<int>(basis.size()) < d; ++i) {
            chosen.push_back(u[i]);
            if (rank_of(chosen) == static_cast<int>(chosen.size()))
                basis.push_back(i);
            else
                chosen.pop_back();
        }
    }

    auto rank_of_mask = [&](Mask m) {
        std::vector<Vec> rows;
        for (int j = 0; j < n; ++j)
            if (m >> j & 1)
                rows.push_back(u[j]);
        return rank_of(rows);
    };

    std::vector<Ray> rays;
    Mask processed = 0;
    for (int b : basis)
        processed |= Mask{1} << b;
    for (int k = 0; k < d; ++k) {
        std::vector<Vec> others;
        Mask zeros = 0;
        for (int j = 0; j < d; ++j)
            if (j != k) {
                others.push_back(u[basis[j]]);
                zeros |= Mask{1} << basis[j];
            }
        auto ns = integer_nullspace(IntMatrix::from_rows(others));
        Vec y = ns.at(0);
        if (dot(y, u[basis[k]]) < 0)
            for (auto& x : y)
                x = -x;
        rays.push_back({std::move(y), zeros});
    }

    for (int i = 0; i < n; ++i) {
        if (processed >> i & 1)
            continue;
        std::vector<Ray> pos, neg, keep;
        std::vector<std::int64_t> pv, nv;
        const Mask bit = Mask{1} << i;
        for (auto& r : rays) {
            const std::int64_t s = dot(r.y, u[i]);
            if (s > 0) {
                pv.push_back(s);
                pos.push_back(r);
                keep.push_back(r);
            } else if (s < 0) {
                nv.push_back(s);
                neg.push_back(r);
            } else {
                r.zeros |= bit;
                keep.push_back(r);
            }
        }
        for (std::size_t a = 0; a < pos.size(); ++a)
            for (std::size_t b = 0; b < neg.size(); ++b) {
                const Mask common = pos[a].zeros & neg[b].zeros;
                if (popcount(common) < d - 2)
                    continue;
                if (rank_of_mask(common) != d - 2)
                    continue;
                Vec y(d);
                for (int k = 0; k < d; ++k)
                    y[k] = checked_add(checked_mul(pv[a], neg[b].y[k]), checked_mul(-nv[b], pos[a].y[k]));
                keep.push_back({primitive_part(y), common | bit});
            }
        rays = std::move(keep);
        processed |= bit;
    }

    std::sort(rays.begin(), rays.end(), [](const Ray& a, const Ray& b) { return a.zeros < b.zeros; });
    for (auto& r : rays) {
        out.normals.push_back(std::move(r.y));
        out.masks.push_back(r.zeros);
    }
    return out;
}

std::vector<Mask> facets(const PerfectCone& c)
{
    if (c.dimension() == 0)
        return {};
    if (c.size() == c.dimension()) {
        std::vector<Mask> f;
        for (int i = 0; i < c.size(); ++i)
            f.push_back(c.full_mask() & ~(Mask{1} << i));
        std::sort(f.begin(), f.end());
        return f;
    }
    return facet_normals(c).masks;
}

FaceLattice faces(const PerfectCone& c)
{
    FaceLattice lat;
    lat.by_dim.assign(c.dimension() + 1, {});
    const int n = c.size();
    if (c.dimension() == 0) {
        lat.by_dim[0].push_back(0);
        return lat;
    }
    lat.facets = facets(c);
    if (n == c.dimension()) {
        for (Mask m = 0; m <= c.full_mask(); ++m)
            lat.by_dim[popcount(m)].push_back(m);
        return lat;
    }
    std::unordered_set<Mask> seen(lat.facets.begin(), lat.facets.end());
    std::vector<Mask> frontier(lat.facets.begin(), lat.facets.end());
    while (!frontier.empty()) {
        std::vector<Mask> next;
        for (Mask f : frontier)
            for (Mask h : lat.facets) {
                const Mask x = f & h;
                if (x != f && seen.insert(x).second)
                    next.push_back(x);
            }
        frontier = std::move(next);
    }
    seen.insert(c.full_mask());
    seen.insert(0);
    const auto forms = c.forms();
    for (Mask m : seen) {
        std::vector<Vec> rows;
        for (int j = 0; j < n; ++j)
            if (m >> j & 1)
                rows.push_back(forms[j]);
        lat.by_dim[rank_of(rows)].push_back(m);
    }
    for (auto& b : lat.by_dim)
        std::sort(b.begin(), b.end());
    return lat;
}

Reduction reduce_to_rank(const PerfectCone& c)
{
    const int g = c.g();
    if (c.rank() == g)
        return {c, IntMatrix::identity(g)};
    if (c.size() == 0)
        return {PerfectCone::zero(0), IntMatrix::identity(g)};
    const IntMatrix m = IntMatrix::from_columns(g, c.generators());
    const Echelon e = unimodular_echelon(m);
    std::vector<Vec> gens;
    for (int j = 0; j < c.size(); ++j) {
        Vec col = e.reduced.column(j);
        col.resize(e.rank);
        gens.push_back(std::move(col));
    }
    return {PerfectCone(e.rank, std::move(gens)), e.transform};
}

Reduction reduce(const PerfectCone& c)
{
    if (c.rank() == c.g())
        throw std::invalid_argument("reduce: cone already has full rank");
    return reduce_to_rank(c);
}

PerfectCone pad(const PerfectCone& c, int g)
{
    if (g < c.g())
        throw std::invalid_argument("pad: target dimension smaller than ambient");
    std::vector<Vec> gens = c.generators();
    for (auto& v : gens)
        v.resize(g, 0);
    return PerfectCone(g, std::move(gens));
}

PerfectCone transform(const PerfectCone& c, const IntMatrix& a)
{
    std::vector<Vec> gens;
    for (const auto& v : c.generators())
        gens.push_back(a * v);
    return PerfectCone(c.g(), std::move(gens));
}

void write_cone(std::ostream& os, const PerfectCone& c)
{
    os << "cone g=" << c.g() << " n=" << c.size() << '\n';
    for (const auto& v : c.generators()) {
        for (int i = 0; i < c.g(); ++i)
            os << (i ? " " : "") << v[i];
        os << '\n';
    }
}

namespace {

bool next_content_line(std::istream& is, std::string& line, int& line_no)
{
    while (std::getline(is, line)) {
        ++line_no;
        if (auto p = line.find('#'); p != std::string::npos)
            line.erase(p);
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            return true;
    }
    return false;
}

[[noreturn]] void parse_fail(int line_no, const std::string& what)
{
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
}

} // namespace

PerfectCone read_cone(std::istream& is, int* line_no)
{
    int local = 0;
    int& ln = line_no ? *line_no : local;
    std::string line;
    if (!next_content_line(is, line, ln))
        parse_fail(ln, "expected cone header");
    int g = -1, n = -1;
    if (std::sscanf(line.c_str(), " cone g=%d n=%d", &g, &n) != 2 || g < 0 || n < 0)
        parse_fail(ln, "malformed cone header '" + line + "'");
    std::vector<Vec> gens;
    for (int k = 0; k < n; ++k) {
        if (!next_content_line(is, line, ln))
            parse_fail(ln, "unexpected end of cone block");
        std::istringstream row(line);
        Vec v;
        long long x;
        while (row >> x)
            v.push_back(x);
        if (!row.eof() || static_cast<int>(v.size()) != g)
            parse_fail(ln, "expected " + std::to_string(g) + " integers");
        gens.push_back(std::move(v));
    }
    try {
        return PerfectCone(g, std::move(gens));
    } catch (const std::invalid_argument& e) {
        parse_fail(ln, e.what());
    }
}

} // namespace agtop
