#include "agtop/complexes.hpp"

#include "agtop/matroid.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace agtop {

namespace {

void say(const AtlasOptions& o, const std::string& s)
{
    if (o.log)
        o.log(s);
}

// One representative mask per Aut(sigma)-orbit of faces of full rank.
std::vector<Mask> full_rank_face_representatives(const PerfectCone& sigma, const std::vector<ConeTransform>& auts)
{
    const FaceLattice lat = faces(sigma);
    std::vector<std::vector<int>> perms;
    std::set<std::vector<int>> uniq;
    for (const auto& t : auts)
        if (uniq.insert(t.perm).second)
            perms.push_back(t.perm);
    std::unordered_set<Mask> visited;
    std::vector<Mask> reps;
    const int n = sigma.size();
    for (const auto& level : lat.by_dim)
        for (Mask m : level) {
            if (visited.count(m))
                continue;
            for (const auto& p : perms) {
                Mask img = 0;
                for (int i = 0; i < n; ++i)
                    if (m >> i & 1)
                        img |= Mask{1} << p[i];
                visited.insert(img);
            }
            if (sigma.subcone(m).rank() == sigma.g())
                reps.push_back(m);
        }
    return reps;
}

std::vector<Vec> pick_forms(const PerfectCone& c, const std::vector<int>& idx)
{
    std::vector<Vec> f;
    for (int i : idx)
        f.push_back(sym_coords(c.generator(i)));
    return f;
}

} // namespace

Atlas Atlas::build(int g, const std::vector<FormCatalog>& catalogs, const AtlasOptions& opts)
{
    if (g < 0)
        throw std::invalid_argument("atlas: g must be non-negative");
    if (static_cast<int>(catalogs.size()) <= g && g > 0)
        throw std::invalid_argument("atlas: missing catalog for dimension " + std::to_string(catalogs.size()));
    Atlas at;
    at.g_ = g;
    at.reg_ = OrbitRegistry(opts.seed);
    std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);

    at.reg_.classify(PerfectCone::zero(0));
    for (int r = 1; r <= g; ++r) {
        const FormCatalog& cat = catalogs[r];
        if (cat.g != r)
            throw std::invalid_argument("atlas: catalog for dimension " + std::to_string(r) + " declares g=" +
                                        std::to_string(cat.g));
        if (cat.forms.empty())
            throw std::invalid_argument("atlas: empty catalog for dimension " + std::to_string(r));
        std::vector<QuadraticForm> forms = cat.forms;
        if (opts.seed != 0) {
            for (auto& q : forms)
                q = q.conjugated(random_unimodular(r, rng));
            std::shuffle(forms.begin(), forms.end(), rng);
        }
        for (const auto& q : forms) {
            const PerfectCone sigma = cone_of_form(q);
            const auto auts = automorphisms(sigma);
            auto reps = full_rank_face_representatives(sigma, auts);
            if (opts.seed != 0)
                std::shuffle(reps.begin(), reps.end(), rng);
            int fresh = 0;
            for (Mask m : reps) {
                bool created = false;
                at.reg_.classify(sigma.subcone(m), created);
                fresh += created;
            }
            say(opts, "dimension " + std::to_string(r) + ": top cone with " + std::to_string(sigma.size()) +
                          " rays, " + std::to_string(reps.size()) + " face classes under Aut, " +
                          std::to_string(fresh) + " new orbits");
            if (opts.cross_check) {
                const FaceLattice lat = faces(sigma);
                for (const auto& level : lat.by_dim)
                    for (Mask m : level) {
                        const PerfectCone f = sigma.subcone(m);
                        if (f.rank() < r && !at.reg_.locate(f))
                            throw std::logic_error("atlas cross-check: boundary face of rank " +
                                                   std::to_string(f.rank()) + " not found among lower orbits");
                    }
            }
        }
    }

    const int n_orbits = at.reg_.size();
    at.coloops_.resize(n_orbits);
    at.matroidal_.resize(n_orbits);
    for (int i = 0; i < n_orbits; ++i) {
        const auto& rep = at.reg_.orbit(i).rep;
        at.coloops_[i] = static_cast<int>(zg_coloops(rep.generators()).size());
        at.matroidal_[i] = is_matroidal(rep);
    }

    at.boundary_.assign(n_orbits, {});
    std::vector<std::string> errors(n_orbits);
    auto work = [&](int i) {
        const Orbit& src = at.reg_.orbit(i);
        if (!src.alternating || src.dim == 0)
            return;
        const PerfectCone& sigma = src.rep;
        std::map<int, FacetContribution> acc;
        for (Mask fm : facets(sigma)) {
            const PerfectCone rho = sigma.subcone(fm);
            const auto match = at.reg_.locate(rho);
            if (!match) {
                errors[i] = "facet of " + src.id + " has no orbit";
                return;
            }
            const Orbit& tgt = at.reg_.orbit(match->orbit);
            auto& slot = acc[match->orbit];
            slot.target = match->orbit;
            ++slot.facets;
            if (!tgt.alternating)
                continue;
            std::vector<int> in_facet, basis;
            int outside = -1;
            for (int k = 0; k < sigma.size(); ++k)
                if (fm >> k & 1)
                    in_facet.push_back(k);
                else if (outside < 0)
                    outside = k;
            std::vector<Vec> chosen;
            for (int k : in_facet) {
                if (static_cast<int>(basis.size()) == src.dim - 1)
                    break;
                chosen.push_back(sym_coords(sigma.generator(k)));
                if (rank_of(chosen) == static_cast<int>(chosen.size()))
                    basis.push_back(k);
                else
                    chosen.pop_back();
            }
            std::vector<Vec> with_v = pick_forms(sigma, basis);
            with_v.push_back(sym_coords(sigma.generator(outside)));
            const int s1 = src.orientation.sign_of(with_v);
            std::vector<Vec> moved;
            for (int k : basis)
                moved.push_back(sym_coords(match->apply(sigma.generator(k))));
            const int s2 = tgt.orientation.sign_of(moved);
            slot.coefficient += s1 * s2;
        }
        for (auto& [t, c] : acc)
            if (at.reg_.orbit(t).alternating)
                at.boundary_[i].push_back(c);
    };
    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        for (int i = 0; i < n_orbits; ++i)
            work(i);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w)
            pool.emplace_back([&, w] {
                for (int i = w; i < n_orbits; i += jobs)
                    work(i);
            });
        for (auto& t : pool)
            t.join();
    }
    for (const auto& e : errors)
        if (!e.empty())
            throw std::logic_error("atlas: " + e);
    for (int i = 0; i < n_orbits; ++i)
        for (const auto& c : at.boundary_[i])
            if (std::abs(c.coefficient) >= 2)
                at.notes_.push_back("differential entry " + std::to_string(c.coefficient) + " from " +
                                    at.reg_.orbit(i).id + " to " + at.reg_.orbit(c.target).id);
    say(opts, "atlas complete: " + std::to_string(n_orbits) + " orbits");
    return at;
}

Atlas Atlas::build_bundled(int g, const AtlasOptions& opts)
{
    return build(g, load_catalogs(bundled_catalog_dir(), g), opts);
}

long Atlas::differential_entry(int target, int source) const
{
    if (!orbit(target).alternating || !orbit(source).alternating)
        throw std::invalid_argument("differential_entry: orbits must be alternating");
    for (const auto& c : boundary_[source])
        if (c.target == target)
            return c.coefficient;
    return 0;
}

int ChainComplexQ::dim(int n) const
{
    auto it = basis.find(n);
    return it == basis.end() ? 0 : static_cast<int>(it->second.size());
}

IntMatrix ChainComplexQ::dense(int n) const
{
    IntMatrix m(dim(n - 1), dim(n));
    if (auto it = d.find(n); it != d.end())
        for (const auto& e : it->second)
            m(e.row, e.col) = e.value;
    return m;
}

ComplexKind parse_kind(const std::string& s)
{
    if (s == "P")
        return ComplexKind::Perfect;
    if (s == "V")
        return ComplexKind::Voronoi;
    if (s == "I")
        return ComplexKind::Inflation;
    if (s == "R")
        return ComplexKind::Matroid;
    if (s == "C")
        return ComplexKind::Coloop;
    throw std::invalid_argument("unknown complex kind '" + s + "' (expected P, V, I, R or C)");
}

std::string kind_name(ComplexKind k)
{
    switch (k) {
    case ComplexKind::Perfect:
        return "P";
    case ComplexKind::Voronoi:
        return "V";
    case ComplexKind::Inflation:
        return "I";
    case ComplexKind::Matroid:
        return "R";
    default:
        return "C";
    }
}

bool in_complex(const Atlas& atlas, int i, ComplexKind kind, int g)
{
    const Orbit& o = atlas.orbit(i);
    if (!o.alternating || o.rank > g)
        return false;
    const bool inflation = o.rank < g || atlas.coloops(i) >= 1;
    switch (kind) {
    case ComplexKind::Perfect:
        return true;
    case ComplexKind::Voronoi:
        return o.rank == g;
    case ComplexKind::Inflation:
        return inflation;
    case ComplexKind::Matroid:
        return atlas.matroidal(i);
    default:
        return atlas.matroidal(i) && inflation;
    }
}

ChainComplexQ build_complex(const Atlas& atlas, ComplexKind kind, int g)
{
    if (g > atlas.g() || g < 0)
        throw std::invalid_argument("complex: g=" + std::to_string(g) + " outside the atlas range 0.." +
                                    std::to_string(atlas.g()));
    ChainComplexQ c;
    c.label = kind_name(kind) + std::to_string(g);
    c.g = g;
    c.min_degree = -1;
    c.max_degree = sym_dim(g) - 1;
    for (int n = c.min_degree; n <= c.max_degree; ++n)
        c.basis[n];
    std::map<int, std::pair<int, int>> position;  // orbit -> (degree, index)
    for (int i = 0; i < atlas.registry().size(); ++i) {
        if (!in_complex(atlas, i, kind, g))
            continue;
        const int deg = atlas.orbit(i).dim - 1;
        auto& b = c.basis[deg];
        position[i] = {deg, static_cast<int>(b.size())};
        b.push_back(atlas.orbit(i).id);
    }
    for (int n = c.min_degree; n <= c.max_degree; ++n)
        c.d[n];
    for (const auto& [i, pos] : position)
        for (const auto& term : atlas.boundary(i)) {
            auto it = position.find(term.target);
            if (it == position.end() || term.coefficient == 0)
                continue;
            c.d[pos.first].push_back({it->second.second, pos.second, term.coefficient});
        }
    for (auto& [n, entries] : c.d)
        std::sort(entries.begin(), entries.end(),
                  [](const SparseEntry& a, const SparseEntry& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
    return c;
}

ChainComplexQ build_perfect_complex(const Atlas& atlas, int g) { return build_complex(atlas, ComplexKind::Perfect, g); }
ChainComplexQ build_voronoi_complex(const Atlas& atlas, int g) { return build_complex(atlas, ComplexKind::Voronoi, g); }
ChainComplexQ build_inflation_complex(const Atlas& atlas, int g)
{
    return build_complex(atlas, ComplexKind::Inflation, g);
}
std::pair<ChainComplexQ, ChainComplexQ> build_matroid_complexes(const Atlas& atlas, int g)
{
    return {build_complex(atlas, ComplexKind::Matroid, g), build_complex(atlas, ComplexKind::Coloop, g)};
}

namespace {

// Matrix of the ambient differential from sub's degree-n basis into all of ambient degree n-1.
std::map<std::pair<std::string, std::string>, long> entries_by_id(const ChainComplexQ& c, int n)
{
    std::map<std::pair<std::string, std::string>, long> out;
    auto it = c.d.find(n);
    auto r = c.basis.find(n - 1);
    auto k = c.basis.find(n);
    if (it == c.d.end() || r == c.basis.end() || k == c.basis.end())
        return out;
    const auto& rows = r->second;
    const auto& cols = k->second;
    for (const auto& e : it->second)
        out[{rows[e.row], cols[e.col]}] = e.value;
    return out;
}

} // namespace

bool is_subcomplex(const ChainComplexQ& sub, const ChainComplexQ& ambient, std::string* why)
{
    for (const auto& [n, ids] : sub.basis) {
        if (ids.empty())
            continue;
        const std::set<std::string> cols(ids.begin(), ids.end());
        std::set<std::string> rows;
        if (auto r = sub.basis.find(n - 1); r != sub.basis.end())
            rows.insert(r->second.begin(), r->second.end());
        const auto amb = entries_by_id(ambient, n);
        const auto own = entries_by_id(sub, n);
        for (const auto& [key, v] : amb) {
            if (!cols.count(key.second))
                continue;
            if (!rows.count(key.first)) {
                if (why)
                    *why = "boundary of " + key.second + " leaves the subcomplex at " + key.first;
                return false;
            }
            auto o = own.find(key);
            if (o == own.end() || o->second != v) {
                if (why)
                    *why = "entry (" + key.first + ", " + key.second + ") differs";
                return false;
            }
        }
    }
    return true;
}

ComplexTriple exact_triple(const Atlas& atlas, int g)
{
    if (g < 1)
        throw std::invalid_argument("exact_triple: g must be at least 1");
    ComplexTriple t;
    t.previous = build_perfect_complex(atlas, g - 1);
    t.current = build_perfect_complex(atlas, g);
    t.quotient = build_voronoi_complex(atlas, g);
    for (int n = t.current.min_degree; n <= t.current.max_degree; ++n) {
        const int a = t.previous.dim(n), b = t.current.dim(n), c = t.quotient.dim(n);
        t.dims[n] = {a, b, c};
        if (a + c != b) {
            t.exact = false;
            t.problems.push_back("degree " + std::to_string(n) + ": " + std::to_string(a) + " + " +
                                 std::to_string(c) + " != " + std::to_string(b));
        }
        // the two bases must partition the middle one
        std::set<std::string> mid(t.current.basis[n].begin(), t.current.basis[n].end());
        for (const auto* part : {&t.previous.basis[n], &t.quotient.basis[n]})
            for (const auto& id : *part)
                if (!mid.erase(id)) {
                    t.exact = false;
                    t.problems.push_back("degree " + std::to_string(n) + ": " + id + " not in the middle term");
                }
        if (!mid.empty()) {
            t.exact = false;
            t.problems.push_back("degree " + std::to_string(n) + ": middle term has unmatched generators");
        }
    }
    std::string why;
    if (!is_subcomplex(t.previous, t.current, &why)) {
        t.chain_maps = false;
        t.problems.push_back("inclusion is not a chain map: " + why);
    }
    // projection: the V-differential is the P-differential restricted to rank-g generators
    for (int n = t.current.min_degree; n <= t.current.max_degree; ++n) {
        const auto amb = entries_by_id(t.current, n);
        const auto q = entries_by_id(t.quotient, n);
        const std::set<std::string> qrows(t.quotient.basis[n - 1].begin(), t.quotient.basis[n - 1].end());
        const std::set<std::string> qcols(t.quotient.basis[n].begin(), t.quotient.basis[n].end());
        for (const auto& [key, v] : amb) {
            if (!qrows.count(key.first) || !qcols.count(key.second))
                continue;
            auto o = q.find(key);
            if (o == q.end() || o->second != v) {
                t.chain_maps = false;
                t.problems.push_back("projection is not a chain map at degree " + std::to_string(n));
            }
        }
    }
    return t;
}

void write_complex(std::ostream& os, const ChainComplexQ& c)
{
    os << "complex " << c.label << " g=" << c.g << '\n';
    for (int n = c.min_degree; n <= c.max_degree; ++n) {
        os << "deg " << n << " dim " << c.dim(n);
        if (auto it = c.basis.find(n); it != c.basis.end())
            for (const auto& id : it->second)
                os << ' ' << id;
        os << '\n';
    }
    for (int n = c.min_degree; n <= c.max_degree; ++n)
        if (auto it = c.d.find(n); it != c.d.end())
            for (const auto& e : it->second)
                os << "d " << n << ' ' << e.row << ' ' << e.col << ' ' << e.value << '\n';
}

ChainComplexQ read_complex(std::istream& is)
{
    ChainComplexQ c;
    std::string line;
    int ln = 0;
    bool header = false;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("complex line " + std::to_string(ln) + ": " + what);
    };
    bool first_deg = true;
    while (std::getline(is, line)) {
        ++ln;
        if (auto p = line.find('#'); p != std::string::npos)
            line.erase(p);
        std::istringstream ss(line);
        std::string kw;
        if (!(ss >> kw))
            continue;
        if (kw == "complex") {
            std::string gtok;
            if (!(ss >> c.label >> gtok) || gtok.rfind("g=", 0) != 0)
                fail("malformed header");
            c.g = std::stoi(gtok.substr(2));
            header = true;
        } else if (kw == "deg") {
            if (!header)
                fail("missing header");
            int n, d;
            std::string dimkw;
            if (!(ss >> n >> dimkw >> d) || dimkw != "dim" || d < 0)
                fail("malformed degree line");
            std::vector<std::string> ids;
            std::string id;
            while (ss >> id)
                ids.push_back(id);
            if (static_cast<int>(ids.size()) != d)
                fail("expected " + std::to_string(d) + " basis ids");
            c.basis[n] = std::move(ids);
            if (first_deg)
                c.min_degree = n;
            first_deg = false;
            c.max_degree = std::max(c.max_degree, n);
        } else if (kw == "d") {
            SparseEntry e;
            int n;
            if (!(ss >> n >> e.row >> e.col >> e.value))
                fail("malformed differential entry");
            if (e.col < 0 || e.col >= c.dim(n) || e.row < 0 || e.row >= c.dim(n - 1))
                fail("differential entry out of range");
            c.d[n].push_back(e);
        } else {
            fail("unknown keyword '" + kw + "'");
        }
    }
    if (!header)
        throw std::runtime_error("complex: missing header");
    return c;
}

} // namespace agtop
