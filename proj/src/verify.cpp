#include "agtop/verify.hpp"

#include <sstream>

namespace agtop {

VerifyLevel parse_level(const std::string& s)
{
    if (s == "fast")
        return VerifyLevel::Fast;
    if (s == "full")
        return VerifyLevel::Full;
    throw std::invalid_argument("unknown verification level '" + s + "' (expected fast or full)");
}

bool all_ok(const std::vector<Check>& checks)
{
    for (const auto& c : checks)
        if (!c.ok)
            return false;
    return true;
}

namespace {

std::string show_h(const BettiReport& b)
{
    std::ostringstream os;
    bool any = false;
    for (const auto& [n, d] : b.h)
        if (d != 0) {
            os << (any ? " " : "") << "H" << n << "=" << d;
            any = true;
        }
    return any ? os.str() : "zero";
}

} // namespace

std::vector<Check> run_invariants(const Atlas& atlas, const InvariantOptions& opts)
{
    const int g = atlas.g();
    std::vector<Check> out;
    std::map<ComplexKind, ChainComplexQ> cx;
    std::map<ComplexKind, BettiReport> hb;
    for (auto k : {ComplexKind::Perfect, ComplexKind::Voronoi, ComplexKind::Inflation, ComplexKind::Matroid,
                   ComplexKind::Coloop}) {
        cx[k] = build_complex(atlas, k, g);
        const VerifyResult v = verify_complex(cx[k]);
        out.push_back({"d^2 = 0 on " + cx[k].label, v.ok, v.message});
        hb[k] = betti(cx[k]);
        const auto& b = hb[k];
        out.push_back({"Euler consistency on " + b.label, b.euler_chains == b.euler_homology,
                       "chains " + std::to_string(b.euler_chains) + ", homology " + std::to_string(b.euler_homology)});
    }

    const std::pair<ComplexKind, ComplexKind> inclusions[] = {{ComplexKind::Inflation, ComplexKind::Perfect},
                                                              {ComplexKind::Matroid, ComplexKind::Perfect},
                                                              {ComplexKind::Coloop, ComplexKind::Matroid},
                                                              {ComplexKind::Coloop, ComplexKind::Inflation}};
    for (auto [sub, amb] : inclusions) {
        std::string why;
        const bool ok = is_subcomplex(cx[sub], cx[amb], &why);
        out.push_back({cx[sub].label + " is a subcomplex of " + cx[amb].label, ok, why});
    }

    if (g >= 1) {
        const ComplexTriple t = exact_triple(atlas, g);
        std::string why;
        for (const auto& p : t.problems)
            why += (why.empty() ? "" : "; ") + p;
        out.push_back({"exact triple dimensions for g=" + std::to_string(g), t.exact, why});
        out.push_back({"inclusion and projection are chain maps for g=" + std::to_string(g), t.chain_maps, why});
    }

    out.push_back({"I" + std::to_string(g) + " acyclic", hb[ComplexKind::Inflation].acyclic(),
                   show_h(hb[ComplexKind::Inflation])});
    out.push_back({"C" + std::to_string(g) + " acyclic", hb[ComplexKind::Coloop].acyclic(),
                   show_h(hb[ComplexKind::Coloop])});
    {
        bool ok = true;
        std::string bad;
        for (const auto& [n, d] : hb[ComplexKind::Perfect].h)
            if (n <= g - 2 && d != 0) {
                ok = false;
                bad += "H" + std::to_string(n) + "=" + std::to_string(d) + " ";
            }
        out.push_back({"H_k(P" + std::to_string(g) + ") = 0 for k <= g-2", ok, bad});
    }

    if (opts.level == VerifyLevel::Full) {
        if (!opts.rebuild) {
            out.push_back({"seed invariance", false, "no rebuild function supplied"});
            return out;
        }
        AtlasOptions ao;
        ao.jobs = opts.jobs;
        ao.cross_check = true;
        try {
            opts.rebuild(ao);
            out.push_back({"boundary strata agree with faces of top cones", true, ""});
        } catch (const std::logic_error& e) {
            out.push_back({"boundary strata agree with faces of top cones", false, e.what()});
        }
        const BettiReport& base = hb[ComplexKind::Perfect];
        for (auto seed : opts.seeds) {
            AtlasOptions so;
            so.jobs = opts.jobs;
            so.seed = seed;
            const Atlas other = opts.rebuild(so);
            const ChainComplexQ p = build_perfect_complex(other, g);
            const BettiReport b = betti(p);
            bool ok = verify_complex(p).ok && b.h == base.h && b.chain_dims == base.chain_dims &&
                      other.registry().size() == atlas.registry().size();
            out.push_back({"P" + std::to_string(g) + " homology invariant under seed " + std::to_string(seed), ok,
                           show_h(b)});
        }
    }
    return out;
}

} // namespace agtop
