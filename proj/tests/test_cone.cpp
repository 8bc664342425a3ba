#include "agtop/quadform.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace agtop;

namespace {

// Random set of distinct primitive vectors with entries in [-1, 1] (and [-2, 2] for g = 2).
std::vector<Vec> random_generators(std::mt19937_64& rng, int g, int n)
{
    const int b = g == 2 ? 2 : 1;
    auto pool = oracle::box(g, b);
    std::set<Vec> uniq;
    for (const auto& v : pool)
        if (is_primitive(v))
            uniq.insert(sign_normalized(v));
    std::vector<Vec> cand(uniq.begin(), uniq.end());
    std::shuffle(cand.begin(), cand.end(), rng);
    cand.resize(std::min<std::size_t>(n, cand.size()));
    return cand;
}

} // namespace

TEST_CASE("cone construction validates generators")
{
    const PerfectCone c(2, {{1, 0}, {0, -1}, {-1, 1}});
    CHECK(c.generators() == std::vector<Vec>{{1, 0}, {0, 1}, {1, -1}});
    CHECK(c.rank() == 2);
    CHECK(c.dimension() == 3);
    CHECK_FALSE(c.is_boundary());
    CHECK_THROWS_AS(PerfectCone(2, {{2, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(PerfectCone(2, {{1, 1}, {-1, -1}}), std::invalid_argument);
    CHECK_THROWS_AS(PerfectCone(2, {{1, 1, 0}}), std::invalid_argument);
    CHECK(PerfectCone::zero(3).dimension() == 0);
    CHECK(PerfectCone(3, {{1, 0, 0}, {0, 1, 0}}).is_boundary());
}

TEST_CASE("facets agree with the exhaustive supporting-hyperplane search")
{
    std::mt19937_64 rng(31);
    int nonsimplicial = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const int g = 2 + trial % 3;
        const int n = 1 + static_cast<int>(rng() % (g == 4 ? 10 : 8));
        const PerfectCone c(g, random_generators(rng, g, n));
        const auto got = facets(c);
        const std::set<Mask> ref = oracle::facets(c.forms());
        CHECK(std::set<Mask>(got.begin(), got.end()) == ref);
        nonsimplicial += c.size() > c.dimension();
    }
    CHECK(nonsimplicial > 20);
}

TEST_CASE("facets of the principal and D4 cones")
{
    CHECK(facets(cone_of_form(principal_form(3))).size() == 6);
    const FormCatalog g4 = load_form_catalog_file(bundled_catalog_path(4));
    const PerfectCone d4 = cone_of_form(g4.forms[1]);
    const auto f = facets(d4);
    CHECK(std::set<Mask>(f.begin(), f.end()) == oracle::facets(d4.forms()));
    const FacetNormals fn = facet_normals(d4);
    CHECK(fn.masks == f);
    // each normal vanishes exactly on its facet and is positive elsewhere
    const auto forms = d4.forms();
    for (std::size_t k = 0; k < fn.normals.size(); ++k)
        for (int j = 0; j < d4.size(); ++j) {
            Vec x;
            for (int r : fn.span_rows)
                x.push_back(forms[j][r]);
            const auto s = dot(fn.normals[k], x);
            CHECK((fn.masks[k] >> j & 1 ? s == 0 : s > 0));
        }
}

TEST_CASE("face lattices satisfy the Euler relation and are closed under intersection")
{
    std::mt19937_64 rng(37);
    std::vector<PerfectCone> cones;
    for (int g = 2; g <= 4; ++g)
        cones.push_back(cone_of_form(principal_form(g)));
    cones.push_back(cone_of_form(load_form_catalog_file(bundled_catalog_path(4)).forms[1]));
    for (int trial = 0; trial < 40; ++trial)
        cones.emplace_back(3, random_generators(rng, 3, 2 + trial % 7));
    for (const auto& c : cones) {
        const FaceLattice lat = faces(c);
        CHECK(lat.euler_characteristic() == (c.dimension() == 0 ? 1 : 0));
        CHECK(lat.by_dim.back() == std::vector<Mask>{c.full_mask()});
        std::set<Mask> all;
        for (const auto& b : lat.by_dim)
            all.insert(b.begin(), b.end());
        CHECK(all.size() == lat.count());
        for (Mask a : lat.facets)
            for (Mask b : lat.facets)
                CHECK(all.count(a & b));
    }
    CHECK(faces(cone_of_form(principal_form(3))).count() == 64);
}

TEST_CASE("reduction to the rank and padding back")
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const int g = 3 + trial % 2;
        // generators inside a random rank-(g-1) sublattice
        const IntMatrix u = oracle::random_unimodular(g, rng);
        std::vector<Vec> gens;
        for (auto v : random_generators(rng, g - 1, 2 + trial % 4)) {
            v.push_back(0);
            gens.push_back(primitive_part(u * v));
        }
        const PerfectCone c(g, gens);
        REQUIRE(c.is_boundary());
        const Reduction r = reduce(c);
        CHECK(r.cone.g() == c.rank());
        CHECK(r.cone.rank() == r.cone.g());
        CHECK(abs(determinant(r.transform)) == 1);
        for (int i = 0; i < c.size(); ++i) {
            Vec y = r.transform * c.generator(i);
            for (int k = c.rank(); k < g; ++k)
                CHECK(y[k] == 0);
            y.resize(c.rank());
            CHECK(sign_normalized(y) == r.cone.generator(i));
        }
        CHECK(r.cone.dimension() == c.dimension());
        const auto back = unimodular_inverse(r.transform);
        REQUIRE(back);
        CHECK(transform(pad(r.cone, g), *back) == c);
    }
    CHECK_THROWS_AS(reduce(cone_of_form(principal_form(2))), std::invalid_argument);
    CHECK(reduce_to_rank(cone_of_form(principal_form(2))).transform == IntMatrix::identity(2));
    CHECK_THROWS_AS(pad(PerfectCone::zero(3), 2), std::invalid_argument);
}

TEST_CASE("cone text format")
{
    const PerfectCone c = cone_of_form(principal_form(3));
    std::ostringstream os;
    write_cone(os, c);
    std::istringstream is("# header comment\n" + os.str());
    int ln = 0;
    CHECK(read_cone(is, &ln) == c);
    CHECK(ln == 8);

    auto fails = [](const std::string& text, const std::string& what) {
        std::istringstream bad(text);
        CHECK_THROWS_WITH_AS(read_cone(bad), doctest::Contains(what.c_str()), std::runtime_error);
    };
    fails("", "line 0");
    fails("cone g=2\n", "line 1");
    fails("cone g=2 n=2\n1 0\n", "unexpected end");
    fails("cone g=2 n=1\n1 0 1\n", "line 2");
    fails("cone g=2 n=1\n1 x\n", "line 2");
    fails("cone g=2 n=2\n1 0\n-1 0\n", "repeated");
    fails("cone g=2 n=1\n2 4\n", "not primitive");
}
