#include "agtop/quadform.hpp"
#include "agtop/symmetry.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace agtop;

namespace {

PerfectCone d4_cone() { return cone_of_form(load_form_catalog_file(bundled_catalog_path(4)).forms[1]); }

bool maps_onto(const PerfectCone& a, const PerfectCone& b, const ConeTransform& t)
{
    if (abs(determinant(t.matrix)) != 1)
        return false;
    for (int i = 0; i < a.size(); ++i) {
        Vec y = t.matrix * a.generator(i);
        for (auto& x : y)
            x *= t.sign[i];
        if (y != b.generator(t.perm[i]))
            return false;
    }
    return true;
}

// Brute-force stabilizer order for g = 2: every matrix with entries in [-2, 2] and det +-1
// that permutes the generators up to sign.
int brute_stabilizer_g2(const PerfectCone& c)
{
    int count = 0;
    for (const auto& r0 : oracle::box(2, 2))
        for (const auto& r1 : oracle::box(2, 2)) {
            IntMatrix m = IntMatrix::from_rows(std::vector<Vec>{r0, r1});
            if (abs(determinant(m)) != 1)
                continue;
            std::set<Vec> img;
            for (const auto& v : c.generators())
                img.insert(sign_normalized(m * v));
            count += img == std::set<Vec>(c.generators().begin(), c.generators().end());
        }
    return count;
}

} // namespace

TEST_CASE("equivalence is found under random unimodular changes of basis")
{
    std::mt19937_64 rng(43);
    std::vector<PerfectCone> cones{cone_of_form(principal_form(3)), cone_of_form(principal_form(4)), d4_cone()};
    const PerfectCone p4 = cone_of_form(principal_form(4));
    const auto f = facets(p4);
    for (int k = 0; k < 4; ++k)
        cones.push_back(p4.subcone(f[k]));
    for (const auto& c : cones) {
        for (int trial = 0; trial < 5; ++trial) {
            const IntMatrix u = random_unimodular(c.g(), rng);
            const PerfectCone d = transform(c, u);
            const auto t = equivalent(c, d);
            REQUIRE(t);
            CHECK(maps_onto(c, d, *t));
        }
    }
    CHECK_FALSE(equivalent(cone_of_form(principal_form(4)), d4_cone()));
    CHECK_FALSE(equivalent(p4.subcone(f[0]), p4));
    CHECK_THROWS_AS(equivalent(cone_of_form(principal_form(2)), cone_of_form(principal_form(3))),
                    std::invalid_argument);
}

TEST_CASE("invariants do not depend on the basis")
{
    std::mt19937_64 rng(47);
    const PerfectCone c = d4_cone();
    const auto inv = cone_invariants(c);
    for (int trial = 0; trial < 5; ++trial)
        CHECK(cone_invariants(transform(c, random_unimodular(4, rng))).fingerprint == inv.fingerprint);
    CHECK(cone_invariants(cone_of_form(principal_form(4))).fingerprint != inv.fingerprint);
    CHECK_THROWS_AS(cone_invariants(PerfectCone(3, {{1, 0, 0}})), std::invalid_argument);
}

TEST_CASE("stabilizer orders")
{
    // -I acts trivially on forms, so each order counts it
    const PerfectCone top2 = cone_of_form(principal_form(2));
    CHECK(automorphisms(top2).size() == 12);
    CHECK(brute_stabilizer_g2(top2) == 12);
    const PerfectCone edge2(2, {{1, 0}, {0, 1}});
    CHECK(automorphisms(edge2).size() == static_cast<std::size_t>(brute_stabilizer_g2(edge2)));
    CHECK(automorphisms(cone_of_form(principal_form(3))).size() == 48);
    CHECK(automorphisms(d4_cone()).size() == 1152);
    for (const auto& t : automorphisms(d4_cone()))
        CHECK(maps_onto(d4_cone(), d4_cone(), t));
}

TEST_CASE("alternating cones for g = 2")
{
    const PerfectCone s3 = cone_of_form(principal_form(2));
    const PerfectCone s2(2, {{1, 0}, {0, 1}});
    const PerfectCone s1(2, {{1, 0}});
    const PerfectCone s0 = PerfectCone::zero(2);
    CHECK_FALSE(is_alternating(s3));
    CHECK_FALSE(is_alternating(s2));
    CHECK(is_alternating(s1));
    CHECK(is_alternating(s0));

    // the coordinate swap stabilizes s2 and s3 and reverses both
    IntMatrix a(2, 2);
    a(0, 1) = a(1, 0) = 1;
    for (const auto& c : {s2, s3}) {
        bool found = false;
        for (const auto& t : automorphisms(c))
            if (t.matrix == a) {
                found = true;
                CHECK(orientation_sign(c, t) == -1);
            }
        CHECK(found);
    }
    CHECK(is_alternating(cone_of_form(principal_form(3))));
}

TEST_CASE("orientation signs do not depend on the chosen orientation")
{
    std::mt19937_64 rng(53);
    const PerfectCone c = d4_cone();
    const auto autos = automorphisms(c);
    for (int trial = 0; trial < 3; ++trial) {
        const Orientation o = reference_orientation(c, &rng);
        for (std::size_t k = 0; k < autos.size(); k += 37)
            CHECK(orientation_sign(c, o, autos[k]) == orientation_sign(c, autos[k]));
    }
    const Orientation lex = reference_orientation(c);
    CHECK(std::is_sorted(lex.basis.begin(), lex.basis.end()));
    CHECK(static_cast<int>(lex.basis.size()) == c.dimension());
}

TEST_CASE("orbit registry")
{
    std::mt19937_64 rng(59);
    const PerfectCone p3 = cone_of_form(principal_form(3));
    std::vector<PerfectCone> cones;
    for (Mask f : facets(p3))
        for (int k = 0; k < 2; ++k)
            cones.push_back(transform(p3.subcone(f), random_unimodular(3, rng)));
    cones.push_back(p3);
    const OrbitRegistry reg = classify_orbits(cones);
    // the facets of the principal cone (K4 minus an edge) form one orbit
    REQUIRE(reg.size() == 2);
    CHECK(reg.orbit(0).dim == 5);
    CHECK(reg.orbit(1).dim == 6);
    CHECK(reg.orbit(1).alternating);
    CHECK(reg.orbit(1).stabilizer_size == 48);
    for (const auto& c : cones) {
        const auto m = reg.locate(c);
        REQUIRE(m);
        const PerfectCone& rep = reg.orbit(m->orbit).rep;
        for (const auto& v : c.generators())
            CHECK(std::count(rep.generators().begin(), rep.generators().end(), sign_normalized(m->apply(v))) == 1);
    }
    CHECK(reg.find_id(reg.orbit(1).id) == 1);
    CHECK_FALSE(reg.find_id("nope"));
    CHECK(reg.by_dimension().at(5) == std::vector<int>{0});

    // boundary cones are registered through their reduction
    OrbitRegistry r2;
    const int i = r2.classify(PerfectCone(3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}));
    CHECK(r2.orbit(i).rank == 2);
    CHECK(equivalent(r2.orbit(i).rep, cone_of_form(principal_form(2))));
    bool created = true;
    CHECK(r2.classify(PerfectCone(3, {{0, 0, 1}, {0, 1, 0}, {0, 1, -1}}), created) == i);
    CHECK_FALSE(created);

    std::ostringstream os;
    reg.write(os);
    CHECK(os.str().find("orbit " + reg.orbit(1).id + " dim=6") != std::string::npos);
    CHECK(os.str().find("stab=48") != std::string::npos);
    CHECK_THROWS_AS(classify_orbits({p3, cone_of_form(principal_form(2))}), std::invalid_argument);
}
