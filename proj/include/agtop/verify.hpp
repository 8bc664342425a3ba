#pragma once

// Invariant suite over the complexes of one atlas.

#include "agtop/homology.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace agtop {

struct Check {
    std::string name;
    bool ok = true;
    std::string detail;
};

enum class VerifyLevel { Fast, Full };
VerifyLevel parse_level(const std::string& s);

struct InvariantOptions {
    VerifyLevel level = VerifyLevel::Fast;
    int jobs = 1;
    /// Seeds for the re-run invariance check (Full level only).
    std::vector<std::uint64_t> seeds{1, 2, 3};
    /// Rebuilds the atlas from the same catalogs; required for the Full level.
    std::function<Atlas(const AtlasOptions&)> rebuild;
};

/// d^2 = 0, subcomplex inclusions, exact triple, acyclicity of I and C, low-degree vanishing,
/// Euler consistency; Full adds cross-checked boundary strata and seed invariance.
std::vector<Check> run_invariants(const Atlas& atlas, const InvariantOptions& opts = {});

bool all_ok(const std::vector<Check>& checks);

} // namespace agtop
