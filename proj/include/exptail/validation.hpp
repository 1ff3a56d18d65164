#pragma once

#include <string>
#include <vector>

#include "exptail/young_function.hpp"

namespace exptail::convex {

struct ProbeGrid {
    std::vector<double> radii;   // at least 3, one >= the truncation radius
    int directions = 8;          // generic directions per radius (no axis rays)
    unsigned long long seed = 0x9E3779B97F4A7C15ull;
};

struct ValidationReport {
    // One entry per violated check; empty means the function passed.
    // Check names: "evenness", "positivity", "zero-at-origin", "convexity",
    // "hessian-at-zero-determinant", "gradient-growth", "domain violation".
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_young_function(const YoungFunction& f, const ProbeGrid& grid);

}  // namespace exptail::convex
