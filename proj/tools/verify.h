#pragma once

#include "polygreen/geometry.h"

#include <string>
#include <vector>

namespace polygreen::cli {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
};

/// Invariant suite for one (n, k): inversion identities, kernel symmetry and
/// sign, the Gegenbauer identities, agreement of the two modal routes and,
/// for k = 1, the explicit constant bound. Takes a few seconds.
std::vector<CheckResult> run_verify(const ProblemSpec& spec, unsigned long long seed, int threads);

}  // namespace polygreen::cli
