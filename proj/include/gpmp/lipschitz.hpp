// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <vector>

#include "gpmp/problem.hpp"

namespace gpmp {

struct LipschitzReport {
    int pairs = 0;
    int skipped = 0;  // zero denominators
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    /// Same ratio with the sup norm taken over the normal-form states only.
    /// Jet orders at or above the chain length see the control directly, so
    /// the full ratio grows like 1 / width for control-only pairs.
    double max_state_ratio = 0.0;
    double cutoff_radius = 0.0;
    std::vector<double> ratios;
};

/// Empirical estimate of the Lipschitz constant of (u, sigma) -> jet of the
/// solution in the C^(2r-1) sup norm.  Each pair compares a random constant
/// control with a needle of random width in [0.01, 0.2]; the initial states
/// are drawn from the triple's probe box.  The field is clamped outside a
/// ball of radius 10x the probe scale so the flow stays of bounded normal
/// type.  Deterministic in `seed`.
LipschitzReport lipschitz_probe(const DefiningTriple& triple, int n_pairs, std::uint64_t seed, int t_grid = 200);

}  // namespace gpmp
