#pragma once

#include <cstdint>

#include "varlex/geometry.hpp"

namespace varlex {

// Deterministic uniform draw in [0,1) advancing `state` via splitmix64.
double uniform_draw(uint64_t& state);
// Uniform in [lo, hi).
double uniform_draw(uint64_t& state, double lo, double hi);
// Uniform integer in [0, n).
int64_t uniform_index(uint64_t& state, int64_t n);

struct TestFunctionOptions {
    int max_indicators = 4;   // lattice-cube indicator summands
    int max_bumps = 2;        // smooth Gaussian bumps
    // Components are kept inside the concentric sub-box of this linear
    // fraction, so supports avoid the domain boundary.
    double support_fraction = 0.6;
    bool nonnegative = true;
};

// Random nonnegative test function: scaled cube indicators plus smooth
// bumps. Deterministic in (grid, lattice truncation, seed).
GridFunction random_test_function(const Grid& grid, const CubeLattice& lattice,
                                  uint64_t seed, const TestFunctionOptions& opt = {});

// Random symbol with Hoelder-type local oscillation: sum of a few
// c_i |x - x_i|^delta summands (delta = 1 gives Lipschitz samples).
GridFunction random_holder_symbol(const Grid& grid, double delta, uint64_t seed);

// Random weight bounded away from 0 and infinity: exp of a smooth field
// with values in [1/spread, spread].
GridFunction random_weight(const Grid& grid, double spread, uint64_t seed);

} // namespace varlex
