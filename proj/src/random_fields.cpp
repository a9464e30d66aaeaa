#include "varlex/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "varlex/parallel.hpp"

namespace varlex {

double uniform_draw(uint64_t& state) {
    state = splitmix64(state);
    return static_cast<double>(state >> 11) * 0x1.0p-53;
}

double uniform_draw(uint64_t& state, double lo, double hi) {
    return lo + (hi - lo) * uniform_draw(state);
}

int64_t uniform_index(uint64_t& state, int64_t n) {
    if (n <= 0) throw std::invalid_argument("uniform_index: requires n >= 1");
    return static_cast<int64_t>(uniform_draw(state) * static_cast<double>(n)) % n;
}

GridFunction random_test_function(const Grid& grid, const CubeLattice& lattice,
                                  uint64_t seed, const TestFunctionOptions& opt) {
    if (!(opt.support_fraction > 0.0) || !(opt.support_fraction <= 1.0)) {
        throw std::invalid_argument("random_test_function: requires support_fraction in (0,1]");
    }
    uint64_t state = seed ^ 0xC0FFEE123456789ull;
    GridFunction f(grid, 0.0);
    const Rect inner = grid.box.rect().scaled(opt.support_fraction);

    const int n_ind = 1 + static_cast<int>(uniform_index(state, std::max(1, opt.max_indicators)));
    int placed = 0;
    int guard = 0;
    while (placed < n_ind && guard < 200) {
        ++guard;
        const int level = lattice.j_min() +
                          static_cast<int>(uniform_index(state, lattice.j_max() - lattice.j_min() + 1));
        std::array<int64_t, 2> idx{0, 0};
        const int64_t per_side = int64_t{1} << level;
        idx[0] = uniform_index(state, per_side);
        if (grid.box.dim == 2) idx[1] = uniform_index(state, per_side);
        const DyadicCube q = lattice.cube_at(level, idx);
        if (!inner.contains_rect(q.rect)) continue;
        const double coeff = uniform_draw(state, 0.25, 1.0);
        grid.for_cells_in(q.rect, [&](int64_t i, const Point&) {
            f.values[static_cast<size_t>(i)] += coeff;
        });
        ++placed;
    }

    const int n_bumps = static_cast<int>(uniform_index(state, opt.max_bumps + 1));
    for (int bump = 0; bump < n_bumps; ++bump) {
        Point c{0.0, 0.0};
        for (int a = 0; a < grid.box.dim; ++a) c[a] = uniform_draw(state, inner.lo[a], inner.hi[a]);
        const double width = uniform_draw(state, 0.05, 0.2) * grid.box.side();
        const double amp = uniform_draw(state, 0.25, 1.0);
        // Supported where the Gaussian exceeds exp(-9); clipped to the inner box.
        grid.for_cells_in(inner, [&](int64_t i, const Point& x) {
            double d2 = 0.0;
            for (int a = 0; a < grid.box.dim; ++a) d2 += (x[a] - c[a]) * (x[a] - c[a]);
            const double e = d2 / (width * width);
            if (e <= 9.0) f.values[static_cast<size_t>(i)] += amp * std::exp(-e);
        });
    }

    // Guarantee a nonzero function: fall back to the indicator of a central cube.
    if (f.max_abs() == 0.0) {
        const DyadicCube q = lattice.containing(std::min(lattice.j_max(), lattice.j_min() + 2),
                                                grid.box.rect().center());
        grid.for_cells_in(q.rect, [&](int64_t i, const Point&) {
            f.values[static_cast<size_t>(i)] = 1.0;
        });
    }
    if (!opt.nonnegative) {
        // Flip the sign of a random half-space component for signed samples.
        const double pivot = uniform_draw(state, inner.lo[0], inner.hi[0]);
        for (int64_t i = 0; i < f.size(); ++i) {
            if (grid.cell_midpoint(i)[0] > pivot) f.values[static_cast<size_t>(i)] *= -1.0;
        }
    }
    return f;
}

GridFunction random_holder_symbol(const Grid& grid, double delta, uint64_t seed) {
    if (!(delta > 0.0) || !(delta <= 1.0)) {
        throw std::invalid_argument("random_holder_symbol: requires delta in (0,1]");
    }
    uint64_t state = seed ^ 0xB00B1E5C0DEull;
    const Rect b = grid.box.rect();
    const int terms = 2 + static_cast<int>(uniform_index(state, 2));
    std::vector<Point> centers(static_cast<size_t>(terms));
    std::vector<double> coeffs(static_cast<size_t>(terms));
    for (int t = 0; t < terms; ++t) {
        for (int a = 0; a < grid.box.dim; ++a) {
            centers[static_cast<size_t>(t)][a] = uniform_draw(state, b.lo[a], b.hi[a]);
        }
        coeffs[static_cast<size_t>(t)] = uniform_draw(state, -1.0, 1.0);
    }
    return GridFunction(grid, [&](const Point& x) {
        double v = 0.0;
        for (int t = 0; t < terms; ++t) {
            double d2 = 0.0;
            for (int a = 0; a < grid.box.dim; ++a) {
                const double d = x[a] - centers[static_cast<size_t>(t)][a];
                d2 += d * d;
            }
            v += coeffs[static_cast<size_t>(t)] * std::pow(std::sqrt(d2), delta);
        }
        return v;
    });
}

GridFunction random_weight(const Grid& grid, double spread, uint64_t seed) {
    if (!(spread >= 1.0)) throw std::invalid_argument("random_weight: requires spread >= 1");
    uint64_t state = seed ^ 0x5EEDFACE5EEDFACEull;
    const double amp = std::log(spread);
    const double f0 = uniform_draw(state, 1.0, 4.0);
    const double f1 = uniform_draw(state, 1.0, 4.0);
    const double phase = uniform_draw(state, 0.0, 6.283185307179586);
    const Point c = grid.box.rect().center();
    return GridFunction(grid, [&](const Point& x) {
        double arg = f0 * (x[0] - c[0]) / grid.box.half_width + phase;
        if (grid.box.dim == 2) arg += f1 * (x[1] - c[1]) / grid.box.half_width;
        return std::exp(amp * std::sin(arg));
    });
}

} // namespace varlex
