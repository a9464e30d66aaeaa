#include "varlex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace varlex {

namespace {

// Small deterministic generator used for shifted-cube placement.
uint64_t splitmix64_step(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double unit_double(uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace

// ===== Rect =====

double Rect::measure() const {
    double m = 1.0;
    for (int a = 0; a < dim; ++a) m *= std::max(0.0, hi[a] - lo[a]);
    return m;
}

Point Rect::center() const {
    Point c{0.0, 0.0};
    for (int a = 0; a < dim; ++a) c[a] = 0.5 * (lo[a] + hi[a]);
    return c;
}

bool Rect::contains(const Point& x) const {
    for (int a = 0; a < dim; ++a) {
        if (x[a] < lo[a] || x[a] > hi[a]) return false;
    }
    return true;
}

bool Rect::empty() const {
    for (int a = 0; a < dim; ++a) {
        if (hi[a] <= lo[a]) return true;
    }
    return false;
}

Rect Rect::intersect(const Rect& other) const {
    Rect r;
    r.dim = dim;
    for (int a = 0; a < dim; ++a) {
        r.lo[a] = std::max(lo[a], other.lo[a]);
        r.hi[a] = std::min(hi[a], other.hi[a]);
    }
    return r;
}

Rect Rect::scaled(double gamma) const {
    if (!(gamma > 0.0)) throw std::invalid_argument("Rect::scaled: requires gamma > 0");
    Rect r;
    r.dim = dim;
    const Point c = center();
    for (int a = 0; a < dim; ++a) {
        const double h = 0.5 * gamma * (hi[a] - lo[a]);
        r.lo[a] = c[a] - h;
        r.hi[a] = c[a] + h;
    }
    return r;
}

bool Rect::contains_rect(const Rect& inner) const {
    for (int a = 0; a < dim; ++a) {
        if (inner.lo[a] < lo[a] || inner.hi[a] > hi[a]) return false;
    }
    return true;
}

Rect Rect::cube(int dim, const Point& center, double half_side) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("Rect::cube: dim must be 1 or 2");
    if (!(half_side > 0.0)) throw std::invalid_argument("Rect::cube: requires half_side > 0");
    Rect r;
    r.dim = dim;
    for (int a = 0; a < dim; ++a) {
        r.lo[a] = center[a] - half_side;
        r.hi[a] = center[a] + half_side;
    }
    return r;
}

// ===== Grid =====

int64_t Grid::cell_count() const {
    int64_t n = cells_per_side();
    return box.dim == 1 ? n : n * n;
}

double Grid::cell_measure() const {
    const double h = cell_size();
    return box.dim == 1 ? h : h * h;
}

Point Grid::cell_midpoint(int64_t flat) const {
    const int64_t n = cells_per_side();
    const double h = cell_size();
    const Rect b = box.rect();
    Point p{0.0, 0.0};
    if (box.dim == 1) {
        p[0] = b.lo[0] + (static_cast<double>(flat) + 0.5) * h;
    } else {
        const int64_t iy = flat / n;
        const int64_t ix = flat % n;
        p[0] = b.lo[0] + (static_cast<double>(ix) + 0.5) * h;
        p[1] = b.lo[1] + (static_cast<double>(iy) + 0.5) * h;
    }
    return p;
}

int64_t Grid::CellRange::count(int dim) const {
    if (empty()) return 0;
    int64_t c = hi[0] - lo[0] + 1;
    if (dim == 2) c *= hi[1] - lo[1] + 1;
    return c;
}

Grid::CellRange Grid::cells_in(const Rect& region) const {
    CellRange r;
    const int64_t n = cells_per_side();
    const double h = cell_size();
    const Rect b = box.rect();
    for (int a = 0; a < box.dim; ++a) {
        // Midpoint of cell i is b.lo + (i + 1/2) h; the +-1e-9 cell fractions
        // guard against float dust on cube-aligned boundaries (midpoints are
        // never closer than h/2 to an aligned boundary).
        double flo = (region.lo[a] - b.lo[a]) / h - 0.5;
        double fhi = (region.hi[a] - b.lo[a]) / h - 0.5;
        int64_t ilo = static_cast<int64_t>(std::ceil(flo - 1e-9));
        int64_t ihi = static_cast<int64_t>(std::floor(fhi + 1e-9));
        ilo = std::max<int64_t>(ilo, 0);
        ihi = std::min<int64_t>(ihi, n - 1);
        r.lo[a] = ilo;
        r.hi[a] = ihi;
        if (ihi < ilo) {
            r.lo[0] = 0;
            r.hi[0] = -1;
            return r;
        }
    }
    if (box.dim == 1) {
        r.lo[1] = 0;
        r.hi[1] = 0;
    }
    return r;
}

void Grid::for_cells_in(const Rect& region, const std::function<void(int64_t, const Point&)>& fn) const {
    const CellRange r = cells_in(region);
    if (r.empty()) return;
    if (box.dim == 1) {
        for (int64_t i = r.lo[0]; i <= r.hi[0]; ++i) fn(i, cell_midpoint(i));
    } else {
        const int64_t n = cells_per_side();
        for (int64_t iy = r.lo[1]; iy <= r.hi[1]; ++iy) {
            for (int64_t ix = r.lo[0]; ix <= r.hi[0]; ++ix) {
                const int64_t flat = iy * n + ix;
                fn(flat, cell_midpoint(flat));
            }
        }
    }
}

bool Grid::operator==(const Grid& other) const {
    return box.dim == other.box.dim && depth == other.depth &&
           box.half_width == other.box.half_width &&
           box.center[0] == other.box.center[0] && box.center[1] == other.box.center[1];
}

// ===== GridFunction =====

GridFunction::GridFunction(const Grid& g, double fill) : grid(g), values(g.cell_count(), fill) {}

GridFunction::GridFunction(const Grid& g, const std::function<double(const Point&)>& fn) : grid(g) {
    const int64_t n = g.cell_count();
    values.resize(n);
    for (int64_t i = 0; i < n; ++i) values[i] = fn(g.cell_midpoint(i));
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

bool GridFunction::all_finite() const {
    for (double v : values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

// ===== CubeLattice =====

CubeLattice::CubeLattice(const Box& box, int j_min, int j_max,
                         int shifted_per_level, uint64_t shift_seed)
    : box_(box), j_min_(j_min), j_max_(j_max) {
    if (box.dim != 1 && box.dim != 2) throw std::invalid_argument("CubeLattice: dim must be 1 or 2");
    if (j_min < 0) throw std::invalid_argument("CubeLattice: requires j_min >= 0");
    if (j_max < j_min) throw std::invalid_argument("CubeLattice: requires j_min <= j_max");
    if (j_max > 40) throw std::invalid_argument("CubeLattice: j_max too large");

    uint64_t state = shift_seed ^ 0xA5A5A5A55A5A5A5Aull;
    const Rect b = box.rect();
    for (int j = j_min; j <= j_max; ++j) {
        const double side = box.side() / static_cast<double>(int64_t{1} << j);
        for (int i = 0; i < shifted_per_level; ++i) {
            DyadicCube q;
            q.level = j;
            q.index = {-1, -1};
            q.shifted = true;
            q.rect.dim = box.dim;
            for (int a = 0; a < box.dim; ++a) {
                const double u = unit_double(splitmix64_step(state));
                q.rect.lo[a] = b.lo[a] + u * (box.side() - side);
                q.rect.hi[a] = q.rect.lo[a] + side;
            }
            shifted_.push_back(q);
        }
    }
}

int64_t CubeLattice::cubes_per_level(int j) const {
    const int64_t n = int64_t{1} << j;
    return box_.dim == 1 ? n : n * n;
}

int64_t CubeLattice::dyadic_count() const {
    int64_t total = 0;
    for (int j = j_min_; j <= j_max_; ++j) total += cubes_per_level(j);
    return total;
}

DyadicCube CubeLattice::cube_at(int level, std::array<int64_t, 2> index) const {
    if (level < j_min_ || level > j_max_) throw std::invalid_argument("CubeLattice::cube_at: level outside lattice");
    const int64_t n = int64_t{1} << level;
    for (int a = 0; a < box_.dim; ++a) {
        if (index[a] < 0 || index[a] >= n) throw std::invalid_argument("CubeLattice::cube_at: index out of range");
    }
    DyadicCube q;
    q.level = level;
    q.index = index;
    q.shifted = false;
    q.rect.dim = box_.dim;
    const Rect b = box_.rect();
    const double side = box_.side() / static_cast<double>(n);
    for (int a = 0; a < box_.dim; ++a) {
        q.rect.lo[a] = b.lo[a] + static_cast<double>(index[a]) * side;
        q.rect.hi[a] = q.rect.lo[a] + side;
    }
    if (box_.dim == 1) {
        q.index[1] = 0;
        q.rect.lo[1] = 0.0;
        q.rect.hi[1] = 0.0;
    }
    return q;
}

int64_t CubeLattice::position(const DyadicCube& q) const {
    if (q.shifted || q.level < j_min_ || q.level > j_max_) {
        throw std::invalid_argument("CubeLattice::position: not a dyadic lattice cube");
    }
    int64_t off = 0;
    for (int l = j_min_; l < q.level; ++l) off += cubes_per_level(l);
    const int64_t per_side = int64_t{1} << q.level;
    return off + (box_.dim == 2 ? q.index[1] * per_side : 0) + q.index[0];
}

std::optional<DyadicCube> CubeLattice::parent(const DyadicCube& q) const {
    if (q.shifted || q.level <= j_min_) return std::nullopt;
    std::array<int64_t, 2> idx{q.index[0] / 2, q.index[1] / 2};
    return cube_at(q.level - 1, idx);
}

std::vector<DyadicCube> CubeLattice::children(const DyadicCube& q) const {
    std::vector<DyadicCube> out;
    if (q.shifted || q.level >= j_max_) return out;
    if (box_.dim == 1) {
        out.push_back(cube_at(q.level + 1, {2 * q.index[0], 0}));
        out.push_back(cube_at(q.level + 1, {2 * q.index[0] + 1, 0}));
    } else {
        for (int64_t dy = 0; dy < 2; ++dy) {
            for (int64_t dx = 0; dx < 2; ++dx) {
                out.push_back(cube_at(q.level + 1, {2 * q.index[0] + dx, 2 * q.index[1] + dy}));
            }
        }
    }
    return out;
}

DyadicCube CubeLattice::containing(int level, const Point& x) const {
    const Rect b = box_.rect();
    if (!b.contains(x)) throw std::domain_error("CubeLattice::containing: point outside the box");
    const int64_t n = int64_t{1} << level;
    const double side = box_.side() / static_cast<double>(n);
    std::array<int64_t, 2> idx{0, 0};
    for (int a = 0; a < box_.dim; ++a) {
        int64_t i = static_cast<int64_t>(std::floor((x[a] - b.lo[a]) / side));
        idx[a] = std::clamp<int64_t>(i, 0, n - 1);
    }
    return cube_at(level, idx);
}

std::vector<DyadicCube> CubeLattice::cubes(bool include_shifted,
                                           const std::function<bool(const DyadicCube&)>& filter) const {
    std::vector<DyadicCube> out;
    out.reserve(static_cast<size_t>(dyadic_count()) + (include_shifted ? shifted_.size() : 0));
    for (int j = j_min_; j <= j_max_; ++j) {
        const int64_t n = int64_t{1} << j;
        if (box_.dim == 1) {
            for (int64_t i = 0; i < n; ++i) {
                DyadicCube q = cube_at(j, {i, 0});
                if (!filter || filter(q)) out.push_back(q);
            }
        } else {
            for (int64_t iy = 0; iy < n; ++iy) {
                for (int64_t ix = 0; ix < n; ++ix) {
                    DyadicCube q = cube_at(j, {ix, iy});
                    if (!filter || filter(q)) out.push_back(q);
                }
            }
        }
    }
    if (include_shifted) {
        for (const DyadicCube& q : shifted_) {
            if (!filter || filter(q)) out.push_back(q);
        }
    }
    return out;
}

// ===== quadrature =====

double integrate(const GridFunction& f, const Rect* region) {
    const Grid& g = f.grid;
    const double meas = g.cell_measure();
    double sum = 0.0;
    if (region == nullptr) {
        for (double v : f.values) sum += v;
        return sum * meas;
    }
    const Grid::CellRange r = g.cells_in(*region);
    if (r.empty()) return 0.0;
    if (g.box.dim == 1) {
        for (int64_t i = r.lo[0]; i <= r.hi[0]; ++i) sum += f.values[static_cast<size_t>(i)];
    } else {
        const int64_t n = g.cells_per_side();
        for (int64_t iy = r.lo[1]; iy <= r.hi[1]; ++iy) {
            const int64_t base = iy * n;
            for (int64_t ix = r.lo[0]; ix <= r.hi[0]; ++ix) {
                sum += f.values[static_cast<size_t>(base + ix)];
            }
        }
    }
    return sum * meas;
}

double integrate(const GridFunction& f, const DyadicCube& q) {
    return integrate(f, &q.rect);
}

double region_measure(const Grid& grid, const Rect& region) {
    const Grid::CellRange r = grid.cells_in(region);
    return static_cast<double>(r.count(grid.box.dim)) * grid.cell_measure();
}

double average(const GridFunction& f, const Rect& region) {
    const double meas = region_measure(f.grid, region);
    if (meas <= 0.0) throw std::domain_error("average: region contains no grid cells");
    return integrate(f, &region) / meas;
}

double average(const GridFunction& f, const DyadicCube& q) {
    return average(f, q.rect);
}

} // namespace varlex
