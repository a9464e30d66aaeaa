#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace varlex {

// Points live in R^2; 1-d data uses the first coordinate only.
using Point = std::array<double, 2>;

// Axis-parallel box [lo, hi] in dimension 1 or 2.
struct Rect {
    int dim = 1;
    Point lo{0.0, 0.0};
    Point hi{0.0, 0.0};

    double side(int axis) const { return hi[axis] - lo[axis]; }
    double measure() const;
    Point center() const;
    bool contains(const Point& x) const;
    bool empty() const;
    Rect intersect(const Rect& other) const;
    // Concentric dilation gamma*R (gamma > 0).
    Rect scaled(double gamma) const;
    bool contains_rect(const Rect& inner) const;

    static Rect cube(int dim, const Point& center, double half_side);
};

// Bounded computational domain: a cube of side 2*half_width.
struct Box {
    int dim = 1;
    Point center{0.0, 0.0};
    double half_width = 1.0;

    Rect rect() const { return Rect::cube(dim, center, half_width); }
    double side() const { return 2.0 * half_width; }
};

// Uniform grid on a box with 2^depth cells per side; data lives at cell
// midpoints, all quadrature is the midpoint rule on these cells.
struct Grid {
    Box box;
    int depth = 0;

    int64_t cells_per_side() const { return int64_t{1} << depth; }
    int64_t cell_count() const;
    double cell_size() const { return box.side() / static_cast<double>(cells_per_side()); }
    double cell_measure() const;

    int64_t flat_index(int64_t ix, int64_t iy) const { return iy * cells_per_side() + ix; }
    Point cell_midpoint(int64_t flat) const;
    // Index range (per axis, inclusive) of cells whose midpoints lie in `region`.
    struct CellRange {
        int64_t lo[2] = {0, 0};
        int64_t hi[2] = {-1, -1};
        bool empty() const { return hi[0] < lo[0] || hi[1] < lo[1]; }
        int64_t count(int dim) const;
    };
    CellRange cells_in(const Rect& region) const;

    // Calls fn(flat_index, midpoint) for every cell with midpoint in region.
    void for_cells_in(const Rect& region, const std::function<void(int64_t, const Point&)>& fn) const;

    bool operator==(const Grid& other) const;
};

// Real-valued function sampled at grid midpoints.
struct GridFunction {
    Grid grid;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(const Grid& g, double fill = 0.0);
    GridFunction(const Grid& g, const std::function<double(const Point&)>& fn);

    double& operator[](int64_t i) { return values[i]; }
    double operator[](int64_t i) const { return values[i]; }
    int64_t size() const { return static_cast<int64_t>(values.size()); }

    double max_abs() const;
    bool all_finite() const;
};

// A cube from the truncated dyadic lattice (or a randomly shifted copy).
struct DyadicCube {
    int level = 0;
    std::array<int64_t, 2> index{0, 0};
    Rect rect;
    bool shifted = false;

    double side_length() const { return rect.side(0); }
    double measure() const { return rect.measure(); }
    Rect dilated(double gamma) const { return rect.scaled(gamma); }
};

// Truncated dyadic lattice: levels j_min..j_max, level j partitions the box
// into 2^(j*dim) cubes of side 2^-j * box side. Optional randomly shifted
// cubes (same side lengths, uniform position inside the box) supplement the
// family when estimating suprema over all cubes.
class CubeLattice {
public:
    CubeLattice(const Box& box, int j_min, int j_max,
                int shifted_per_level = 0, uint64_t shift_seed = 0);

    const Box& box() const { return box_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }

    int64_t cubes_per_level(int j) const;
    int64_t dyadic_count() const;

    DyadicCube cube_at(int level, std::array<int64_t, 2> index) const;
    // Position of a dyadic cube in the cubes(false) enumeration.
    int64_t position(const DyadicCube& q) const;
    std::optional<DyadicCube> parent(const DyadicCube& q) const;
    std::vector<DyadicCube> children(const DyadicCube& q) const;
    // Unique dyadic cube at `level` containing x (x inside the box).
    DyadicCube containing(int level, const Point& x) const;

    // Deterministic enumeration: level-major, then lexicographic index;
    // shifted cubes (if requested) follow the dyadic family, in generation
    // order. An optional filter keeps only matching cubes.
    std::vector<DyadicCube> cubes(bool include_shifted = false,
                                  const std::function<bool(const DyadicCube&)>& filter = {}) const;

    const std::vector<DyadicCube>& shifted_cubes() const { return shifted_; }

private:
    Box box_;
    int j_min_;
    int j_max_;
    std::vector<DyadicCube> shifted_;
};

// Midpoint-rule integral of f over region∩box (whole box when region is null).
// Exact for integrands that are constant on grid cells.
double integrate(const GridFunction& f, const Rect* region = nullptr);
double integrate(const GridFunction& f, const DyadicCube& q);

// Quadrature measure of region∩box: (number of contained midpoints) * cell measure.
double region_measure(const Grid& grid, const Rect& region);

// integrate(f, region) / region_measure(region); throws std::domain_error if
// the region contains no grid cells.
double average(const GridFunction& f, const Rect& region);
double average(const GridFunction& f, const DyadicCube& q);

} // namespace varlex
