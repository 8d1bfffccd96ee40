#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "homoglab/errors.hpp"

namespace homoglab {

using Vec2 = std::array<double, 2>;

/// Uniform tensor-product grid in dimension d ∈ {1,2}.
///
/// Cells are axis-aligned squares of side h = 1/cells_per_unit; the cell with
/// multi-index (i0, i1) has center origin + (i + 1/2) h componentwise.  The
/// spacing is always the reciprocal of an integer so that unit cubes are tiled
/// exactly by n^d cells, which many operations (window averages, discrete
/// shifts by one unit) rely on.
struct Grid {
    int dim = 1;
    Vec2 origin{0.0, 0.0};
    int cells_per_unit = 2;          ///< n; spacing h = 1/n
    std::array<int, 2> cells{0, 1};  ///< cells[1] == 1 when dim == 1

    double spacing() const { return 1.0 / cells_per_unit; }

    Vec2 extent() const {
        return {cells[0] * spacing(), dim == 2 ? cells[1] * spacing() : 0.0};
    }

    std::int64_t cell_count() const {
        return static_cast<std::int64_t>(cells[0]) * cells[1];
    }

    /// Row-major linear index, first axis fastest.
    std::int64_t index(int i0, int i1 = 0) const {
        return static_cast<std::int64_t>(i1) * cells[0] + i0;
    }

    double center(int axis, int i) const {
        return origin[axis] + (i + 0.5) * spacing();
    }

    Vec2 cell_center(int i0, int i1 = 0) const {
        return {center(0, i0), dim == 2 ? center(1, i1) : 0.0};
    }

    bool same_layout(const Grid& o) const {
        return dim == o.dim && origin == o.origin &&
               cells_per_unit == o.cells_per_unit && cells == o.cells;
    }

    void validate() const {
        if (dim != 1 && dim != 2) throw BadGrid("grid dim must be 1 or 2");
        if (cells_per_unit < 2)
            throw BadGrid("cells_per_unit must be at least 2");
        if (cells[0] < 1 || (dim == 2 && cells[1] < 1))
            throw BadGrid("grid must contain at least one cell per axis");
        if (dim == 1 && cells[1] != 1)
            throw BadGrid("1-d grid must have cells[1] == 1");
    }

    /// Grid covering [origin, origin + units] with n cells per unit length.
    static Grid make(int dim, Vec2 origin, std::array<int, 2> units, int n) {
        Grid g;
        g.dim = dim;
        g.origin = origin;
        g.cells_per_unit = n;
        g.cells = {units[0] * n, dim == 2 ? units[1] * n : 1};
        g.validate();
        return g;
    }

    /// Unit cell [0,1]^d at resolution n.
    static Grid unit_cell(int dim, int n) { return make(dim, {0.0, 0.0}, {1, 1}, n); }

    /// Symmetric box [-half, half]^d at resolution n (half integer).
    static Grid centered_box(int dim, int half, int n) {
        return make(dim, {-static_cast<double>(half), dim == 2 ? -static_cast<double>(half) : 0.0},
                    {2 * half, 2 * half}, n);
    }
};

/// Cell-centered scalar samples.
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.cell_count()), fill) {}

    double& at(int i0, int i1 = 0) { return values[static_cast<std::size_t>(grid.index(i0, i1))]; }
    double at(int i0, int i1 = 0) const {
        return values[static_cast<std::size_t>(grid.index(i0, i1))];
    }
};

/// Cell-centered vector samples (d components).
struct VectorField {
    Grid grid;
    std::array<std::vector<double>, 2> comp;

    VectorField() = default;
    explicit VectorField(const Grid& g, double fill = 0.0) : grid(g) {
        comp[0].assign(static_cast<std::size_t>(g.cell_count()), fill);
        if (g.dim == 2) comp[1].assign(static_cast<std::size_t>(g.cell_count()), fill);
    }
};

/// Symmetric d×d matrix value (a01 unused for d = 1).
struct SymMat {
    double a00 = 0.0, a11 = 0.0, a01 = 0.0;

    static SymMat scalar(int dim, double c) { return {c, dim == 2 ? c : 0.0, 0.0}; }

    /// Extremal eigenvalues; for d = 1 both equal a00.
    std::array<double, 2> eig_range(int dim) const {
        if (dim == 1) return {a00, a00};
        const double tr = 0.5 * (a00 + a11);
        const double disc = std::sqrt(0.25 * (a00 - a11) * (a00 - a11) + a01 * a01);
        return {tr - disc, tr + disc};
    }
};

/// Cell-centered symmetric-matrix samples, stored by component plane.
struct MatrixField {
    Grid grid;
    std::vector<double> a00, a11, a01;  ///< a11/a01 empty for d = 1

    MatrixField() = default;
    explicit MatrixField(const Grid& g) : grid(g) {
        const auto nc = static_cast<std::size_t>(g.cell_count());
        a00.assign(nc, 0.0);
        if (g.dim == 2) {
            a11.assign(nc, 0.0);
            a01.assign(nc, 0.0);
        }
    }

    SymMat at(std::int64_t idx) const {
        const auto i = static_cast<std::size_t>(idx);
        if (grid.dim == 1) return {a00[i], 0.0, 0.0};
        return {a00[i], a11[i], a01[i]};
    }

    void set(std::int64_t idx, const SymMat& m) {
        const auto i = static_cast<std::size_t>(idx);
        a00[i] = m.a00;
        if (grid.dim == 2) {
            a11[i] = m.a11;
            a01[i] = m.a01;
        }
    }

    /// One matrix entry as a scalar field (k ∈ {0,1,2} ↦ a00, a11, a01).
    ScalarField component(int k) const {
        ScalarField f(grid);
        const std::vector<double>& src = (k == 0) ? a00 : (k == 1 ? a11 : a01);
        f.values = src;
        return f;
    }
};

} // namespace homoglab
