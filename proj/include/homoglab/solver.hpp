#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "homoglab/grid.hpp"

namespace homoglab {

enum class BoundaryCondition { PeriodicZeroMean, DirichletZero };
enum class InterfaceAveraging { Harmonic, Arithmetic };

struct SolveStats {
    long iterations = 0;
    double rel_residual = 0.0;
    bool projected = false;  ///< zero-mean kernel projection applied
};

/// Finite-volume discretization of −div(a∇·) on a structured grid.
///
/// Diagonal coefficient parts use per-face transmissibilities (harmonic or
/// arithmetic interface averages); a cell-centered mixed-difference term covers
/// the off-diagonal entries in d = 2.  An optional cell mask pins cells to
/// u = 0, which realizes staircase Dirichlet geometry (e.g. an annulus) inside
/// a rectangular grid.
struct DiscreteOperator {
    Grid grid;
    BoundaryCondition bc = BoundaryCondition::DirichletZero;
    /// tface[k]: faces normal to axis k; face index i along the axis separates
    /// cell i-1 from cell i (0 and cells[k] are the domain boundary faces).
    std::array<std::vector<double>, 2> tface;
    std::vector<double> offdiag;     ///< cell-centered a01 (empty if zero)
    std::vector<std::uint8_t> mask;  ///< 1 = active cell; empty = all active

    bool active(int i0, int i1) const {
        return mask.empty() || mask[static_cast<std::size_t>(grid.index(i0, i1))] != 0;
    }
    std::int64_t unknowns() const;

    /// out = A u (out is zeroed on masked cells).
    void apply(const std::vector<double>& u, std::vector<double>& out) const;
    /// Diagonal of the transmissibility part (Jacobi preconditioner).
    std::vector<double> diagonal() const;
};

DiscreteOperator assemble(const MatrixField& a, BoundaryCondition bc,
                          InterfaceAveraging averaging = InterfaceAveraging::Harmonic,
                          const std::vector<std::uint8_t>* mask = nullptr);

struct SolveOptions {
    double tol = 1e-10;   ///< relative residual target
    long max_iter = 0;    ///< 0 = default cap 50·sqrt(#unknowns) + 1e4
    Vec2 q_drift{0.0, 0.0};  ///< solves −div(a(∇u + q)) = rhs when nonzero
};

/// Preconditioned CG (Jacobi).  Either source (cell values of f) or div_source
/// (g with the equation −div(a∇u) = f + div g) may be null.
std::pair<ScalarField, SolveStats> solve(const DiscreteOperator& op,
                                         const ScalarField* source,
                                         const VectorField* div_source,
                                         const SolveOptions& opts = {});

} // namespace homoglab
