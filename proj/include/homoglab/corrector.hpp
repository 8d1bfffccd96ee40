#pragma once

#include <vector>

#include "homoglab/calculus.hpp"
#include "homoglab/grid.hpp"
#include "homoglab/solver.hpp"

namespace homoglab {

/// Zero-mean periodic cell corrector w_per,q for one basis direction.
struct CorrectorComponent {
    int q = 0;
    ScalarField w;        ///< on the unit cell, zero mean
    VectorField grad_w;   ///< centered periodic differences
    SolveStats stats;
};

/// Solves −div(a_per(∇w + e_q)) = 0 on the periodic unit cell.
CorrectorComponent periodic_corrector(const MatrixField& a_per, int q);

struct HomogenizedTensor {
    SymMat a_star;                  ///< symmetrized effective tensor
    double asymmetry_defect = 0.0;  ///< |a*_{01} − a*_{10}| before symmetrizing
    int resolution = 0;
};

/// Effective tensor from the cell correctors, by midpoint quadrature of the
/// corrected fluxes (face-flux averages for diagonal coefficients, which keeps
/// 1-d and laminate cases exact up to the 1/a quadrature error).
HomogenizedTensor homogenized_tensor(const MatrixField& a_per,
                                     const std::vector<CorrectorComponent>& correctors);

/// Defect corrector w̃_q on a truncated box with diagnostics.
struct DefectCorrector {
    ScalarField w_tilde;       ///< on Q_R, anchored to 0 at the origin cell
    VectorField grad_w_tilde;  ///< centered differences
    NormReport ap_report;      ///< norms of |∇w̃| restricted to Q_{R_inner}
    DecayFit sublinearity;     ///< |w̃|/(1+|x|) vs |x| on dyadic shells
    SolveStats stats;
    double truncation_change = 0.0;  ///< relative L²(Q_{R_inner}) change R vs R/2
};

/// Direct solve of −div(a∇w̃) = div(ã(∇w_per,q + e_q)) with DirichletZero on
/// ∂Q_R; a = a_per (wrapped periodically) + ã is given sampled on Q_R.
/// Throws TruncationUnstable if the R vs R/2 solves differ by more than 5% on
/// the inner window.
DefectCorrector defect_corrector_direct(const MatrixField& a_full,
                                        const MatrixField& a_per,
                                        const CorrectorComponent& w_per, int q,
                                        double R_inner, double p);

/// Fixed-point iteration u_{n+1} ← solve(−div(a_per∇u_{n+1}) = div(rhs) +
/// (A_per − A_full)u_n); the limit solves the full-coefficient problem.
struct FixedPointResult {
    ScalarField u;
    std::vector<double> increments;  ///< ‖∇(u_{n+1} − u_n)‖_{L²}
    std::vector<double> ratios;      ///< successive increment ratios
    long iterations = 0;
};

FixedPointResult defect_corrector_fixed_point(const MatrixField& a_per_box,
                                              const MatrixField& a_tilde_box,
                                              const VectorField& rhs, double tol);

/// Fit of ln(max_{|x| in dyadic shell r} |w|/(1+|x|)) against ln r; requires
/// d/2 < p < d and samples beyond radius 4.
DecayFit sublinearity_profile(const ScalarField& w, double p);

} // namespace homoglab
