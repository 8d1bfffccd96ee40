#pragma once

#include <utility>
#include <vector>

#include "homoglab/calculus.hpp"
#include "homoglab/grid.hpp"

namespace homoglab {

/// f = periodic_part (wrapped) + perturbation, from truncated Cesàro means
/// f_per,N = (1/#I_N) Σ_{|k| ≤ N} f(·+k) over Euclidean balls of lattice
/// translates.
struct Decomposition {
    ScalarField periodic_part;  ///< on the unit cell [0,1]^d
    ScalarField perturbation;   ///< f − wrap(periodic_part) on the sample domain
    double gns_ratio = 0.0;     ///< ‖f−f_per‖_{E^p}/‖δf‖_{L^p}; NaN when p ≥ d
    int n_used = 0;
    std::vector<std::pair<int, double>> convergence_trace;  ///< (N, L¹(Q) step)
    bool non_convergent = false;
};

/// Stops when successive means differ by < 1e-4 in L¹(Q), else flags
/// NonConvergent at N_max (the counter-example detector).
Decomposition cesaro_periodic_part(const ScalarField& f, int N_max, double p = 1.5);

struct GnsReport {
    double ep_norm_of_difference = 0.0;  ///< ‖M(|f − f_per|)‖_{L^{p*}}
    double lp_of_delta = 0.0;            ///< ‖δf‖_{L^p}
    double ratio = 0.0;
    bool zero_over_zero = false;
    int n_used = 0;
};

/// Numerical check of the discrete Gagliardo–Nirenberg–Sobolev inequality
/// ‖f − f_per‖_{E^p} ≤ C‖δf‖_{L^p} for one sample f; requires 1 ≤ p < d.
GnsReport gns_verify(const ScalarField& f, double p);

/// q = (p(α+d) − d)/α, the Hölder→Lebesgue exponent.
double holder_lebesgue_exponent(double p, double alpha, int d);

} // namespace homoglab
