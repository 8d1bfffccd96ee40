#pragma once

#include <functional>
#include <vector>

#include "homoglab/grid.hpp"

namespace homoglab {

/// Discrete gradient δg = (g(· + e_i) − g)_i.  Component i lives on the grid
/// shrunk by one unit (n cells) in direction i.
struct ShiftedDifferenceField {
    Grid source_grid;
    std::array<ScalarField, 2> comp;

    int dim() const { return source_grid.dim; }
};

ShiftedDifferenceField discrete_gradient(const ScalarField& f);

/// Local average M(|f|)(z) = ∫_{Q+z} |f| at every cell center z whose window
/// fits, via compensated summed-area accumulation (cost O(#cells)).
ScalarField local_average(const ScalarField& f);

/// Norm bundle for the discrete A^p / E^p calculus.  ep_norm/ap_norm (and
/// p_star) are present only for 1 ≤ p < d and are NaN otherwise.
struct NormReport {
    double p = 0.0;
    double p_star = 0.0;
    double lp_of_delta = 0.0;  ///< ‖δf‖_{L^p} over the shrunken overlap domain
    double ep_norm = 0.0;      ///< ‖M(|f|)‖_{L^{p*}} over fitting windows
    double ap_norm = 0.0;      ///< ep_norm + lp_of_delta
    double l2_unif = 0.0;      ///< sup over unit-cube windows of local L²
    bool sobolev_part_present = false;
    std::array<int, 2> delta_domain_cells{0, 0};   ///< metadata: |δf| domain
    std::array<int, 2> window_domain_cells{0, 0};  ///< metadata: M domain
};

NormReport norms(const ScalarField& f, double p);

/// Least-squares fit of ln(value) against ln(radius).
struct DecayFit {
    std::vector<double> radii;
    std::vector<double> averaged_values;
    double fitted_exponent = 0.0;
    double r2 = 0.0;
    bool degenerate = false;  ///< some value vanished; no log-log fit possible
};

/// Ball averages (1/|B_R|)∫_{B_R}|f| over the given radii (centered at 0).
DecayFit ball_average_decay(const ScalarField& f, const std::vector<double>& radii);

/// ∫ |f(x/ε)| φ(x) dx for each ε, by midpoint quadrature on the rescaled grid.
/// φ must vanish outside |x| ≤ support_radius.
std::vector<double> weak_star_vanishing(const ScalarField& f,
                                        const std::vector<double>& eps_list,
                                        const std::function<double(Vec2)>& phi,
                                        double support_radius);

/// Constructive discrete de Rham: recover u with δu = T from a compatible
/// shifted-difference field, anchored to the given data on the grid's first
/// unit cell (zeros when base is null).
ScalarField potential_from_discrete_gradient(const ShiftedDifferenceField& T,
                                             const ScalarField* base = nullptr);

/// Periodic mean over the index frame I_N = {k : Q+k ⊂ Q_2N \ Q_N} and the
/// Poincaré–Wirtinger ratio ‖f − f_per,N‖_{L^p(A_N)} / (N‖δf‖_{L^p(Q_6N\Q_N)}).
struct AnnulusMeanResult {
    ScalarField periodic_part;  ///< f_per,N on the unit cell
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
    bool disconnected_warning = false;  ///< set in d = 1 (annulus disconnected)
};

AnnulusMeanResult annulus_periodic_mean(const ScalarField& f, int N, double p);

/// Cell-centered gradient by centered differences (one-sided at the edges).
VectorField centered_gradient(const ScalarField& f);

/// Cells with |center|_∞ < half, as a standalone field on its own sub-grid.
ScalarField crop_centered(const ScalarField& f, double half);

/// Midpoint-rule L^p norm over the field's whole domain.
double lp_norm_field(const ScalarField& f, double p);

/// ‖∇f‖_{L²} via interior face differences (the discrete energy seminorm).
double face_grad_l2(const ScalarField& f);

/// Shared helper: least-squares line through (x_i, y_i).
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace homoglab
