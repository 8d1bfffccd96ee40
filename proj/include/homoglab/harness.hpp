#pragma once

#include <functional>
#include <vector>

#include "homoglab/coefficient.hpp"
#include "homoglab/corrector.hpp"
#include "homoglab/grid.hpp"
#include "homoglab/solver.hpp"

namespace homoglab {

/// Exact-quadrature solution of the 1-d two-point problem
///   −(a u′)′ = f on (x0, x1),  u(x0) = u(x1) = 0,
/// via u(x) = −∫_{x0}^x F/a + C ∫_{x0}^x 1/a with F(x) = ∫_{x0}^x f and
/// C = (∫ 1/a)⁻¹ ∫ F/a.  Sampled on a uniform fine grid of nodes.
struct Quad1DSolution {
    double x0 = 0.0, x1 = 1.0;
    std::vector<double> nodes;  ///< 2·panels+1 uniform points incl. endpoints
    std::vector<double> u;

    double delta() const { return nodes.size() > 1 ? nodes[1] - nodes[0] : 0.0; }
    double eval(double x) const;  ///< linear interpolation
};

Quad1DSolution quad_solve_1d(const std::function<double(double)>& a,
                             const std::function<double(double)>& f, double x0,
                             double x1, int panels);

/// Composite-Simpson L² norm of node samples (odd count, uniform spacing).
double simpson_l2(const std::vector<double>& vals, double delta);

/// 1-d ε-problem with the exact quadrature solver; panel count is chosen so
/// the oscillation is resolved (>= 32 samples per ε-period for literal ε).
Quad1DSolution solve_eps_interval(const CoefficientSpec& spec, const EpsDescriptor& eps,
                                  double x0, double x1,
                                  const std::function<double(double)>& f,
                                  int min_panels = 0);

/// d ∈ {1,2} finite-volume ε-problem on a grid with DirichletZero (optional
/// cell mask for non-rectangular domains).  Enforces the 8-cells-per-period
/// resolution floor for periodic coefficients with literal ε.
std::pair<ScalarField, SolveStats> solve_eps_fv(const CoefficientSpec& spec,
                                                const EpsDescriptor& eps, const Grid& grid,
                                                const ScalarField& f,
                                                const std::vector<std::uint8_t>* mask = nullptr);

/// u^{ε,1} = u* + ε Σ_i ∂_i u* · w_per,e_i(x/ε) with periodic bilinear
/// interpolation of the unit-cell correctors.
ScalarField first_order_approx(const ScalarField& u_star,
                               const std::vector<CorrectorComponent>& correctors,
                               double eps);

/// Central box at distance ≥ diam(Ω)/4 from the boundary of f's grid box.
ScalarField interior_window(const ScalarField& f);

/// Reference convergence-rate exponents.  reference_mu throws at p = d/2
/// (excluded by the rate theorem); reference_nu throws at q = d.
double reference_mu(double p, int d);
double reference_nu(double q, int d);

struct SweepReport {
    std::vector<double> eps_list;       ///< strictly decreasing
    std::vector<double> err_l2;         ///< ‖u^ε − u*‖_{L²(Ω)}
    std::vector<double> err_grad_r;     ///< ‖∇R^ε‖_{L²(Ω₁)}
    std::vector<double> err_grad_lr;    ///< ‖∇R^ε‖_{L^r(Ω₁)}
    std::vector<double> err_grad_plain; ///< ‖∇(u^ε − u*)‖_{L²(Ω₁)}
    double slope_l2 = 0.0, r2_l2 = 0.0;
    double slope_grad_r = 0.0, r2_grad_r = 0.0;
    double mu_reference = 0.0;  ///< NaN when no branch of the theorem applies
    double nu_reference = 0.0;
    double p = 0.0, r = 2.0, alpha = 0.0;
};

/// Fits log-log slopes of supplied per-ε errors and attaches the analytic
/// reference exponents μ(p,d) and ν(q,d) with q = (p(α+d)−d)/α.
SweepReport remainder_rates(const std::vector<double>& eps_list,
                            const std::vector<double>& err_l2,
                            const std::vector<double>& err_grad_r,
                            const std::vector<double>& err_grad_lr, double r, double p,
                            double alpha, int d);

/// Full 1-d periodic-coefficient sweep: exact solver, analytic homogenized
/// limit, first-order corrector remainder; Ω = (0,1), Ω₁ = (1/4, 3/4).
SweepReport rate_sweep_1d(const CoefficientSpec& a_per_spec,
                          const std::function<double(double)>& f,
                          const std::vector<double>& eps_list, double p, double alpha,
                          int jobs = 1);

struct SubsequenceReport {
    double branch_param = 0.0;  ///< phase y (1-d) or branch index (2-d)
    std::vector<int> n_list;
    std::vector<double> distances;           ///< ‖u^{ε_n} − u^{*,branch}‖_{L²}
    double limit_norm = 0.0;                 ///< ‖u^{*,branch}‖_{L²}
    double cross_branch_distance = 0.0;      ///< distance between the two limits
    std::vector<double> coef_deviation;      ///< sup |a(·/ε_n) − limit| (2-d)
    std::vector<double> perturbation_bound;  ///< C_P/λ · deviation · ‖∇u*‖ (2-d)
};

/// 1-d counter-example: a(x) = 2 + sin(ln(1+|x|)) on (1,2) with the
/// subsequence ε_n = exp(−2nπ−y); limit coefficient 2 + sin(y + ln x).
SubsequenceReport counterexample_1d(const std::vector<int>& n_list,
                                    const std::function<double(double)>& f, double y);

struct Counterexample2DResult {
    SubsequenceReport branch1;  ///< ε_n = exp(−exp(2nπ)), limit a ≡ 2
    SubsequenceReport branch2;  ///< ε_n = exp(−exp((4n+1)π/2)), limit a ≡ 3
    double scaling_identity_error = 0.0;  ///< ‖u^{*,2} − (2/3)u^{*,1}‖/‖u^{*,2}‖
};

/// 2-d counter-example on the masked annulus 1 < |x| < 2 with the iterated-log
/// coefficient; requires >= 32 cells per unit.
Counterexample2DResult counterexample_2d(const std::vector<int>& n_list, double f_const,
                                         int cells_per_unit);

} // namespace homoglab
