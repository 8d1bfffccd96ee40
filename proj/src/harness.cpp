#include "homoglab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <thread>

#include "homoglab/extraction.hpp"

namespace homoglab {

namespace {

/// Deterministic static partition of [0, count) across at most `jobs` threads;
/// results are written by index, so the output is independent of scheduling.
template <typename Fn>
void parallel_for_indices(std::size_t count, int jobs, Fn&& fn) {
    const int workers =
        std::max(1, std::min<int>(jobs, static_cast<int>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = static_cast<std::size_t>(w); i < count;
                     i += static_cast<std::size_t>(workers))
                    fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

constexpr double kTwoPiH = 6.283185307179586476925286766559;

/// Cumulative integral on 2M+1 uniform samples: even nodes by composite
/// Simpson pairs, odd nodes by the O(δ⁴) half-interval Newton–Cotes rule.
std::vector<double> cumulative_integral(const std::vector<double>& g, double delta) {
    const std::size_t m = g.size();
    std::vector<double> I(m, 0.0);
    for (std::size_t k = 0; k + 2 < m; k += 2) {
        I[k + 1] = I[k] + delta / 12.0 * (5.0 * g[k] + 8.0 * g[k + 1] - g[k + 2]);
        I[k + 2] = I[k] + delta / 3.0 * (g[k] + 4.0 * g[k + 1] + g[k + 2]);
    }
    return I;
}

double simpson_integral(const std::vector<double>& g, double delta) {
    if (g.size() < 3 || g.size() % 2 == 0)
        throw InsufficientPoints("Simpson quadrature needs an odd sample count >= 3");
    double s = 0.0;
    for (std::size_t k = 0; k + 2 < g.size(); k += 2)
        s += delta / 3.0 * (g[k] + 4.0 * g[k + 1] + g[k + 2]);
    return s;
}

/// Linear interpolation in a uniform-node table over [0, 1] (periodic data).
double table_interp_unit(const std::vector<double>& vals, double y) {
    const std::size_t m = vals.size();
    double t = y * static_cast<double>(m - 1);
    t = std::clamp(t, 0.0, static_cast<double>(m - 1));
    const auto k = std::min(static_cast<std::size_t>(t), m - 2);
    const double frac = t - static_cast<double>(k);
    return vals[k] + frac * (vals[k + 1] - vals[k]);
}

double wrap_unit(double y) {
    double r = y - std::floor(y);
    if (r >= 1.0) r = 0.0;
    return r;
}

/// Periodic bilinear interpolation of a unit-cell field at unit coordinates y.
double periodic_interp(const ScalarField& w, Vec2 y) {
    const Grid& g = w.grid;
    const int n0 = g.cells[0];
    auto locate = [](double coord, int n, int& k, double& frac) {
        double t = coord * n - 0.5;
        t -= std::floor(t / n) * n;
        k = static_cast<int>(std::floor(t));
        frac = t - k;
        if (k >= n) { k -= n; }
    };
    int k0 = 0;
    double f0 = 0.0;
    locate(wrap_unit(y[0]), n0, k0, f0);
    const int k0n = (k0 + 1) % n0;
    if (g.dim == 1)
        return (1.0 - f0) * w.at(k0) + f0 * w.at(k0n);
    const int n1 = g.cells[1];
    int k1 = 0;
    double f1 = 0.0;
    locate(wrap_unit(y[1]), n1, k1, f1);
    const int k1n = (k1 + 1) % n1;
    return (1.0 - f0) * (1.0 - f1) * w.at(k0, k1) + f0 * (1.0 - f1) * w.at(k0n, k1) +
           (1.0 - f0) * f1 * w.at(k0, k1n) + f0 * f1 * w.at(k0n, k1n);
}

/// L² over active cells (mask empty = all), midpoint rule.
double masked_l2(const ScalarField& f, const std::vector<std::uint8_t>& mask) {
    const double hd = std::pow(f.grid.spacing(), f.grid.dim);
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        if (!mask.empty() && mask[i] == 0) continue;
        s += f.values[i] * f.values[i];
    }
    return std::sqrt(hd * s);
}

/// Discrete H¹₀ seminorm with zero extension outside active cells.
double masked_face_grad_l2(const ScalarField& u, const std::vector<std::uint8_t>& mask) {
    const Grid& g = u.grid;
    const double h = g.spacing();
    const double hd = std::pow(h, g.dim);
    auto val = [&](int i0, int i1) -> double {
        if (i0 < 0 || i0 >= g.cells[0] || i1 < 0 || i1 >= g.cells[1]) return 0.0;
        const auto idx = static_cast<std::size_t>(g.index(i0, i1));
        if (!mask.empty() && mask[idx] == 0) return 0.0;
        return u.values[idx];
    };
    auto active = [&](int i0, int i1) -> bool {
        if (i0 < 0 || i0 >= g.cells[0] || i1 < 0 || i1 >= g.cells[1]) return false;
        const auto idx = static_cast<std::size_t>(g.index(i0, i1));
        return mask.empty() || mask[idx] != 0;
    };
    double s = 0.0;
    const int n1 = g.dim == 2 ? g.cells[1] : 1;
    for (int i1 = 0; i1 < n1; ++i1) {
        for (int i0 = 0; i0 <= g.cells[0]; ++i0) {
            if (!active(i0 - 1, i1) && !active(i0, i1)) continue;
            const double d = (val(i0, i1) - val(i0 - 1, i1)) / h;
            s += d * d;
        }
    }
    if (g.dim == 2) {
        for (int i1 = 0; i1 <= g.cells[1]; ++i1) {
            for (int i0 = 0; i0 < g.cells[0]; ++i0) {
                if (!active(i0, i1 - 1) && !active(i0, i1)) continue;
                const double d = (val(i0, i1) - val(i0, i1 - 1)) / h;
                s += d * d;
            }
        }
    }
    return std::sqrt(hd * s);
}

/// ‖g′‖_{L^r(lo,hi)} of 1-d node samples by centered differences + midpoint.
double windowed_grad_lr(const std::vector<double>& nodes, const std::vector<double>& vals,
                        double lo, double hi, double r) {
    const double delta = nodes[1] - nodes[0];
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
        if (nodes[i] < lo || nodes[i] > hi) continue;
        const double d = (vals[i + 1] - vals[i - 1]) / (2.0 * delta);
        s += std::pow(std::abs(d), r) * delta;
    }
    return std::pow(s, 1.0 / r);
}

struct Periodic1DCell {
    double a_star = 0.0;
    std::vector<double> a_per_table;  ///< 1/a_per cumulative → w table below
    std::vector<double> w_table;      ///< zero-mean corrector on [0,1] nodes
};

Periodic1DCell periodic_cell_1d(const CoefficientSpec& a_per_spec) {
    constexpr int kPanels = 8192;
    const int m = 2 * kPanels + 1;
    const double delta = 1.0 / (m - 1);
    std::vector<double> inva(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double a = a_per_spec.eval({i * delta, 0.0}, 1).a00;
        if (!(a > 0.0) || !std::isfinite(a))
            throw EllipticityViolation("1-d coefficient must be positive and finite");
        inva[static_cast<std::size_t>(i)] = 1.0 / a;
    }
    Periodic1DCell cell;
    std::vector<double> A = cumulative_integral(inva, delta);
    cell.a_star = 1.0 / A.back();
    cell.w_table.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        cell.w_table[static_cast<std::size_t>(i)] =
            cell.a_star * A[static_cast<std::size_t>(i)] - i * delta;
    const double mean = simpson_integral(cell.w_table, delta);
    for (double& v : cell.w_table) v -= mean;
    cell.a_per_table = std::move(A);
    return cell;
}

} // namespace

double Quad1DSolution::eval(double x) const {
    if (nodes.size() < 2) throw InsufficientPoints("empty quadrature solution");
    const double d = delta();
    double t = (x - x0) / d;
    t = std::clamp(t, 0.0, static_cast<double>(nodes.size() - 1));
    const auto k = std::min(static_cast<std::size_t>(t), nodes.size() - 2);
    const double frac = t - static_cast<double>(k);
    return u[k] + frac * (u[k + 1] - u[k]);
}

Quad1DSolution quad_solve_1d(const std::function<double(double)>& a,
                             const std::function<double(double)>& f, double x0,
                             double x1, int panels) {
    if (!(x1 > x0)) throw BadGrid("quad_solve_1d: x1 must exceed x0");
    if (panels < 2) throw InsufficientPoints("quad_solve_1d needs at least 2 panels");
    const int m = 2 * panels + 1;
    const double delta = (x1 - x0) / (m - 1);

    Quad1DSolution sol;
    sol.x0 = x0;
    sol.x1 = x1;
    sol.nodes.resize(static_cast<std::size_t>(m));
    std::vector<double> fs(static_cast<std::size_t>(m)), inva(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double x = x0 + i * delta;
        sol.nodes[static_cast<std::size_t>(i)] = x;
        fs[static_cast<std::size_t>(i)] = f(x);
        const double av = a(x);
        if (!(av > 0.0) || !std::isfinite(av))
            throw EllipticityViolation("quad_solve_1d: coefficient must be positive");
        inva[static_cast<std::size_t>(i)] = 1.0 / av;
    }
    const std::vector<double> F = cumulative_integral(fs, delta);
    std::vector<double> Fa(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        Fa[static_cast<std::size_t>(i)] =
            F[static_cast<std::size_t>(i)] * inva[static_cast<std::size_t>(i)];
    const std::vector<double> A = cumulative_integral(inva, delta);
    const std::vector<double> B = cumulative_integral(Fa, delta);
    const double C = B.back() / A.back();

    sol.u.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        sol.u[static_cast<std::size_t>(i)] =
            -B[static_cast<std::size_t>(i)] + C * A[static_cast<std::size_t>(i)];
    sol.u.front() = 0.0;
    sol.u.back() = 0.0;
    return sol;
}

double simpson_l2(const std::vector<double>& vals, double delta) {
    std::vector<double> sq(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) sq[i] = vals[i] * vals[i];
    return std::sqrt(std::max(0.0, simpson_integral(sq, delta)));
}

Quad1DSolution solve_eps_interval(const CoefficientSpec& spec, const EpsDescriptor& eps,
                                  double x0, double x1,
                                  const std::function<double(double)>& f,
                                  int min_panels) {
    constexpr int kMaxPanels = 1 << 21;
    int panels = 4096;
    if (eps.form == EpsDescriptor::Form::Literal) {
        const double needed = 16.0 * (x1 - x0) / eps.eps;
        if (needed > static_cast<double>(kMaxPanels))
            throw ResolutionInsufficient(
                "literal eps too small to resolve 32 samples per period");
        panels = std::max(panels, static_cast<int>(std::ceil(needed)));
    }
    panels = std::min(std::max(panels, min_panels), kMaxPanels);
    auto afun = [&](double x) { return spec.eval_rescaled({x, 0.0}, 1, eps).a00; };
    return quad_solve_1d(afun, f, x0, x1, panels);
}

std::pair<ScalarField, SolveStats> solve_eps_fv(const CoefficientSpec& spec,
                                                const EpsDescriptor& eps, const Grid& grid,
                                                const ScalarField& f,
                                                const std::vector<std::uint8_t>* mask) {
    grid.validate();
    const bool periodic_kind =
        std::holds_alternative<PeriodicTrigCoef>(spec.kind) ||
        std::holds_alternative<PerturbedPeriodicCoef>(spec.kind);
    if (periodic_kind && eps.form == EpsDescriptor::Form::Literal &&
        grid.cells_per_unit * eps.eps < 8.0 - 1e-12)
        throw ResolutionInsufficient("need at least 8 cells per eps-period");
    const MatrixField a = sample_rescaled(spec, grid, eps);
    const DiscreteOperator op = assemble(a, BoundaryCondition::DirichletZero,
                                         InterfaceAveraging::Harmonic, mask);
    return solve(op, &f, nullptr);
}

ScalarField first_order_approx(const ScalarField& u_star,
                               const std::vector<CorrectorComponent>& correctors,
                               double eps) {
    const Grid& g = u_star.grid;
    if (static_cast<int>(correctors.size()) != g.dim)
        throw ResolutionMismatch("need one corrector per space dimension");
    for (const auto& c : correctors)
        if (c.w.grid.dim != g.dim)
            throw ResolutionMismatch("corrector dimension mismatch");
    if (!(eps > 0.0)) throw BadGrid("first_order_approx needs literal eps > 0");

    const VectorField grad = centered_gradient(u_star);
    ScalarField out(g);
    const int n1 = g.dim == 2 ? g.cells[1] : 1;
    for (int i1 = 0; i1 < n1; ++i1) {
        for (int i0 = 0; i0 < g.cells[0]; ++i0) {
            const auto idx = static_cast<std::size_t>(g.index(i0, i1));
            const Vec2 x = g.cell_center(i0, i1);
            const Vec2 y{x[0] / eps, g.dim == 2 ? x[1] / eps : 0.0};
            double corr = grad.comp[0][idx] * periodic_interp(correctors[0].w, y);
            if (g.dim == 2)
                corr += grad.comp[1][idx] * periodic_interp(correctors[1].w, y);
            out.values[idx] = u_star.values[idx] + eps * corr;
        }
    }
    return out;
}

ScalarField interior_window(const ScalarField& f) {
    const Grid& g = f.grid;
    const double h = g.spacing();
    const double L0 = g.cells[0] * h;
    const double L1 = g.dim == 2 ? g.cells[1] * h : 0.0;
    const double diam = std::sqrt(L0 * L0 + L1 * L1);
    const double margin = 0.25 * diam;

    auto range = [&](int axis, int ncells, int& lo, int& hi) {
        lo = ncells;
        hi = -1;
        for (int i = 0; i < ncells; ++i) {
            const double c = g.center(axis, i) - g.origin[axis];
            const double len = axis == 0 ? L0 : L1;
            if (c >= margin && len - c >= margin) {
                lo = std::min(lo, i);
                hi = std::max(hi, i);
            }
        }
    };
    int lo0 = 0, hi0 = -1, lo1 = 0, hi1 = 0;
    range(0, g.cells[0], lo0, hi0);
    if (g.dim == 2) range(1, g.cells[1], lo1, hi1);
    if (hi0 < lo0 || (g.dim == 2 && hi1 < lo1))
        throw DomainTooSmall("interior window is empty at this resolution");

    Grid sub = g;
    sub.origin[0] = g.origin[0] + lo0 * h;
    sub.cells[0] = hi0 - lo0 + 1;
    if (g.dim == 2) {
        sub.origin[1] = g.origin[1] + lo1 * h;
        sub.cells[1] = hi1 - lo1 + 1;
    }
    ScalarField out(sub);
    const int n1 = g.dim == 2 ? sub.cells[1] : 1;
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i0 = 0; i0 < sub.cells[0]; ++i0)
            out.at(i0, i1) = f.at(lo0 + i0, g.dim == 2 ? lo1 + i1 : 0);
    return out;
}

double reference_mu(double p, int d) {
    if (d != 1 && d != 2) throw BadGrid("reference_mu: d must be 1 or 2");
    if (!(p > 0.0)) throw ExponentOutOfRange("reference_mu requires p > 0");
    const double half_d = 0.5 * d;
    if (p == half_d)
        throw ExponentOutOfRange("p = d/2 is excluded from the rate theorem");
    if (p < half_d) return 1.0;
    if (p < static_cast<double>(d)) return (d - p) / p;  // = d/p*
    throw ExponentOutOfRange("reference_mu requires p < d");
}

double reference_nu(double q, int d) {
    if (d != 1 && d != 2) throw BadGrid("reference_nu: d must be 1 or 2");
    if (!(q > 0.0)) throw ExponentOutOfRange("reference_nu requires q > 0");
    if (q == static_cast<double>(d))
        throw ExponentOutOfRange("q = d is excluded from the rate theorem");
    return q > d ? d / q : 1.0;
}

SweepReport remainder_rates(const std::vector<double>& eps_list,
                            const std::vector<double>& err_l2,
                            const std::vector<double>& err_grad_r,
                            const std::vector<double>& err_grad_lr, double r, double p,
                            double alpha, int d) {
    const std::size_t m = eps_list.size();
    if (m < 4) throw InsufficientPoints("remainder_rates needs >= 4 eps values");
    if (err_l2.size() != m || err_grad_r.size() != m ||
        (!err_grad_lr.empty() && err_grad_lr.size() != m))
        throw InsufficientPoints("remainder_rates: mismatched series lengths");
    for (std::size_t i = 0; i < m; ++i) {
        if (!(eps_list[i] > 0.0)) throw BadGrid("eps values must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw BadGrid("eps_list must be strictly decreasing");
        if (!(err_l2[i] > 0.0) || !(err_grad_r[i] > 0.0))
            throw NonFinite("errors must be positive for a log-log fit");
    }

    SweepReport rep;
    rep.eps_list = eps_list;
    rep.err_l2 = err_l2;
    rep.err_grad_r = err_grad_r;
    rep.err_grad_lr = err_grad_lr;
    rep.p = p;
    rep.r = r;
    rep.alpha = alpha;

    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) lx[i] = std::log(eps_list[i]);
    for (std::size_t i = 0; i < m; ++i) ly[i] = std::log(err_l2[i]);
    LineFit f1 = fit_line(lx, ly);
    rep.slope_l2 = f1.slope;
    rep.r2_l2 = f1.r2;
    for (std::size_t i = 0; i < m; ++i) ly[i] = std::log(err_grad_r[i]);
    LineFit f2 = fit_line(lx, ly);
    rep.slope_grad_r = f2.slope;
    rep.r2_grad_r = f2.r2;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        rep.mu_reference = reference_mu(p, d);
    } catch (const Error&) {
        rep.mu_reference = nan;
    }
    try {
        rep.nu_reference = reference_nu(holder_lebesgue_exponent(p, alpha, d), d);
    } catch (const Error&) {
        rep.nu_reference = nan;
    }
    return rep;
}

SweepReport rate_sweep_1d(const CoefficientSpec& a_per_spec,
                          const std::function<double(double)>& f,
                          const std::vector<double>& eps_list, double p, double alpha,
                          int jobs) {
    if (eps_list.size() < 4)
        throw InsufficientPoints("rate_sweep_1d needs >= 4 eps values");
    const Periodic1DCell cell = periodic_cell_1d(a_per_spec);

    const std::size_t ne = eps_list.size();
    std::vector<double> err_l2(ne), err_grad(ne), err_grad_lr(ne), err_grad_plain(ne);
    auto run_one = [&](std::size_t e) {
        const double eps = eps_list[e];
        const Quad1DSolution sol =
            solve_eps_interval(a_per_spec, EpsDescriptor::literal(eps), 0.0, 1.0, f);
        const std::size_t m = sol.nodes.size();
        const double delta = sol.delta();

        // Homogenized solution and slope on the same nodes:
        // u*(x) = (−∫₀ˣF + x·∫₀¹F)/a*,  u*′(x) = (∫₀¹F − F(x))/a*.
        std::vector<double> fs(m);
        for (std::size_t i = 0; i < m; ++i) fs[i] = f(sol.nodes[i]);
        const std::vector<double> F = cumulative_integral(fs, delta);
        const std::vector<double> G = cumulative_integral(F, delta);
        const double Ctil = G.back();

        std::vector<double> diff(m), R(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double x = sol.nodes[i];
            const double ustar = (-G[i] + Ctil * x) / cell.a_star;
            const double uslope = (Ctil - F[i]) / cell.a_star;
            const double w = table_interp_unit(cell.w_table, wrap_unit(x / eps));
            diff[i] = sol.u[i] - ustar;
            R[i] = diff[i] - eps * uslope * w;
        }
        err_l2[e] = simpson_l2(diff, delta);
        err_grad[e] = windowed_grad_lr(sol.nodes, R, 0.25, 0.75, 2.0);
        err_grad_lr[e] = windowed_grad_lr(sol.nodes, R, 0.25, 0.75, 2.0);
        err_grad_plain[e] = windowed_grad_lr(sol.nodes, diff, 0.25, 0.75, 2.0);
    };
    parallel_for_indices(ne, jobs, run_one);

    SweepReport rep = remainder_rates(eps_list, err_l2, err_grad, err_grad_lr, 2.0, p,
                                      alpha, 1);
    rep.err_grad_plain = err_grad_plain;
    return rep;
}

SubsequenceReport counterexample_1d(const std::vector<int>& n_list,
                                    const std::function<double(double)>& f, double y) {
    if (n_list.empty()) throw InsufficientPoints("counterexample_1d: empty n_list");
    constexpr int kPanels = 8192;
    const CoefficientSpec spec = CoefficientSpec::radial_log_osc(2.0, 1.0);

    auto limit_solution = [&](double phase) {
        auto a_lim = [phase](double x) { return 2.0 + std::sin(phase + std::log(x)); };
        return quad_solve_1d(a_lim, f, 1.0, 2.0, kPanels);
    };
    const Quad1DSolution u_lim = limit_solution(y);
    const Quad1DSolution u_other = limit_solution(y + kTwoPiH / 2.0);
    const double delta = u_lim.delta();

    SubsequenceReport rep;
    rep.branch_param = y;
    rep.n_list = n_list;
    rep.limit_norm = simpson_l2(u_lim.u, delta);
    {
        std::vector<double> d(u_lim.u.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = u_lim.u[i] - u_other.u[i];
        rep.cross_branch_distance = simpson_l2(d, delta);
    }

    for (int n : n_list) {
        const Quad1DSolution ue = solve_eps_interval(
            spec, EpsDescriptor::exp_sequence(y, n), 1.0, 2.0, f, kPanels);
        std::vector<double> d(ue.u.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = ue.u[i] - u_lim.u[i];
        rep.distances.push_back(simpson_l2(d, delta));
    }
    return rep;
}

Counterexample2DResult counterexample_2d(const std::vector<int>& n_list, double f_const,
                                         int cells_per_unit) {
    if (n_list.empty()) throw InsufficientPoints("counterexample_2d: empty n_list");
    if (cells_per_unit < 32)
        throw ResolutionInsufficient("annulus mask needs >= 32 cells per unit");

    const Grid grid = Grid::make(2, {-2.0, -2.0}, {4, 4}, cells_per_unit);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(grid.cell_count()), 0);
    for (int i1 = 0; i1 < grid.cells[1]; ++i1) {
        for (int i0 = 0; i0 < grid.cells[0]; ++i0) {
            const Vec2 c = grid.cell_center(i0, i1);
            const double r = std::hypot(c[0], c[1]);
            if (r > 1.0 && r < 2.0)
                mask[static_cast<std::size_t>(grid.index(i0, i1))] = 1;
        }
    }
    const ScalarField f(grid, f_const);
    const CoefficientSpec spec = CoefficientSpec::radial_iter_log_osc(2.0, 1.0);

    auto constant_solve = [&](double c) {
        const MatrixField a = sample_field(CoefficientSpec::constant(c), grid);
        const DiscreteOperator op = assemble(a, BoundaryCondition::DirichletZero,
                                             InterfaceAveraging::Harmonic, &mask);
        return solve(op, &f, nullptr).first;
    };
    const ScalarField u_star1 = constant_solve(2.0);
    const ScalarField u_star2 = constant_solve(3.0);

    Counterexample2DResult result;
    {
        ScalarField d(grid);
        for (std::size_t i = 0; i < d.values.size(); ++i)
            d.values[i] = u_star2.values[i] - (2.0 / 3.0) * u_star1.values[i];
        const double denom = masked_l2(u_star2, mask);
        result.scaling_identity_error = denom > 0.0 ? masked_l2(d, mask) / denom : 0.0;
    }
    const double cross = [&] {
        ScalarField d(grid);
        for (std::size_t i = 0; i < d.values.size(); ++i)
            d.values[i] = u_star1.values[i] - u_star2.values[i];
        return masked_l2(d, mask);
    }();

    constexpr double kPoincareSlab = 4.0 / (kTwoPiH / 2.0);  // C_P = 4/π, width 4
    auto run_branch = [&](double c0, double limit, const ScalarField& u_star,
                          double branch_index) {
        SubsequenceReport rep;
        rep.branch_param = branch_index;
        rep.n_list = n_list;
        rep.limit_norm = masked_l2(u_star, mask);
        rep.cross_branch_distance = cross;
        const double grad_star = masked_face_grad_l2(u_star, mask);
        for (int n : n_list) {
            const EpsDescriptor eps = EpsDescriptor::double_exp_sequence(kTwoPiH, c0, n);
            const MatrixField a_eps = sample_rescaled(spec, grid, eps);
            double dev = 0.0;
            double lambda_min = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < mask.size(); ++i) {
                if (mask[i] == 0) continue;
                dev = std::max(dev, std::abs(a_eps.a00[i] - limit));
                lambda_min = std::min(lambda_min, a_eps.a00[i]);
            }
            const DiscreteOperator op = assemble(a_eps, BoundaryCondition::DirichletZero,
                                                 InterfaceAveraging::Harmonic, &mask);
            const ScalarField ue = solve(op, &f, nullptr).first;
            ScalarField d(grid);
            for (std::size_t i = 0; i < d.values.size(); ++i)
                d.values[i] = ue.values[i] - u_star.values[i];
            rep.distances.push_back(masked_l2(d, mask));
            rep.coef_deviation.push_back(dev);
            rep.perturbation_bound.push_back(kPoincareSlab / lambda_min * dev * grad_star);
        }
        return rep;
    };
    result.branch1 = run_branch(0.0, 2.0, u_star1, 1.0);
    result.branch2 = run_branch(kTwoPiH / 4.0, 3.0, u_star2, 2.0);
    return result;
}

} // namespace homoglab
