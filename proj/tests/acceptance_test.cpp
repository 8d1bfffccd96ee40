// Acceptance suite: one pass/fail line per criterion; the exit code is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "homoglab/calculus.hpp"
#include "homoglab/coefficient.hpp"
#include "homoglab/corrector.hpp"
#include "homoglab/extraction.hpp"
#include "homoglab/harness.hpp"
#include "homoglab/scenarios.hpp"
#include "homoglab/solver.hpp"

using namespace homoglab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Criterion {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

MatrixField isotropic_trig_2d(const Grid& g) {
    MatrixField a(g);
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
            const double v = 2.0 + std::sin(kTwoPi * g.cell_center(i, j)[0]);
            a.set(g.index(i, j), SymMat{v, v, 0.0});
        }
    return a;
}

double zero_mean_bump(double amp, double r2) {
    return amp * std::pow(1.0 + r2, -2.0) - 0.25 * amp * std::pow(1.0 + 0.25 * r2, -2.0);
}

// ---- criterion 1: 1-d effective coefficient vs quadrature oracle ----------
Criterion criterion_1() {
    Criterion c{1, "1-d effective coefficient matches the harmonic-mean quadrature oracle"};
    const auto t0 = std::chrono::steady_clock::now();
    const Grid g = Grid::make(1, {0.0, 0.0}, {1, 1}, 512);
    MatrixField a(g);
    for (int i = 0; i < g.cells[0]; ++i) {
        const double v = 2.0 + std::sin(kTwoPi * g.cell_center(i, 0)[0]);
        a.set(i, SymMat{v, 0.0, 0.0});
    }
    const HomogenizedTensor t = homogenized_tensor(a, {periodic_corrector(a, 0)});
    // oracle: composite-Simpson quadrature of the reciprocal mean
    const int m = 1 << 16;
    std::vector<double> recip(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i)
        recip[static_cast<std::size_t>(i)] =
            1.0 / (2.0 + std::sin(kTwoPi * static_cast<double>(i) / m));
    double integral = 0.0;
    for (int i = 0; i + 2 <= m; i += 2)
        integral += (recip[static_cast<std::size_t>(i)] +
                     4.0 * recip[static_cast<std::size_t>(i) + 1] +
                     recip[static_cast<std::size_t>(i) + 2]) /
                    (6.0 * m) * 2.0;
    const double oracle = 1.0 / integral;
    const double err = std::fabs(t.a_star.a00 - oracle);
    const double secs = seconds_since(t0);
    c.pass = err < 1e-4 && secs < 1.0;
    c.detail = "err=" + fmt(err) + ", " + fmt(secs) + "s";
    return c;
}

// ---- criterion 2: 2-d laminate ---------------------------------------------
Criterion criterion_2() {
    Criterion c{2, "2-d laminate reproduces diag(harmonic, arithmetic) = diag(1.5, 2)"};
    const auto t0 = std::chrono::steady_clock::now();
    const Grid g = Grid::unit_cell(2, 128);
    MatrixField a(g);
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
            const double v = g.cell_center(i, j)[0] < 0.5 ? 1.0 : 3.0;
            a.set(g.index(i, j), SymMat{v, v, 0.0});
        }
    const HomogenizedTensor t =
        homogenized_tensor(a, {periodic_corrector(a, 0), periodic_corrector(a, 1)});
    const double err = std::max({std::fabs(t.a_star.a00 - 1.5),
                                 std::fabs(t.a_star.a11 - 2.0), std::fabs(t.a_star.a01)});
    const double secs = seconds_since(t0);
    c.pass = err < 1e-3 && secs < 30.0;
    c.detail = "err=" + fmt(err) + ", " + fmt(secs) + "s";
    return c;
}

// ---- criterion 3: constant-coefficient degenerate suite --------------------
Criterion criterion_3() {
    Criterion c{3, "constant coefficients: vanishing correctors and a* = c*I"};
    const Grid cell = Grid::unit_cell(2, 16);
    MatrixField a(cell);
    for (std::int64_t i = 0; i < cell.cell_count(); ++i) a.set(i, SymMat{2.5, 2.5, 0.0});
    const auto c0 = periodic_corrector(a, 0);
    const auto c1 = periodic_corrector(a, 1);
    double w_sup = 0.0;
    for (double v : c0.w.values) w_sup = std::max(w_sup, std::fabs(v));
    for (double v : c1.w.values) w_sup = std::max(w_sup, std::fabs(v));
    const HomogenizedTensor t = homogenized_tensor(a, {c0, c1});
    const double t_err = std::max({std::fabs(t.a_star.a00 - 2.5),
                                   std::fabs(t.a_star.a11 - 2.5), std::fabs(t.a_star.a01)});

    const Grid box = Grid::centered_box(2, 16, 16);
    MatrixField a_full(box);
    for (std::int64_t i = 0; i < box.cell_count(); ++i) a_full.set(i, SymMat{2.5, 2.5, 0.0});
    const DefectCorrector dc = defect_corrector_direct(a_full, a, c0, 0, 4.0, 1.5);
    double wt_sup = 0.0;
    for (double v : dc.w_tilde.values) wt_sup = std::max(wt_sup, std::fabs(v));

    c.pass = w_sup < 1e-12 && t_err < 1e-12 && wt_sup < 1e-12;
    c.detail = "sup|w|=" + fmt(w_sup) + ", tensor err=" + fmt(t_err) +
               ", sup|w~|=" + fmt(wt_sup);
    return c;
}

// ---- criterion 4: discrete Sobolev inequality family -----------------------
Criterion criterion_4() {
    Criterion c{4, "12-member Sobolev family: finite, translation-invariant, dilation-stable"};
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<ScalarField> family = gns_family(8, 8);
    std::vector<double> ratios;
    for (const auto& f : family) {
        const GnsReport r = gns_verify(f, 1.5);
        if (r.zero_over_zero || !std::isfinite(r.ratio)) {
            c.detail = "degenerate or infinite ratio in the family";
            return c;
        }
        ratios.push_back(r.ratio);
    }
    // layout: members 3s, 3s+1, 3s+2 are original / translate / dilate
    double shift_dev = 0.0, max_orig = 0.0, max_dil = 0.0;
    for (int s = 0; s < 4; ++s) {
        shift_dev = std::max(shift_dev, std::fabs(ratios[3 * s] - ratios[3 * s + 1]));
        max_orig = std::max(max_orig, ratios[3 * s]);
        max_dil = std::max(max_dil, ratios[3 * s + 2]);
    }
    const double dil_var = std::fabs(max_dil - max_orig) / max_orig;
    const double secs = seconds_since(t0);
    c.pass = shift_dev < 1e-10 && dil_var < 0.20 && secs < 10.0;
    c.detail = "shift dev=" + fmt(shift_dev) + ", dilation var=" + fmt(dil_var) + ", " +
               fmt(secs) + "s";
    return c;
}

// ---- criterion 5: Cesàro extraction accuracy + non-convergence flags -------
Criterion criterion_5() {
    Criterion c{5, "Cesàro extraction: bump error within 2x the tail-sum oracle; "
                   "drifting coefficients flagged"};
    const int n = 4;
    const Grid g = Grid::centered_box(2, 33, n);
    ScalarField f(g);
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
            const Vec2 x = g.cell_center(i, j);
            const double r = std::hypot(x[0], x[1]);
            f.at(i, j) = 2.0 + std::sin(kTwoPi * x[0]) + 0.5 / ((1.0 + r) * (1.0 + r));
        }
    const Decomposition dec = cesaro_periodic_part(f, 32, 1.5);
    // L¹(Q) distance of the recovered periodic part from the true background
    const Grid& ug = dec.periodic_part.grid;
    double err = 0.0;
    for (int j = 0; j < ug.cells[1]; ++j)
        for (int i = 0; i < ug.cells[0]; ++i) {
            const Vec2 x = ug.cell_center(i, j);
            err += std::fabs(dec.periodic_part.at(i, j) - (2.0 + std::sin(kTwoPi * x[0])));
        }
    err *= ug.spacing() * ug.spacing();
    // tail-sum oracle: the translate mean inherits at most (Σ_k ∫_{Q+k} bump)/#I_N,
    // bounded by the integral of the bump over the sampled box
    std::int64_t count = 0;
    const auto lim2 = static_cast<std::int64_t>(dec.n_used) * dec.n_used;
    for (int k1 = -dec.n_used; k1 <= dec.n_used; ++k1)
        for (int k0 = -dec.n_used; k0 <= dec.n_used; ++k0)
            if (static_cast<std::int64_t>(k0) * k0 + static_cast<std::int64_t>(k1) * k1 <= lim2)
                ++count;
    double bump_mass = 0.0;
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
            const Vec2 x = g.cell_center(i, j);
            const double r = std::hypot(x[0], x[1]);
            bump_mass += 0.5 / ((1.0 + r) * (1.0 + r));
        }
    bump_mass *= g.spacing() * g.spacing();
    const double oracle = bump_mass / static_cast<double>(count);
    const bool accuracy = err > 0.0 && err <= 2.0 * oracle;

    // both slowly drifting radial coefficients must trip the stop rule
    bool flagged = true;
    const Grid gd = Grid::centered_box(2, 7, 4);
    for (int kind = 0; kind < 2; ++kind) {
        const CoefficientSpec spec = kind == 0
                                         ? CoefficientSpec::radial_log_osc(2.0, 1.0)
                                         : CoefficientSpec::radial_iter_log_osc(2.0, 1.0);
        ScalarField fd(gd);
        for (int j = 0; j < gd.cells[1]; ++j)
            for (int i = 0; i < gd.cells[0]; ++i)
                fd.at(i, j) = spec.eval(gd.cell_center(i, j), 2).a00;
        flagged = flagged && cesaro_periodic_part(fd, 6, 1.5).non_convergent;
    }
    c.pass = accuracy && flagged;
    c.detail = "L1 err=" + fmt(err) + ", oracle=" + fmt(oracle) +
               (flagged ? ", drift flagged" : ", drift NOT flagged");
    return c;
}

// ---- criterion 6: ball-average decay + weak-* vanishing --------------------
Criterion criterion_6() {
    Criterion c{6, "ball averages decay at -d/p* and weak-* integrals vanish monotonically"};
    const Grid g = Grid::centered_box(2, 32, 4);
    ScalarField f(g);
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
            const Vec2 x = g.cell_center(i, j);
            // decay |x|^{-1/3} = -d/p* for p = 3/2, d = 2
            f.at(i, j) = std::pow(1.0 + x[0] * x[0] + x[1] * x[1], -1.0 / 6.0);
        }
    const DecayFit fit = ball_average_decay(f, {2.0, 4.0, 8.0, 16.0});
    const double target = -2.0 / 6.0;
    const bool decay_ok = !fit.degenerate && std::fabs(fit.fitted_exponent - target) < 0.15;

    auto phi = [](Vec2 x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        return r2 >= 1.0 ? 0.0 : (1.0 - r2) * (1.0 - r2);
    };
    const std::vector<double> vals = weak_star_vanishing(f, {0.5, 0.25, 0.125}, phi, 1.0);
    const bool weak_ok = vals.size() == 3 && vals[0] > vals[1] && vals[1] > vals[2];
    c.pass = decay_ok && weak_ok;
    c.detail = "exponent=" + fmt(fit.fitted_exponent) + " (target " + fmt(target) + ")" +
               (weak_ok ? ", weak-* monotone" : ", weak-* NOT monotone");
    return c;
}

// ---- criterion 7: de Rham round-trip ----------------------------------------
Criterion criterion_7() {
    Criterion c{7, "potential reconstruction inverts the discrete gradient"};
    const Grid g = Grid::make(2, {0.0, 0.0}, {4, 4}, 3);
    double worst = 0.0;
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        const double c1 = unif(rng), c2 = unif(rng), c3 = unif(rng);
        ScalarField v(g);
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const Vec2 x = g.cell_center(i, j);
                v.at(i, j) = c1 * std::sin(kTwoPi * x[0]) + c2 * std::cos(x[0] + x[1]) +
                             c3 * std::exp(-0.25 * (x[0] * x[0] + x[1] * x[1]));
            }
        const ShiftedDifferenceField t = discrete_gradient(v);
        const ShiftedDifferenceField t2 = discrete_gradient(potential_from_discrete_gradient(t));
        for (int k = 0; k < 2; ++k)
            for (std::size_t i = 0; i < t.comp[k].values.size(); ++i)
                worst = std::max(worst,
                                 std::fabs(t2.comp[k].values[i] - t.comp[k].values[i]));
    }
    bool rejected = false;
    {
        ScalarField v(g, 0.0);
        ShiftedDifferenceField t = discrete_gradient(v);
        t.comp[0].values[4] = 1.0;  // breaks the mixed-difference compatibility
        try {
            potential_from_discrete_gradient(t);
        } catch (const IncompatibleField&) {
            rejected = true;
        }
    }
    c.pass = worst < 1e-12 && rejected;
    c.detail = "round-trip err=" + fmt(worst) +
               (rejected ? ", incompatible data rejected" : ", incompatible data ACCEPTED");
    return c;
}

// ---- criterion 8: fixed-point defect solver ---------------------------------
Criterion criterion_8() {
    Criterion c{8, "fixed-point defect iteration contracts and matches the direct solve"};
    const Grid box = Grid::centered_box(2, 8, 8);
    MatrixField a_per(box);
    for (std::int64_t i = 0; i < box.cell_count(); ++i) a_per.set(i, SymMat{1.0, 1.0, 0.0});

    const double tol = 1e-8;
    double worst_ratio_01 = 0.0, match = 0.0, last_first = 0.0;
    bool growing = true;
    for (double amp : {0.1, 0.2, 0.4}) {
        MatrixField a_tilde(box);
        for (int j = 0; j < box.cells[1]; ++j)
            for (int i = 0; i < box.cells[0]; ++i) {
                const Vec2 x = box.cell_center(i, j);
                const double v = zero_mean_bump(amp, x[0] * x[0] + x[1] * x[1]);
                a_tilde.set(box.index(i, j), SymMat{v, v, 0.0});
            }
        VectorField rhs(box);
        rhs.comp[0] = a_tilde.a00;
        const FixedPointResult fp = defect_corrector_fixed_point(a_per, a_tilde, rhs, tol);
        if (fp.ratios.empty()) {
            c.detail = "no contraction ratios recorded";
            return c;
        }
        if (amp == 0.1) {
            for (double r : fp.ratios) worst_ratio_01 = std::max(worst_ratio_01, r);
            MatrixField a_full = a_per;
            for (std::size_t i = 0; i < a_full.a00.size(); ++i) {
                a_full.a00[i] += a_tilde.a00[i];
                a_full.a11[i] += a_tilde.a11[i];
            }
            const DiscreteOperator op = assemble(a_full, BoundaryCondition::DirichletZero);
            const auto [u, stats] = solve(op, nullptr, &rhs, {1e-12, 0, {0.0, 0.0}});
            for (std::size_t i = 0; i < u.values.size(); ++i)
                match = std::max(match, std::fabs(u.values[i] - fp.u.values[i]));
        }
        growing = growing && fp.ratios.front() > last_first;
        last_first = fp.ratios.front();
    }
    c.pass = worst_ratio_01 < 0.5 && match < 10.0 * tol && growing;
    c.detail = "max ratio(0.1)=" + fmt(worst_ratio_01) + ", direct-solve diff=" + fmt(match) +
               (growing ? ", ratios grow with amplitude" : ", ratios NOT monotone");
    return c;
}

// ---- criterion 9: 1-d convergence-rate sweep --------------------------------
Criterion criterion_9() {
    Criterion c{9, "1-d sweep: L2 slope in [0.85,1.15], interior gradient slope in [0.8,1.2]"};
    const auto t0 = std::chrono::steady_clock::now();
    const CoefficientSpec spec =
        CoefficientSpec::periodic_trig(2.0, {TrigTerm{1.0, {1, 0}, 0.0}}, 1.0);
    const std::vector<double> eps{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
    const SweepReport r =
        rate_sweep_1d(spec, [](double x) { return 1.0 + 0.5 * x; }, eps, 0.4, 0.5, 2);
    const double secs = seconds_since(t0);
    c.pass = r.slope_l2 > 0.85 && r.slope_l2 < 1.15 && r.slope_grad_r > 0.8 &&
             r.slope_grad_r < 1.2 && secs < 10.0;
    c.detail = "L2 slope=" + fmt(r.slope_l2) + ", grad slope=" + fmt(r.slope_grad_r) + ", " +
               fmt(secs) + "s";
    return c;
}

// ---- criterion 10: exponent formulas ----------------------------------------
Criterion criterion_10() {
    Criterion c{10, "rate exponent mu(3/2,2) = 1/3 exactly; q hits 1/alpha at p = 2/(alpha+1)"};
    const bool mu_ok = reference_mu(1.5, 2) == 1.0 / 3.0;
    bool q_ok = true;
    for (double alpha : {0.25, 0.5, 0.75}) {
        const double p = 2.0 / (alpha + 1.0);
        const double q = holder_lebesgue_exponent(p, alpha, 1);
        q_ok = q_ok && std::fabs(q - 1.0 / alpha) < 1e-12;
    }
    c.pass = mu_ok && q_ok;
    c.detail = std::string(mu_ok ? "mu exact" : "mu NOT exact") +
               (q_ok ? ", q threshold reproduced" : ", q threshold NOT reproduced");
    return c;
}

// ---- criterion 11: 1-d counter-example --------------------------------------
Criterion criterion_11() {
    Criterion c{11, "1-d subsequences: distinct limits, strictly decreasing distances"};
    const auto t0 = std::chrono::steady_clock::now();
    const SubsequenceReport rep = counterexample_1d({1, 2, 3}, [](double) { return 1.0; }, 0.0);
    const bool decreasing = rep.distances.size() == 3 && rep.distances[0] > rep.distances[1] &&
                            rep.distances[1] > rep.distances[2];
    const bool separated = rep.cross_branch_distance >= 0.01 * rep.limit_norm;
    const double secs = seconds_since(t0);
    c.pass = decreasing && separated && secs < 5.0;
    c.detail = "limit separation=" + fmt(rep.cross_branch_distance / rep.limit_norm) +
               (decreasing ? ", distances decreasing" : ", distances NOT decreasing") + ", " +
               fmt(secs) + "s";
    return c;
}

// ---- criterion 12: 2-d counter-example --------------------------------------
Criterion criterion_12() {
    Criterion c{12, "2-d annulus subsequences: coefficient within 1e-3 of each limit, "
                    "scaling identity, perturbation bounds"};
    const auto t0 = std::chrono::steady_clock::now();
    const Counterexample2DResult res = counterexample_2d({1, 2}, 1.0, 128);
    const double secs = seconds_since(t0);

    double worst_dev = 0.0;
    for (const auto* br : {&res.branch1, &res.branch2})
        for (double d : br->coef_deviation) worst_dev = std::max(worst_dev, d);
    const bool dev_ok = worst_dev < 1e-3;
    bool bounds_ok = true;
    for (const auto* br : {&res.branch1, &res.branch2})
        for (std::size_t i = 0; i < br->distances.size(); ++i)
            bounds_ok = bounds_ok && br->distances[i] <= br->perturbation_bound[i];
    const bool scaling_ok = res.scaling_identity_error < 1e-8;

    c.pass = dev_ok && bounds_ok && scaling_ok && secs < 60.0;
    std::ostringstream d;
    d << "sup coef deviation=" << fmt(worst_dev);
    if (!dev_ok)
        // the slow branch at n = 1 sits at (1 + ln 2)e^{-2pi} ~ 3.16e-3: the
        // first subsequence element has not yet entered the 1e-3 tube, and no
        // resolution choice changes that analytic value
        d << " (branch-1 n=1 deviation exceeds 1e-3; analytic value (1+ln2)e^{-2pi}=3.16e-3)";
    d << ", scaling err=" << fmt(res.scaling_identity_error)
      << (bounds_ok ? ", distances within bounds" : ", distances exceed bounds") << ", "
      << fmt(secs) << "s";
    c.detail = d.str();
    return c;
}

// ---- criterion 13: solver refinement order ----------------------------------
Criterion criterion_13() {
    Criterion c{13, "manufactured solutions refine with L2 error ratio in [3.5,4.5], d=1,2"};
    const auto err_1d = [](int cells) {
        const Grid g = Grid::make(1, {0.0, 0.0}, {1, 1}, cells);
        MatrixField a(g);
        for (int i = 0; i < g.cells[0]; ++i) a.set(i, SymMat{1.0, 0.0, 0.0});
        ScalarField f(g);
        for (int i = 0; i < g.cells[0]; ++i)
            f.at(i) = kTwoPi * kTwoPi / 4.0 * std::sin(kTwoPi / 2.0 * g.cell_center(i, 0)[0]);
        const auto [u, s] = solve(assemble(a, BoundaryCondition::DirichletZero), &f, nullptr,
                                  {1e-12, 0, {0.0, 0.0}});
        double e2 = 0.0;
        for (int i = 0; i < g.cells[0]; ++i) {
            const double d = u.at(i) - std::sin(kTwoPi / 2.0 * g.cell_center(i, 0)[0]);
            e2 += d * d;
        }
        return std::sqrt(e2 * g.spacing());
    };
    const auto err_2d = [](int cells) {
        const Grid g = Grid::make(2, {0.0, 0.0}, {1, 1}, cells);
        MatrixField a(g);
        for (std::int64_t i = 0; i < g.cell_count(); ++i) a.set(i, SymMat{1.0, 1.0, 0.0});
        ScalarField f(g);
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const Vec2 x = g.cell_center(i, j);
                f.at(i, j) = kTwoPi * kTwoPi / 2.0 * std::sin(kTwoPi / 2.0 * x[0]) *
                             std::sin(kTwoPi / 2.0 * x[1]);
            }
        const auto [u, s] = solve(assemble(a, BoundaryCondition::DirichletZero), &f, nullptr,
                                  {1e-12, 0, {0.0, 0.0}});
        double e2 = 0.0;
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const Vec2 x = g.cell_center(i, j);
                const double d = u.at(i, j) - std::sin(kTwoPi / 2.0 * x[0]) *
                                                  std::sin(kTwoPi / 2.0 * x[1]);
                e2 += d * d;
            }
        return std::sqrt(e2 * g.spacing() * g.spacing());
    };
    const double r1 = err_1d(32) / err_1d(64);
    const double r2 = err_2d(16) / err_2d(32);
    c.pass = r1 > 3.5 && r1 < 4.5 && r2 > 3.5 && r2 < 4.5;
    c.detail = "ratio d=1: " + fmt(r1) + ", d=2: " + fmt(r2);
    return c;
}

} // namespace

int main() {
    std::vector<Criterion (*)()> runners{
        criterion_1, criterion_2,  criterion_3,  criterion_4,  criterion_5,
        criterion_6, criterion_7,  criterion_8,  criterion_9,  criterion_10,
        criterion_11, criterion_12, criterion_13};
    int failures = 0;
    for (std::size_t k = 0; k < runners.size(); ++k) {
        Criterion c;
        try {
            c = runners[k]();
        } catch (const std::exception& e) {
            c.id = static_cast<int>(k) + 1;
            c.title = "criterion aborted";
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        if (!c.pass) ++failures;
        std::printf("[%s] criterion %2d: %s (%s)\n", c.pass ? "PASS" : "FAIL", c.id,
                    c.title.c_str(), c.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/13 criteria passed\n", 13 - failures);
    return failures;
}
