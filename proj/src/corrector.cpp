#include "homoglab/corrector.hpp"

#include <cmath>
#include <limits>

namespace homoglab {

namespace {

/// Centered differences with periodic wrap (for unit-cell correctors).
VectorField periodic_centered_gradient(const ScalarField& f) {
    const Grid& g = f.grid;
    VectorField out(g);
    const double inv_2h = 0.5 / g.spacing();
    const int c0 = g.cells[0], c1 = g.cells[1];
    for (int j = 0; j < c1; ++j)
        for (int i = 0; i < c0; ++i) {
            const auto idx = static_cast<std::size_t>(g.index(i, j));
            out.comp[0][idx] =
                (f.at((i + 1) % c0, j) - f.at((i - 1 + c0) % c0, j)) * inv_2h;
            if (g.dim == 2)
                out.comp[1][idx] =
                    (f.at(i, (j + 1) % c1) - f.at(i, (j - 1 + c1) % c1)) * inv_2h;
        }
    return out;
}

void require_unit_cell(const Grid& g) {
    const int n = g.cells_per_unit;
    if (g.cells[0] != n || (g.dim == 2 && g.cells[1] != n))
        throw ResolutionMismatch("periodic coefficient must be sampled on one unit cell");
}

MatrixField crop_matrix(const MatrixField& a, double half) {
    ScalarField c00 = crop_centered(a.component(0), half);
    MatrixField out(c00.grid);
    out.a00 = c00.values;
    if (a.grid.dim == 2) {
        out.a11 = crop_centered(a.component(1), half).values;
        out.a01 = crop_centered(a.component(2), half).values;
    }
    return out;
}

VectorField crop_vector(const VectorField& v, double half) {
    ScalarField f0;
    f0.grid = v.grid;
    f0.values = v.comp[0];
    ScalarField c0 = crop_centered(f0, half);
    VectorField out(c0.grid);
    out.comp[0] = c0.values;
    if (v.grid.dim == 2) {
        ScalarField f1;
        f1.grid = v.grid;
        f1.values = v.comp[1];
        out.comp[1] = crop_centered(f1, half).values;
    }
    return out;
}

std::int64_t origin_cell_index(const Grid& g) {
    const double h = g.spacing();
    const auto clamp = [](int v, int hi) { return std::min(std::max(v, 0), hi - 1); };
    const int i0 = clamp(static_cast<int>(std::floor(-g.origin[0] / h)), g.cells[0]);
    const int i1 = g.dim == 2
                       ? clamp(static_cast<int>(std::floor(-g.origin[1] / h)), g.cells[1])
                       : 0;
    return g.index(i0, i1);
}

} // namespace

CorrectorComponent periodic_corrector(const MatrixField& a_per, int q) {
    const Grid& g = a_per.grid;
    g.validate();
    require_unit_cell(g);
    if (q < 0 || q >= g.dim) throw ResolutionMismatch("corrector direction out of range");

    DiscreteOperator op = assemble(a_per, BoundaryCondition::PeriodicZeroMean);
    SolveOptions opts;
    opts.q_drift[q] = 1.0;
    auto [w, stats] = solve(op, nullptr, nullptr, opts);

    CorrectorComponent c;
    c.q = q;
    c.w = std::move(w);
    c.grad_w = periodic_centered_gradient(c.w);
    c.stats = stats;
    return c;
}

HomogenizedTensor homogenized_tensor(const MatrixField& a_per,
                                     const std::vector<CorrectorComponent>& correctors) {
    const Grid& g = a_per.grid;
    require_unit_cell(g);
    const int d = g.dim;
    if (static_cast<int>(correctors.size()) != d)
        throw ResolutionMismatch("need one corrector per direction");
    std::array<const CorrectorComponent*, 2> byq{nullptr, nullptr};
    for (const auto& c : correctors) {
        if (c.q < 0 || c.q >= d || !c.w.grid.same_layout(g))
            throw ResolutionMismatch("corrector resolution does not match the coefficient");
        byq[static_cast<std::size_t>(c.q)] = &c;
    }
    if (!byq[0] || (d == 2 && !byq[1]))
        throw ResolutionMismatch("missing corrector direction");

    const double h = g.spacing();
    const int c0 = g.cells[0], c1 = g.cells[1];
    double astar[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

    bool have_offdiag = false;
    for (double v : a_per.a01)
        if (v != 0.0) { have_offdiag = true; break; }

    if (!have_offdiag) {
        // face-flux averages: a*_{kj} = mean over faces ⊥ e_k of
        // t_f((w_j(right) − w_j(left))/h + (e_j)_k); exact for laminates.
        DiscreteOperator op = assemble(a_per, BoundaryCondition::PeriodicZeroMean);
        for (int jdir = 0; jdir < d; ++jdir) {
            const ScalarField& w = byq[static_cast<std::size_t>(jdir)]->w;
            for (int k = 0; k < d; ++k) {
                const double qk = (k == jdir) ? 1.0 : 0.0;
                double sum = 0.0;
                const int nfx = k == 0 ? c0 + 1 : c0;
                for (int j = 0; j < c1; ++j)
                    for (int i = 0; i < c0; ++i) {
                        // face owned by cell (i,j) on its low side along k
                        const double t = op.tface[k][static_cast<std::size_t>(j) * nfx + i];
                        const double wl = k == 0 ? w.at((i - 1 + c0) % c0, j)
                                                 : w.at(i, (j - 1 + c1) % c1);
                        sum += t * ((w.at(i, j) - wl) / h + qk);
                    }
                astar[k][jdir] = sum / static_cast<double>(g.cell_count());
            }
        }
    } else {
        // volume quadrature of a(∇w_j + e_j) with centered periodic gradients
        for (int jdir = 0; jdir < d; ++jdir) {
            const auto& cc = *byq[static_cast<std::size_t>(jdir)];
            double s0 = 0.0, s1 = 0.0;
            for (std::int64_t idx = 0; idx < g.cell_count(); ++idx) {
                const SymMat m = a_per.at(idx);
                const double v0 =
                    cc.grad_w.comp[0][static_cast<std::size_t>(idx)] + (jdir == 0 ? 1.0 : 0.0);
                const double v1 =
                    cc.grad_w.comp[1][static_cast<std::size_t>(idx)] + (jdir == 1 ? 1.0 : 0.0);
                s0 += m.a00 * v0 + m.a01 * v1;
                s1 += m.a01 * v0 + m.a11 * v1;
            }
            astar[0][jdir] = s0 / static_cast<double>(g.cell_count());
            astar[1][jdir] = s1 / static_cast<double>(g.cell_count());
        }
    }

    HomogenizedTensor t;
    t.resolution = g.cells_per_unit;
    if (d == 1) {
        t.a_star = SymMat{astar[0][0], 0.0, 0.0};
    } else {
        t.asymmetry_defect = std::fabs(astar[0][1] - astar[1][0]);
        t.a_star = SymMat{astar[0][0], astar[1][1], 0.5 * (astar[0][1] + astar[1][0])};
    }
    return t;
}

DefectCorrector defect_corrector_direct(const MatrixField& a_full,
                                        const MatrixField& a_per,
                                        const CorrectorComponent& w_per, int q,
                                        double R_inner, double p) {
    const Grid& g = a_full.grid;
    g.validate();
    require_unit_cell(a_per.grid);
    const int d = g.dim;
    if (a_per.grid.dim != d || a_per.grid.cells_per_unit != g.cells_per_unit ||
        !w_per.w.grid.same_layout(a_per.grid))
        throw ResolutionMismatch("coefficient/corrector resolutions do not match");
    if (q < 0 || q >= d) throw ResolutionMismatch("corrector direction out of range");

    const auto ext = g.extent();
    const double R = 0.5 * ext[0];
    for (int axis = 0; axis < d; ++axis)
        if (std::fabs(g.origin[axis] + R) > 1e-12 || std::fabs(ext[axis] - 2.0 * R) > 1e-12)
            throw DomainTooSmall("defect corrector needs a centered box Q_R");
    if (!(R >= 4.0 * R_inner))
        throw DomainTooSmall("defect corrector needs R >= 4 R_inner");

    const int n = g.cells_per_unit;
    const auto wrap = [n](int v) { return ((v % n) + n) % n; };
    const int base0 = static_cast<int>(std::llround(-g.origin[0] / g.spacing()));
    const int base1 = d == 2 ? static_cast<int>(std::llround(-g.origin[1] / g.spacing())) : 0;

    // rhs g(x) = ã(x)(∇w_per(x) + e_q), with ã = a − wrap(a_per)
    VectorField rhs(g);
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
            const auto idx = g.index(i, j);
            const auto pidx = a_per.grid.index(wrap(i - base0), d == 2 ? wrap(j - base1) : 0);
            const SymMat af = a_full.at(idx);
            const SymMat ap = a_per.at(pidx);
            const SymMat at{af.a00 - ap.a00, af.a11 - ap.a11, af.a01 - ap.a01};
            const double v0 =
                w_per.grad_w.comp[0][static_cast<std::size_t>(pidx)] + (q == 0 ? 1.0 : 0.0);
            const double v1 = d == 2 ? w_per.grad_w.comp[1][static_cast<std::size_t>(pidx)] +
                                           (q == 1 ? 1.0 : 0.0)
                                     : 0.0;
            rhs.comp[0][static_cast<std::size_t>(idx)] = at.a00 * v0 + at.a01 * v1;
            if (d == 2)
                rhs.comp[1][static_cast<std::size_t>(idx)] = at.a01 * v0 + at.a11 * v1;
        }

    const auto solve_on = [&](const MatrixField& coef,
                              const VectorField& src) -> std::pair<ScalarField, SolveStats> {
        DiscreteOperator op = assemble(coef, BoundaryCondition::DirichletZero);
        auto [u, stats] = solve(op, nullptr, &src);
        const double anchor = u.values[static_cast<std::size_t>(origin_cell_index(u.grid))];
        for (double& v : u.values) v -= anchor;
        return {std::move(u), stats};
    };

    DefectCorrector dc;
    auto [w_big, stats] = solve_on(a_full, rhs);
    dc.stats = stats;

    // truncation sensitivity: re-solve on Q_{R/2}
    {
        MatrixField a_half = crop_matrix(a_full, R / 2.0);
        VectorField rhs_half = crop_vector(rhs, R / 2.0);
        auto [w_half, half_stats] = solve_on(a_half, rhs_half);
        (void)half_stats;
        ScalarField big_in = crop_centered(w_big, R_inner);
        ScalarField half_in = crop_centered(w_half, R_inner);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < big_in.values.size(); ++i) {
            const double diff = big_in.values[i] - half_in.values[i];
            num += diff * diff;
            den += big_in.values[i] * big_in.values[i];
        }
        dc.truncation_change = den > 0.0 ? std::sqrt(num / den) : 0.0;
        if (dc.truncation_change > 0.05)
            throw TruncationUnstable("defect corrector changes by > 5% between R and R/2");
    }

    dc.grad_w_tilde = centered_gradient(w_big);
    // diagnostics restricted to Q_{R_inner}
    ScalarField grad_mag(g);
    for (std::size_t i = 0; i < grad_mag.values.size(); ++i) {
        const double gx = dc.grad_w_tilde.comp[0][i];
        const double gy = d == 2 ? dc.grad_w_tilde.comp[1][i] : 0.0;
        grad_mag.values[i] = std::hypot(gx, gy);
    }
    dc.ap_report = norms(crop_centered(grad_mag, R_inner), p);
    dc.sublinearity = sublinearity_profile(crop_centered(w_big, R_inner), p);
    dc.w_tilde = std::move(w_big);
    return dc;
}

FixedPointResult defect_corrector_fixed_point(const MatrixField& a_per_box,
                                              const MatrixField& a_tilde_box,
                                              const VectorField& rhs, double tol) {
    const Grid& g = a_per_box.grid;
    g.validate();
    if (!a_tilde_box.grid.same_layout(g) || !rhs.grid.same_layout(g))
        throw ResolutionMismatch("fixed-point inputs must share one grid");

    MatrixField a_full(g);
    for (std::size_t i = 0; i < a_full.a00.size(); ++i) {
        a_full.a00[i] = a_per_box.a00[i] + a_tilde_box.a00[i];
        if (g.dim == 2) {
            a_full.a11[i] = a_per_box.a11[i] + a_tilde_box.a11[i];
            a_full.a01[i] = a_per_box.a01[i] + a_tilde_box.a01[i];
        }
    }
    DiscreteOperator op_per = assemble(a_per_box, BoundaryCondition::DirichletZero);
    DiscreteOperator op_full = assemble(a_full, BoundaryCondition::DirichletZero);

    FixedPointResult res;
    ScalarField u(g, 0.0);
    const auto nc = static_cast<std::size_t>(g.cell_count());
    std::vector<double> ap(nc), af(nc);
    const long cap = 200;
    for (long it = 0; it < cap; ++it) {
        // A_per u_{n+1} = div(rhs) + (A_per − A_full) u_n, i.e. the operator
        // splitting of −div((a_per+ã)∇u) = div(rhs)
        op_per.apply(u.values, ap);
        op_full.apply(u.values, af);
        ScalarField extra(g);
        for (std::size_t i = 0; i < nc; ++i) extra.values[i] = ap[i] - af[i];
        auto [next, stats] = solve(op_per, &extra, &rhs);
        (void)stats;
        ScalarField diff(g);
        for (std::size_t i = 0; i < nc; ++i) diff.values[i] = next.values[i] - u.values[i];
        const double inc = face_grad_l2(diff);
        res.increments.push_back(inc);
        if (res.increments.size() >= 2) {
            const double prev = res.increments[res.increments.size() - 2];
            res.ratios.push_back(prev > 0.0 ? inc / prev
                                            : std::numeric_limits<double>::infinity());
        }
        u = std::move(next);
        res.iterations = it + 1;
        if (inc <= tol) break;
        if (res.ratios.size() >= 2 && res.ratios[res.ratios.size() - 1] >= 0.95 &&
            res.ratios[res.ratios.size() - 2] >= 0.95)
            throw NotContracting("fixed-point iteration is not contracting");
        if (it + 1 == cap) throw NoConvergence("fixed-point iteration cap reached");
    }
    res.u = std::move(u);
    return res;
}

DecayFit sublinearity_profile(const ScalarField& w, double p) {
    const Grid& g = w.grid;
    const int d = g.dim;
    if (!(p > 0.5 * d) || !(p < d))
        throw ExponentOutOfRange("sublinearity profile requires d/2 < p < d");

    DecayFit fit;
    std::vector<double> maxima;
    for (double r = 1.0;; r *= 2.0) {
        double mx = -1.0;
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const Vec2 x = g.cell_center(i, j);
                const double rad = d == 1 ? std::fabs(x[0]) : std::hypot(x[0], x[1]);
                if (rad < r || rad >= 2.0 * r) continue;
                mx = std::max(mx, std::fabs(w.at(i, j)) / (1.0 + rad));
            }
        if (mx < 0.0) break;  // empty shell: past the sampled extent
        fit.radii.push_back(r * std::sqrt(2.0));  // geometric shell midpoint
        maxima.push_back(mx);
    }
    if (fit.radii.size() < 3 || fit.radii.back() < 4.0)
        throw InsufficientRadii("sublinearity profile needs samples beyond radius 4");
    fit.averaged_values = maxima;
    for (double v : maxima)
        if (!(v > 0.0)) {
            fit.degenerate = true;
            fit.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
            return fit;
        }
    std::vector<double> lx(maxima.size()), ly(maxima.size());
    for (std::size_t i = 0; i < maxima.size(); ++i) {
        lx[i] = std::log(fit.radii[i]);
        ly[i] = std::log(maxima[i]);
    }
    const LineFit lf = fit_line(lx, ly);
    fit.fitted_exponent = lf.slope;
    fit.r2 = lf.r2;
    return fit;
}

} // namespace homoglab
