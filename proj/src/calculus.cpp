#include "homoglab/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace homoglab {

namespace {

/// Neumaier-compensated running sum.
struct Compensated {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double t = s + v;
        if (std::fabs(s) >= std::fabs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    double get() const { return s + c; }
};

double pow_p(double v, double p) {
    if (p == 2.0) return v * v;
    if (p == 1.0) return v;
    return std::pow(v, p);
}

/// Window sums over n×n cell blocks via compensated prefix sums.  transform
/// is applied per cell; out(i) = Σ_{window at i} transform(f).
ScalarField window_sums(const ScalarField& f,
                        const std::function<double(double)>& transform) {
    const Grid& g = f.grid;
    const int n = g.cells_per_unit;
    if (g.cells[0] < n || (g.dim == 2 && g.cells[1] < n))
        throw GridTooSmall("grid smaller than one unit cell");

    Grid og = g;
    og.cells[0] = g.cells[0] - n + 1;
    if (g.dim == 2) og.cells[1] = g.cells[1] - n + 1;
    ScalarField out(og);

    // per-row prefix sums -> per-row window sums
    std::vector<double> rowwin(static_cast<std::size_t>(og.cells[0]) * g.cells[1]);
    std::vector<double> prefix(static_cast<std::size_t>(g.cells[0]) + 1);
    for (int j = 0; j < g.cells[1]; ++j) {
        Compensated acc;
        prefix[0] = 0.0;
        for (int i = 0; i < g.cells[0]; ++i) {
            acc.add(transform(f.at(i, j)));
            prefix[static_cast<std::size_t>(i) + 1] = acc.get();
        }
        for (int i = 0; i < og.cells[0]; ++i)
            rowwin[static_cast<std::size_t>(j) * og.cells[0] + i] =
                prefix[static_cast<std::size_t>(i) + n] - prefix[static_cast<std::size_t>(i)];
    }
    if (g.dim == 1) {
        for (int i = 0; i < og.cells[0]; ++i) out.at(i) = rowwin[static_cast<std::size_t>(i)];
        return out;
    }
    // column prefix over the row windows
    std::vector<double> colprefix(static_cast<std::size_t>(g.cells[1]) + 1);
    for (int i = 0; i < og.cells[0]; ++i) {
        Compensated acc;
        colprefix[0] = 0.0;
        for (int j = 0; j < g.cells[1]; ++j) {
            acc.add(rowwin[static_cast<std::size_t>(j) * og.cells[0] + i]);
            colprefix[static_cast<std::size_t>(j) + 1] = acc.get();
        }
        for (int j = 0; j < og.cells[1]; ++j)
            out.at(i, j) = colprefix[static_cast<std::size_t>(j) + n] -
                           colprefix[static_cast<std::size_t>(j)];
    }
    return out;
}

} // namespace

ShiftedDifferenceField discrete_gradient(const ScalarField& f) {
    const Grid& g = f.grid;
    g.validate();
    const int n = g.cells_per_unit;
    ShiftedDifferenceField T;
    T.source_grid = g;
    for (int axis = 0; axis < g.dim; ++axis) {
        if (g.cells[axis] < 2 * n)
            throw GridTooSmall("discrete gradient needs at least two units per direction");
        Grid cg = g;
        cg.cells[axis] -= n;
        ScalarField c(cg);
        for (int j = 0; j < cg.cells[1]; ++j)
            for (int i = 0; i < cg.cells[0]; ++i)
                c.at(i, j) = f.at(i + (axis == 0 ? n : 0), j + (axis == 1 ? n : 0)) - f.at(i, j);
        T.comp[axis] = std::move(c);
    }
    return T;
}

ScalarField local_average(const ScalarField& f) {
    const double hd = std::pow(f.grid.spacing(), f.grid.dim);
    ScalarField out = window_sums(f, [](double v) { return std::fabs(v); });
    for (double& v : out.values) v *= hd;
    return out;
}

NormReport norms(const ScalarField& f, double p) {
    if (p < 1.0) throw ExponentOutOfRange("norms requires p >= 1");
    const Grid& g = f.grid;
    const int d = g.dim;
    const int n = g.cells_per_unit;
    const double hd = std::pow(g.spacing(), d);

    NormReport r;
    r.p = p;
    r.p_star = std::numeric_limits<double>::quiet_NaN();
    r.ep_norm = std::numeric_limits<double>::quiet_NaN();
    r.ap_norm = std::numeric_limits<double>::quiet_NaN();

    // ‖δf‖_{L^p} over the overlap domain shrunk by one unit in every direction
    ShiftedDifferenceField T = discrete_gradient(f);
    const int m0 = g.cells[0] - n;
    const int m1 = d == 2 ? g.cells[1] - n : 1;
    r.delta_domain_cells = {m0, m1};
    {
        Compensated acc;
        for (int j = 0; j < m1; ++j)
            for (int i = 0; i < m0; ++i) {
                const double dx = T.comp[0].at(i, j);
                const double dy = d == 2 ? T.comp[1].at(i, j) : 0.0;
                acc.add(pow_p(std::hypot(dx, dy), p));
            }
        r.lp_of_delta = std::pow(hd * acc.get(), 1.0 / p);
    }

    // L²_unif: sup over unit-cube windows of the local L² norm
    {
        ScalarField w = window_sums(f, [](double v) { return v * v; });
        double mx = 0.0;
        for (double v : w.values) mx = std::max(mx, v);
        r.l2_unif = std::sqrt(hd * mx);
    }

    if (p < d) {
        r.sobolev_part_present = true;
        r.p_star = p * d / (d - p);
        ScalarField M = local_average(f);
        r.window_domain_cells = {M.grid.cells[0], d == 2 ? M.grid.cells[1] : 1};
        Compensated acc;
        for (double v : M.values) acc.add(pow_p(v, r.p_star));
        r.ep_norm = std::pow(hd * acc.get(), 1.0 / r.p_star);
        r.ap_norm = r.ep_norm + r.lp_of_delta;
    }
    return r;
}

VectorField centered_gradient(const ScalarField& f) {
    const Grid& g = f.grid;
    VectorField out(g);
    const double inv_2h = 0.5 / g.spacing();
    const double inv_h = 1.0 / g.spacing();
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
            const auto idx = static_cast<std::size_t>(g.index(i, j));
            if (i == 0)
                out.comp[0][idx] = (f.at(1, j) - f.at(0, j)) * inv_h;
            else if (i == g.cells[0] - 1)
                out.comp[0][idx] = (f.at(i, j) - f.at(i - 1, j)) * inv_h;
            else
                out.comp[0][idx] = (f.at(i + 1, j) - f.at(i - 1, j)) * inv_2h;
            if (g.dim == 2) {
                if (j == 0)
                    out.comp[1][idx] = (f.at(i, 1) - f.at(i, 0)) * inv_h;
                else if (j == g.cells[1] - 1)
                    out.comp[1][idx] = (f.at(i, j) - f.at(i, j - 1)) * inv_h;
                else
                    out.comp[1][idx] = (f.at(i, j + 1) - f.at(i, j - 1)) * inv_2h;
            }
        }
    return out;
}

ScalarField crop_centered(const ScalarField& f, double half) {
    const Grid& g = f.grid;
    int lo0 = g.cells[0], hi0 = -1, lo1 = g.dim == 2 ? g.cells[1] : 0, hi1 = g.dim == 2 ? -1 : 0;
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
            const Vec2 x = g.cell_center(i, j);
            const double sup = std::max(std::fabs(x[0]), g.dim == 2 ? std::fabs(x[1]) : 0.0);
            if (sup < half) {
                lo0 = std::min(lo0, i);
                hi0 = std::max(hi0, i);
                if (g.dim == 2) {
                    lo1 = std::min(lo1, j);
                    hi1 = std::max(hi1, j);
                }
            }
        }
    if (hi0 < lo0) throw DomainTooSmall("crop window contains no cells");
    Grid cg = g;
    cg.origin[0] = g.origin[0] + lo0 * g.spacing();
    cg.cells[0] = hi0 - lo0 + 1;
    if (g.dim == 2) {
        cg.origin[1] = g.origin[1] + lo1 * g.spacing();
        cg.cells[1] = hi1 - lo1 + 1;
    }
    ScalarField out(cg);
    for (int j = 0; j < cg.cells[1]; ++j)
        for (int i = 0; i < cg.cells[0]; ++i)
            out.at(i, j) = f.at(i + lo0, g.dim == 2 ? j + lo1 : 0);
    return out;
}

double lp_norm_field(const ScalarField& f, double p) {
    const double hd = std::pow(f.grid.spacing(), f.grid.dim);
    Compensated acc;
    for (double v : f.values) acc.add(pow_p(std::fabs(v), p));
    return std::pow(hd * acc.get(), 1.0 / p);
}

double face_grad_l2(const ScalarField& f) {
    const Grid& g = f.grid;
    const double h = g.spacing();
    Compensated acc;
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i + 1 < g.cells[0]; ++i) {
            const double d = (f.at(i + 1, j) - f.at(i, j)) / h;
            acc.add(d * d);
        }
    if (g.dim == 2)
        for (int j = 0; j + 1 < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const double d = (f.at(i, j + 1) - f.at(i, j)) / h;
                acc.add(d * d);
            }
    return std::sqrt(std::pow(h, g.dim) * acc.get());
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t m = xs.size();
    LineFit fit;
    if (m < 2) throw InsufficientRadii("line fit needs at least 2 points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw InsufficientRadii("line fit needs distinct abscissae");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double pred = fit.intercept + fit.slope * xs[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - my) * (ys[i] - my);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

DecayFit ball_average_decay(const ScalarField& f, const std::vector<double>& radii) {
    if (radii.size() < 3) throw InsufficientRadii("ball_average_decay needs >= 3 radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw InsufficientRadii("radii must be strictly increasing");
    const Grid& g = f.grid;
    const auto ext = g.extent();
    const double rmax = radii.back();
    for (int axis = 0; axis < g.dim; ++axis)
        if (g.origin[axis] > -rmax || g.origin[axis] + ext[axis] < rmax)
            throw DomainTooSmall("largest radius exceeds the sampled extent");

    DecayFit fit;
    fit.radii = radii;
    std::vector<Compensated> sums(radii.size());
    std::vector<std::int64_t> counts(radii.size(), 0);
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
            const Vec2 x = g.cell_center(i, j);
            const double r = g.dim == 1 ? std::fabs(x[0]) : std::hypot(x[0], x[1]);
            const double v = std::fabs(f.at(i, j));
            for (std::size_t k = 0; k < radii.size(); ++k)
                if (r <= radii[k]) {
                    sums[k].add(v);
                    ++counts[k];
                }
        }
    fit.averaged_values.resize(radii.size());
    bool any_zero = false;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        fit.averaged_values[k] = counts[k] > 0 ? sums[k].get() / counts[k] : 0.0;
        if (!(fit.averaged_values[k] > 0.0)) any_zero = true;
    }
    if (any_zero) {
        fit.degenerate = true;
        fit.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
        fit.r2 = 0.0;
        return fit;
    }
    std::vector<double> lx(radii.size()), ly(radii.size());
    for (std::size_t k = 0; k < radii.size(); ++k) {
        lx[k] = std::log(radii[k]);
        ly[k] = std::log(fit.averaged_values[k]);
    }
    const LineFit lf = fit_line(lx, ly);
    fit.fitted_exponent = lf.slope;
    fit.r2 = lf.r2;
    return fit;
}

std::vector<double> weak_star_vanishing(const ScalarField& f,
                                        const std::vector<double>& eps_list,
                                        const std::function<double(Vec2)>& phi,
                                        double support_radius) {
    const Grid& g = f.grid;
    const auto ext = g.extent();
    std::vector<double> integrals;
    integrals.reserve(eps_list.size());
    for (double eps : eps_list) {
        if (!(eps > 0.0)) throw DomainTooSmall("eps must be positive");
        const double need = support_radius / eps;
        for (int axis = 0; axis < g.dim; ++axis)
            if (g.origin[axis] > -need || g.origin[axis] + ext[axis] < need)
                throw DomainTooSmall("x/eps leaves the sampled extent");
        // ∫|f(x/ε)|φ(x)dx = ε^d ∫|f(y)|φ(εy)dy, midpoint rule on f's own grid
        Compensated acc;
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const Vec2 y = g.cell_center(i, j);
                const Vec2 x{eps * y[0], eps * y[1]};
                const double w = phi(x);
                if (w != 0.0) acc.add(std::fabs(f.at(i, j)) * w);
            }
        const double hd = std::pow(g.spacing(), g.dim);
        integrals.push_back(std::pow(eps, g.dim) * hd * acc.get());
    }
    return integrals;
}

ScalarField potential_from_discrete_gradient(const ShiftedDifferenceField& T,
                                             const ScalarField* base) {
    const Grid& g = T.source_grid;
    g.validate();
    const int n = g.cells_per_unit;
    const int d = g.dim;

    double scale = 1.0;
    for (int axis = 0; axis < d; ++axis)
        for (double v : T.comp[axis].values) scale = std::max(scale, std::fabs(v));

    if (d == 2) {
        // discrete Cauchy compatibility δ₂T₁ = δ₁T₂ on the overlap
        const int m0 = g.cells[0] - n;
        const int m1 = g.cells[1] - n;
        double worst = 0.0;
        for (int j = 0; j < m1; ++j)
            for (int i = 0; i < m0; ++i) {
                const double d2t1 = T.comp[0].at(i, j + n) - T.comp[0].at(i, j);
                const double d1t2 = T.comp[1].at(i + n, j) - T.comp[1].at(i, j);
                worst = std::max(worst, std::fabs(d2t1 - d1t2));
            }
        if (worst > 1e-12 * scale)
            throw IncompatibleField("discrete Cauchy compatibility check failed");
    }

    if (base) {
        const Grid& bg = base->grid;
        if (bg.dim != d || bg.cells_per_unit != n || bg.cells[0] != n ||
            (d == 2 && bg.cells[1] != n))
            throw IncompatibleField("base data must cover exactly one unit cell");
    }

    ScalarField u(g);
    // A(i0,i1) = Σ_{m<q0} T₁(r0+mn, i1), built by striding n cells at a time
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i)
            u.at(i, j) = (i >= n) ? u.at(i - n, j) + T.comp[0].at(i - n, j) : 0.0;
    if (d == 2) {
        // add B(r0,i1) = Σ_{m<q1} T₂(r0, r1+mn); B depends on i0 only via r0
        std::vector<double> bcol(static_cast<std::size_t>(n) * g.cells[1]);
        for (int j = 0; j < g.cells[1]; ++j)
            for (int r = 0; r < n; ++r)
                bcol[static_cast<std::size_t>(j) * n + r] =
                    (j >= n) ? bcol[static_cast<std::size_t>(j - n) * n + r] +
                                   T.comp[1].at(r, j - n)
                             : 0.0;
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i)
                u.at(i, j) += bcol[static_cast<std::size_t>(j) * n + (i % n)];
    }
    if (base) {
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i)
                u.at(i, j) += base->at(i % n, d == 2 ? j % n : 0);
    }
    return u;
}

AnnulusMeanResult annulus_periodic_mean(const ScalarField& f, int N, double p) {
    if (N < 1) throw GridTooSmall("annulus mean needs N >= 1");
    if (p < 1.0) throw ExponentOutOfRange("annulus mean requires p >= 1");
    const Grid& g = f.grid;
    const int d = g.dim;
    const int n = g.cells_per_unit;
    const auto ext = g.extent();
    for (int axis = 0; axis < d; ++axis) {
        if (g.origin[axis] > -6.0 * N || g.origin[axis] + ext[axis] < 6.0 * N + 1.0)
            throw GridTooSmall("annulus mean needs the grid to cover Q_6N plus one unit");
        if (std::fabs(g.origin[axis] - std::round(g.origin[axis])) > 1e-12)
            throw GridTooSmall("annulus mean needs an integer-aligned origin");
    }

    AnnulusMeanResult res;
    res.disconnected_warning = (d == 1);

    // index frame I_N = {k : [k,k+1]^d ⊂ Q_2N \ Q_N}
    std::vector<std::array<int, 2>> frame;
    const auto outside = [N](int k) { return k >= N || k + 1 <= -N; };
    if (d == 1) {
        for (int k = -2 * N; k <= 2 * N - 1; ++k)
            if (outside(k)) frame.push_back({k, 0});
    } else {
        for (int k1 = -2 * N; k1 <= 2 * N - 1; ++k1)
            for (int k0 = -2 * N; k0 <= 2 * N - 1; ++k0)
                if (outside(k0) || outside(k1)) frame.push_back({k0, k1});
    }

    const int base0 = static_cast<int>(std::llround(-g.origin[0] / g.spacing()));
    const int base1 = d == 2 ? static_cast<int>(std::llround(-g.origin[1] / g.spacing())) : 0;

    Grid ug = Grid::unit_cell(d, n);
    ScalarField fper(ug);
    for (int r1 = 0; r1 < (d == 2 ? n : 1); ++r1)
        for (int r0 = 0; r0 < n; ++r0) {
            Compensated acc;
            for (const auto& k : frame)
                acc.add(f.at(base0 + k[0] * n + r0, d == 2 ? base1 + k[1] * n + r1 : 0));
            fper.at(r0, r1) = acc.get() / static_cast<double>(frame.size());
        }
    res.periodic_part = fper;

    const double hd = std::pow(g.spacing(), d);
    const auto in_annulus = [&](Vec2 x, double lo, double hi) {
        const double m0 = std::fabs(x[0]);
        const double m1 = d == 2 ? std::fabs(x[1]) : 0.0;
        const double sup = std::max(m0, m1);
        return sup < hi && sup > lo;  // sup-norm annulus Q_hi \ Q_lo
    };

    const auto wrap = [n](int v) { return ((v % n) + n) % n; };

    // numerator ‖f − f_per,N‖_{L^p(A_N)}
    {
        Compensated acc;
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const Vec2 x = g.cell_center(i, j);
                if (!in_annulus(x, N, 2.0 * N)) continue;
                const double fp = fper.at(wrap(i - base0), d == 2 ? wrap(j - base1) : 0);
                acc.add(pow_p(std::fabs(f.at(i, j) - fp), p));
            }
        res.numerator = std::pow(hd * acc.get(), 1.0 / p);
    }
    // denominator N·‖δf‖_{L^p(Q_6N \ Q_N)}
    {
        ShiftedDifferenceField T = discrete_gradient(f);
        const int m0 = g.cells[0] - n;
        const int m1 = d == 2 ? g.cells[1] - n : 1;
        Compensated acc;
        for (int j = 0; j < m1; ++j)
            for (int i = 0; i < m0; ++i) {
                const Vec2 x = g.cell_center(i, j);
                if (!in_annulus(x, N, 6.0 * N)) continue;
                const double dx = T.comp[0].at(i, j);
                const double dy = d == 2 ? T.comp[1].at(i, j) : 0.0;
                acc.add(pow_p(std::hypot(dx, dy), p));
            }
        res.denominator = N * std::pow(hd * acc.get(), 1.0 / p);
    }
    if (res.denominator > 0.0)
        res.ratio = res.numerator / res.denominator;
    else
        res.ratio = res.numerator > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return res;
}

} // namespace homoglab
