#include "homoglab/solver.hpp"

#include <cmath>
#include <limits>

#include "homoglab/coefficient.hpp"

namespace homoglab {

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

} // namespace

std::int64_t DiscreteOperator::unknowns() const {
    if (mask.empty()) return grid.cell_count();
    std::int64_t c = 0;
    for (auto m : mask) c += m != 0;
    return c;
}

DiscreteOperator assemble(const MatrixField& a, BoundaryCondition bc,
                          InterfaceAveraging averaging,
                          const std::vector<std::uint8_t>* mask) {
    const Grid& g = a.grid;
    g.validate();
    const auto [lo, hi] = check_uniform_ellipticity(a);
    if (!(lo > 0.0)) throw EllipticityViolation("coefficient not elliptic on the grid");
    if (mask && bc != BoundaryCondition::DirichletZero)
        throw BadGrid("cell masks require DirichletZero");
    if (mask && static_cast<std::int64_t>(mask->size()) != g.cell_count())
        throw BadGrid("mask size does not match the grid");

    DiscreteOperator op;
    op.grid = g;
    op.bc = bc;
    if (mask) op.mask = *mask;

    const auto diag_entry = [&](int i0, int i1, int axis) {
        const SymMat m = a.at(g.index(i0, i1));
        return axis == 0 ? m.a00 : m.a11;
    };
    const auto face_avg = [&](double x, double y) {
        return averaging == InterfaceAveraging::Harmonic ? harmonic(x, y) : 0.5 * (x + y);
    };
    const auto cell_active = [&](int i0, int i1) {
        return !mask || (*mask)[static_cast<std::size_t>(g.index(i0, i1))] != 0;
    };

    for (int axis = 0; axis < g.dim; ++axis) {
        const int nf0 = axis == 0 ? g.cells[0] + 1 : g.cells[0];
        const int nf1 = axis == 1 ? g.cells[1] + 1 : g.cells[1];
        op.tface[axis].assign(static_cast<std::size_t>(nf0) * nf1, 0.0);
        for (int j = 0; j < nf1; ++j) {
            for (int i = 0; i < nf0; ++i) {
                const int f = axis == 0 ? i : j;           // face index along axis
                const int o = axis == 0 ? j : i;           // orthogonal cell index
                const int nc = g.cells[axis];
                double t = 0.0;
                const auto cell = [&](int c) {
                    return axis == 0 ? diag_entry(c, o, 0) : diag_entry(o, c, 1);
                };
                const auto act = [&](int c) {
                    return axis == 0 ? cell_active(c, o) : cell_active(o, c);
                };
                if (bc == BoundaryCondition::PeriodicZeroMean) {
                    const int left = (f - 1 + nc) % nc;
                    const int right = f % nc;
                    t = face_avg(cell(left), cell(right));
                } else {
                    const bool has_left = f > 0 && act(f - 1);
                    const bool has_right = f < nc && act(f);
                    if (has_left && has_right)
                        t = face_avg(cell(f - 1), cell(f));
                    else if (has_left)
                        t = 2.0 * cell(f - 1);  // half-cell distance to u = 0
                    else if (has_right)
                        t = 2.0 * cell(f);
                }
                op.tface[axis][static_cast<std::size_t>(j) * nf0 + i] = t;
            }
        }
    }

    if (g.dim == 2) {
        bool any = false;
        for (double v : a.a01)
            if (v != 0.0) { any = true; break; }
        if (any) op.offdiag = a.a01;
    }
    return op;
}

void DiscreteOperator::apply(const std::vector<double>& u, std::vector<double>& out) const {
    const Grid& g = grid;
    const int c0 = g.cells[0], c1 = g.cells[1];
    const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
    out.assign(u.size(), 0.0);
    const bool periodic = bc == BoundaryCondition::PeriodicZeroMean;

    const auto uval = [&](int i0, int i1) -> double {
        if (periodic) {
            i0 = (i0 + c0) % c0;
            i1 = (i1 + c1) % c1;
            return u[static_cast<std::size_t>(g.index(i0, i1))];
        }
        if (i0 < 0 || i0 >= c0 || i1 < 0 || i1 >= c1) return 0.0;
        if (!active(i0, i1)) return 0.0;
        return u[static_cast<std::size_t>(g.index(i0, i1))];
    };

    const int nfx = c0 + 1;
    for (int j = 0; j < c1; ++j) {
        for (int i = 0; i < c0; ++i) {
            if (!active(i, j)) continue;
            const double uc = u[static_cast<std::size_t>(g.index(i, j))];
            double acc = 0.0;
            const double tw = tface[0][static_cast<std::size_t>(j) * nfx + i];
            const double te = tface[0][static_cast<std::size_t>(j) * nfx + i + 1];
            acc += tw * (uc - uval(i - 1, j)) + te * (uc - uval(i + 1, j));
            if (g.dim == 2) {
                const double ts = tface[1][static_cast<std::size_t>(j) * c0 + i];
                const double tn = tface[1][static_cast<std::size_t>(j + 1) * c0 + i];
                acc += ts * (uc - uval(i, j - 1)) + tn * (uc - uval(i, j + 1));
            }
            out[static_cast<std::size_t>(g.index(i, j))] = acc * inv_h2;
        }
    }

    if (!offdiag.empty()) {
        // mixed term −G1(a01·G2 u) − G2(a01·G1 u) with centered differences;
        // G is skew-adjoint under zero (Dirichlet) or wrapped (periodic)
        // extension, so the total operator stays symmetric.
        const double inv_2h = 0.5 / g.spacing();
        std::vector<double> w1(u.size()), w2(u.size());
        for (int j = 0; j < c1; ++j)
            for (int i = 0; i < c0; ++i) {
                const auto idx = static_cast<std::size_t>(g.index(i, j));
                const double m = offdiag[idx];
                w1[idx] = m * (uval(i + 1, j) - uval(i - 1, j)) * inv_2h;
                w2[idx] = m * (uval(i, j + 1) - uval(i, j - 1)) * inv_2h;
            }
        const auto wval = [&](const std::vector<double>& w, int i0, int i1) -> double {
            if (periodic) {
                i0 = (i0 + c0) % c0;
                i1 = (i1 + c1) % c1;
                return w[static_cast<std::size_t>(g.index(i0, i1))];
            }
            if (i0 < 0 || i0 >= c0 || i1 < 0 || i1 >= c1) return 0.0;
            if (!active(i0, i1)) return 0.0;
            return w[static_cast<std::size_t>(g.index(i0, i1))];
        };
        for (int j = 0; j < c1; ++j)
            for (int i = 0; i < c0; ++i) {
                if (!active(i, j)) continue;
                const double g1 = (wval(w2, i + 1, j) - wval(w2, i - 1, j)) * inv_2h;
                const double g2 = (wval(w1, i, j + 1) - wval(w1, i, j - 1)) * inv_2h;
                out[static_cast<std::size_t>(g.index(i, j))] -= g1 + g2;
            }
    }
}

std::vector<double> DiscreteOperator::diagonal() const {
    const Grid& g = grid;
    const int c0 = g.cells[0], c1 = g.cells[1];
    const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
    std::vector<double> d(static_cast<std::size_t>(g.cell_count()), 1.0);
    const int nfx = c0 + 1;
    for (int j = 0; j < c1; ++j)
        for (int i = 0; i < c0; ++i) {
            if (!active(i, j)) continue;
            double acc = tface[0][static_cast<std::size_t>(j) * nfx + i] +
                         tface[0][static_cast<std::size_t>(j) * nfx + i + 1];
            if (g.dim == 2)
                acc += tface[1][static_cast<std::size_t>(j) * c0 + i] +
                       tface[1][static_cast<std::size_t>(j + 1) * c0 + i];
            d[static_cast<std::size_t>(g.index(i, j))] = acc * inv_h2;
        }
    return d;
}

std::pair<ScalarField, SolveStats> solve(const DiscreteOperator& op,
                                         const ScalarField* source,
                                         const VectorField* div_source,
                                         const SolveOptions& opts) {
    const Grid& g = op.grid;
    const int c0 = g.cells[0], c1 = g.cells[1];
    const auto nc = static_cast<std::size_t>(g.cell_count());
    const double h = g.spacing();
    const bool periodic = op.bc == BoundaryCondition::PeriodicZeroMean;

    if (source && !source->grid.same_layout(g))
        throw BadGrid("source grid does not match the operator");
    if (div_source && !div_source->grid.same_layout(g))
        throw BadGrid("div_source grid does not match the operator");

    // ---- right-hand side -------------------------------------------------
    std::vector<double> b(nc, 0.0);
    if (source)
        for (std::size_t i = 0; i < nc; ++i) b[i] = source->values[i];

    if (div_source) {
        // div g at cells; face values are arithmetic averages of the adjacent
        // cell samples, one-sided at Dirichlet boundaries and masked cells.
        const auto gval = [&](int axis, int i0, int i1, int j0, int j1) -> double {
            const auto& comp = div_source->comp[axis];
            const auto cellv = [&](int a0, int a1) -> double {
                if (periodic) {
                    a0 = (a0 + c0) % c0;
                    a1 = (a1 + c1) % c1;
                    return comp[static_cast<std::size_t>(g.index(a0, a1))];
                }
                if (a0 < 0 || a0 >= c0 || a1 < 0 || a1 >= c1 || !op.active(a0, a1))
                    return std::numeric_limits<double>::quiet_NaN();
                return comp[static_cast<std::size_t>(g.index(a0, a1))];
            };
            const double va = cellv(i0, i1);
            const double vb = cellv(j0, j1);
            if (std::isnan(va)) return std::isnan(vb) ? 0.0 : vb;
            if (std::isnan(vb)) return va;
            return 0.5 * (va + vb);
        };
        for (int j = 0; j < c1; ++j)
            for (int i = 0; i < c0; ++i) {
                if (!op.active(i, j)) continue;
                double div = gval(0, i, j, i + 1, j) - gval(0, i - 1, j, i, j);
                if (g.dim == 2) div += gval(1, i, j, i, j + 1) - gval(1, i, j - 1, i, j);
                b[static_cast<std::size_t>(g.index(i, j))] += div / h;
            }
    }

    if (opts.q_drift[0] != 0.0 || opts.q_drift[1] != 0.0) {
        // −div(a(∇u + q)) = rhs ⟹ extra source Σ_k q_k (t_{k+} − t_{k−})/h²·h
        const int nfx = c0 + 1;
        for (int j = 0; j < c1; ++j)
            for (int i = 0; i < c0; ++i) {
                if (!op.active(i, j)) continue;
                double extra = opts.q_drift[0] *
                               (op.tface[0][static_cast<std::size_t>(j) * nfx + i + 1] -
                                op.tface[0][static_cast<std::size_t>(j) * nfx + i]);
                if (g.dim == 2)
                    extra += opts.q_drift[1] *
                             (op.tface[1][static_cast<std::size_t>(j + 1) * c0 + i] -
                              op.tface[1][static_cast<std::size_t>(j) * c0 + i]);
                b[static_cast<std::size_t>(g.index(i, j))] += extra / h;
            }
    }

    if (!op.mask.empty())
        for (std::size_t i = 0; i < nc; ++i)
            if (!op.mask[i]) b[i] = 0.0;

    SolveStats stats;
    const auto mean_of = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    if (periodic) {
        stats.projected = true;
        double mx = 0.0;
        for (double x : b) mx = std::max(mx, std::fabs(x));
        const double mean = mean_of(b);
        if (std::fabs(mean) > 1e-9 * (1.0 + mx))
            throw Singular("periodic problem source is not compatible (nonzero mean)");
        for (double& x : b) x -= mean;
    }

    const auto dot = [&](const std::vector<double>& x, const std::vector<double>& y) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s;
    };

    const double bnorm = std::sqrt(dot(b, b));
    ScalarField u(g, 0.0);
    if (bnorm == 0.0) return {u, stats};

    const std::vector<double> diag = op.diagonal();
    const long cap = opts.max_iter > 0
                         ? opts.max_iter
                         : static_cast<long>(50.0 * std::sqrt(static_cast<double>(
                                                        op.unknowns()))) +
                               10000;

    std::vector<double> x(nc, 0.0), r = b, z(nc), p(nc), ap(nc);
    for (std::size_t i = 0; i < nc; ++i) z[i] = r[i] / diag[i];
    if (periodic) {
        const double m = mean_of(z);
        for (double& v : z) v -= m;
    }
    p = z;
    double rz = dot(r, z);
    double rel = 1.0;
    long it = 0;
    for (; it < cap; ++it) {
        rel = std::sqrt(dot(r, r)) / bnorm;
        if (rel <= opts.tol) break;
        op.apply(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) throw Singular("operator not positive definite on the iterate");
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < nc; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if (periodic) {
            const double mx2 = mean_of(x);
            const double mr = mean_of(r);
            for (std::size_t i = 0; i < nc; ++i) {
                x[i] -= mx2;
                r[i] -= mr;
            }
        }
        for (std::size_t i = 0; i < nc; ++i) z[i] = r[i] / diag[i];
        if (periodic) {
            const double mz = mean_of(z);
            for (double& v : z) v -= mz;
        }
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < nc; ++i) p[i] = z[i] + beta * p[i];
    }
    if (rel > opts.tol) throw NoConvergence("CG hit the iteration cap");
    stats.iterations = it;
    stats.rel_residual = rel;
    if (periodic) {
        const double m = mean_of(x);
        for (double& v : x) v -= m;
    }
    u.values = std::move(x);
    return {u, stats};
}

} // namespace homoglab
