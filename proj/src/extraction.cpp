#include "homoglab/extraction.hpp"

#include <cmath>
#include <limits>

namespace homoglab {

namespace {

struct Shell {
    std::vector<std::array<int, 2>> ks;
};

/// Lattice vectors with N-1 < |k|_2 ≤ N (ties at |k| = N included).
Shell lattice_shell(int dim, int N) {
    Shell s;
    const auto lo2 = static_cast<std::int64_t>(N - 1) * (N - 1);
    const auto hi2 = static_cast<std::int64_t>(N) * N;
    if (dim == 1) {
        for (int k = -N; k <= N; ++k) {
            const std::int64_t r2 = static_cast<std::int64_t>(k) * k;
            if (r2 > lo2 && r2 <= hi2) s.ks.push_back({k, 0});
        }
    } else {
        for (int k1 = -N; k1 <= N; ++k1)
            for (int k0 = -N; k0 <= N; ++k0) {
                const std::int64_t r2 = static_cast<std::int64_t>(k0) * k0 +
                                        static_cast<std::int64_t>(k1) * k1;
                if (r2 > lo2 && r2 <= hi2) s.ks.push_back({k0, k1});
            }
    }
    return s;
}

} // namespace

Decomposition cesaro_periodic_part(const ScalarField& f, int N_max, double p) {
    const Grid& g = f.grid;
    g.validate();
    if (N_max < 1) throw GridTooSmall("cesaro_periodic_part needs N_max >= 1");
    const int d = g.dim;
    const int n = g.cells_per_unit;
    const auto ext = g.extent();
    for (int axis = 0; axis < d; ++axis) {
        if (g.origin[axis] > -(N_max + 1.0) || g.origin[axis] + ext[axis] < N_max + 1.0)
            throw GridTooSmall("grid must cover [-N_max-1, N_max+1]^d");
        if (std::fabs(g.origin[axis] - std::round(g.origin[axis])) > 1e-12)
            throw GridTooSmall("cesaro extraction needs an integer-aligned origin");
    }
    const int base0 = static_cast<int>(std::llround(-g.origin[0] / g.spacing()));
    const int base1 = d == 2 ? static_cast<int>(std::llround(-g.origin[1] / g.spacing())) : 0;

    const int nb1 = d == 2 ? n : 1;
    const double hd = std::pow(g.spacing(), d);
    const double tol = 1e-4;

    Decomposition dec;
    std::vector<double> sum(static_cast<std::size_t>(n) * nb1, 0.0);
    std::vector<double> prev;  // previous Cesàro mean
    std::int64_t count = 0;
    // the index set I_N starts at N = 1 and always contains the origin, so
    // seed with k = 0 and add Euclidean shells.
    for (int r1 = 0; r1 < nb1; ++r1)
        for (int r0 = 0; r0 < n; ++r0)
            sum[static_cast<std::size_t>(r1) * n + r0] =
                f.at(base0 + r0, d == 2 ? base1 + r1 : 0);
    count = 1;

    bool converged = false;
    std::vector<double> mean(sum.size());
    for (int N = 1; N <= N_max; ++N) {
        const Shell shell = lattice_shell(d, N);
        for (int r1 = 0; r1 < nb1; ++r1)
            for (int r0 = 0; r0 < n; ++r0) {
                double acc = 0.0;
                for (const auto& k : shell.ks)
                    acc += f.at(base0 + k[0] * n + r0, d == 2 ? base1 + k[1] * n + r1 : 0);
                sum[static_cast<std::size_t>(r1) * n + r0] += acc;
            }
        count += static_cast<std::int64_t>(shell.ks.size());
        for (std::size_t i = 0; i < sum.size(); ++i)
            mean[i] = sum[i] / static_cast<double>(count);
        if (!prev.empty()) {
            double l1 = 0.0;
            for (std::size_t i = 0; i < sum.size(); ++i)
                l1 += std::fabs(mean[i] - prev[i]);
            l1 *= hd;
            dec.convergence_trace.emplace_back(N, l1);
            if (l1 < tol) {
                dec.n_used = N;
                converged = true;
                break;
            }
        }
        prev = mean;
    }
    if (!converged) {
        dec.n_used = N_max;
        dec.non_convergent = true;
    }

    Grid ug = Grid::unit_cell(d, n);
    dec.periodic_part = ScalarField(ug);
    for (std::size_t i = 0; i < mean.size(); ++i) dec.periodic_part.values[i] = mean[i];

    // perturbation f − wrap(f_per) on the full sample domain
    const auto wrap = [n](int v) { return ((v % n) + n) % n; };
    dec.perturbation = ScalarField(g);
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i)
            dec.perturbation.at(i, j) =
                f.at(i, j) -
                dec.periodic_part.at(wrap(i - base0), d == 2 ? wrap(j - base1) : 0);

    dec.gns_ratio = std::numeric_limits<double>::quiet_NaN();
    if (p < d) {
        const NormReport nr = norms(dec.perturbation, p);
        // δ(wrap(f_per)) vanishes identically, so δ(perturbation) = δf
        dec.gns_ratio = nr.lp_of_delta > 0.0
                            ? nr.ep_norm / nr.lp_of_delta
                            : (nr.ep_norm > 0.0 ? std::numeric_limits<double>::infinity()
                                                : 0.0);
    }
    return dec;
}

GnsReport gns_verify(const ScalarField& f, double p) {
    const Grid& g = f.grid;
    if (!(p >= 1.0) || !(p < g.dim))
        throw ExponentOutOfRange("gns_verify requires 1 <= p < d");
    const auto ext = g.extent();
    for (int axis = 0; axis < g.dim; ++axis)
        if (g.origin[axis] > -8.0 || g.origin[axis] + ext[axis] < 8.0)
            throw GridTooSmall("gns_verify needs a domain covering [-8,8]^d");
    // largest Cesàro radius the sample supports
    double cover = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < g.dim; ++axis)
        cover = std::min({cover, -g.origin[axis], g.origin[axis] + ext[axis]});
    const int n_max = static_cast<int>(std::floor(cover - 1.0));

    const Decomposition dec = cesaro_periodic_part(f, n_max, p);
    const NormReport nr = norms(dec.perturbation, p);
    GnsReport rep;
    rep.ep_norm_of_difference = nr.ep_norm;
    rep.lp_of_delta = nr.lp_of_delta;
    rep.n_used = dec.n_used;
    const double tiny = 1e-14;
    if (nr.ep_norm < tiny && nr.lp_of_delta < tiny) {
        rep.zero_over_zero = true;
        rep.ratio = 0.0;
    } else {
        rep.ratio = nr.ep_norm / nr.lp_of_delta;
    }
    return rep;
}

double holder_lebesgue_exponent(double p, double alpha, int d) {
    if (!(p >= 1.0) || !(alpha > 0.0) || !(alpha < 1.0) || d < 1)
        throw ExponentOutOfRange("holder_lebesgue_exponent needs p >= 1, 0 < alpha < 1, d >= 1");
    return (p * (alpha + d) - d) / alpha;
}

} // namespace homoglab
