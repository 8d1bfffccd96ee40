#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "homoglab/harness.hpp"

using namespace homoglab;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

CoefficientSpec trig_spec() {
    return CoefficientSpec::periodic_trig(2.0, {TrigTerm{1.0, {1, 0}, 0.0}}, 1.0);
}
} // namespace

TEST_CASE("exact quadrature solver reproduces the parabola for a = f = 1") {
    const Quad1DSolution s =
        quad_solve_1d([](double) { return 1.0; }, [](double) { return 1.0; }, 0.0, 1.0, 256);
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        const double x = s.nodes[i];
        CHECK(s.u[i] == doctest::Approx(0.5 * x * (1.0 - x)).epsilon(1e-12));
    }
    CHECK(s.eval(0.0) == doctest::Approx(0.0));
    CHECK(s.eval(0.5) == doctest::Approx(0.125).epsilon(1e-10));
}

TEST_CASE("the finite-volume path converges to the quadrature path at second order") {
    const CoefficientSpec spec = trig_spec();
    const EpsDescriptor eps = EpsDescriptor::literal(0.125);
    const auto f = [](double x) { return 1.0 + x; };
    const Quad1DSolution exact = solve_eps_interval(spec, eps, 0.0, 1.0, f, 4096);

    double errs[2];
    int k = 0;
    for (int cells : {256, 512}) {
        const Grid g = Grid::make(1, {0.0, 0.0}, {1, 1}, cells);
        ScalarField fs(g);
        for (int i = 0; i < g.cells[0]; ++i) fs.at(i) = f(g.cell_center(i, 0)[0]);
        const auto [u, stats] = solve_eps_fv(spec, eps, g, fs);
        double err = 0.0;
        for (int i = 0; i < g.cells[0]; ++i)
            err = std::max(err, std::fabs(u.at(i) - exact.eval(g.cell_center(i, 0)[0])));
        errs[k++] = err;
    }
    CHECK(errs[0] / errs[1] > 3.0);
    CHECK(errs[0] / errs[1] < 5.0);
}

TEST_CASE("literal and log-domain descriptors agree along the exp subsequence") {
    // eps = exp(-2*pi - y) is large enough to evaluate literally
    const double y = 0.4;
    const double eps_val = std::exp(-kTwoPi - y);
    const CoefficientSpec spec = CoefficientSpec::radial_log_osc(2.0, 1.0);
    const auto f = [](double) { return 1.0; };
    // equal panel counts so only the descriptor arithmetic differs
    const int panels = 1 << 16;
    const Quad1DSolution a = solve_eps_interval(spec, EpsDescriptor::literal(eps_val),
                                                1.0, 2.0, f, panels);
    const Quad1DSolution b = solve_eps_interval(spec, EpsDescriptor::exp_sequence(y, 1),
                                                1.0, 2.0, f, panels);
    for (std::size_t i = 0; i < a.u.size(); ++i)
        CHECK(std::fabs(a.u[i] - b.u[i]) < 1e-9);
}

TEST_CASE("the energy of the eps-solutions stays uniformly bounded") {
    const CoefficientSpec spec = trig_spec();
    const auto f = [](double) { return 1.0; };
    double prev_norm = 0.0;
    for (double eps : {0.25, 0.125, 0.0625, 0.03125}) {
        const Quad1DSolution s =
            solve_eps_interval(spec, EpsDescriptor::literal(eps), 0.0, 1.0, f);
        std::vector<double> du(s.u.size() - 1);
        for (std::size_t i = 0; i + 1 < s.u.size(); ++i)
            du[i] = (s.u[i + 1] - s.u[i]) / s.delta();
        double l2 = 0.0;
        for (double v : du) l2 += v * v * s.delta();
        l2 = std::sqrt(l2);
        // lambda = 1 ellipticity: ||u'||_L2 <= ||f||_{H^-1} <= ||f||_L2 = 1
        CHECK(l2 <= 1.0 + 1e-8);
        CHECK(l2 > 0.1);
        if (prev_norm > 0.0) CHECK(std::fabs(l2 - prev_norm) < 0.2);
        prev_norm = l2;
    }
}

TEST_CASE("first-order reconstruction with vanishing correctors returns u*") {
    const Grid g = Grid::make(1, {0.0, 0.0}, {1, 1}, 64);
    ScalarField u_star(g);
    for (int i = 0; i < g.cells[0]; ++i) {
        const double x = g.cell_center(i, 0)[0];
        u_star.at(i) = x * (1.0 - x);
    }
    const Grid cell = Grid::unit_cell(1, 32);
    MatrixField a(cell);
    for (std::int64_t i = 0; i < cell.cell_count(); ++i) a.set(i, SymMat{2.0, 0.0, 0.0});
    const auto c = periodic_corrector(a, 0);  // constant a => w = 0
    const ScalarField u1 = first_order_approx(u_star, {c}, 0.1);
    for (std::size_t i = 0; i < u1.values.size(); ++i)
        CHECK(u1.values[i] == doctest::Approx(u_star.values[i]).epsilon(1e-12));
}

TEST_CASE("the interior window trims a quarter of the diameter on each side") {
    const Grid g = Grid::make(1, {0.0, 0.0}, {1, 1}, 64);
    ScalarField f(g);
    for (int i = 0; i < g.cells[0]; ++i) f.at(i) = g.cell_center(i, 0)[0];
    const ScalarField w = interior_window(f);
    CHECK(w.grid.cells[0] == 32);
    CHECK(w.grid.origin[0] == doctest::Approx(0.25));
    CHECK(w.values.front() == doctest::Approx(0.25 + 0.5 * g.spacing()).epsilon(1e-12));
}

TEST_CASE("reference rate exponents, including the excluded cases") {
    CHECK(reference_mu(1.5, 2) == 1.0 / 3.0);  // (d - p)/p
    CHECK(reference_mu(0.8, 2) == 1.0);        // p < d/2 branch
    CHECK_THROWS_AS(reference_mu(1.0, 2), ExponentOutOfRange);  // p = d/2
    CHECK_THROWS_AS(reference_mu(2.0, 2), ExponentOutOfRange);  // p >= d
    CHECK(reference_nu(4.0, 2) == 0.5);  // q > d: d/q
    CHECK(reference_nu(1.5, 2) == 1.0);  // q < d
    CHECK_THROWS_AS(reference_nu(2.0, 2), ExponentOutOfRange);  // q = d
}

TEST_CASE("remainder_rates validates its input lists") {
    const std::vector<double> eps{0.5, 0.25, 0.125, 0.0625};
    const std::vector<double> e1{2.0, 1.0, 0.5, 0.25};
    CHECK_THROWS_AS(remainder_rates({0.5, 0.25, 0.25, 0.125}, e1, e1, e1, 2.0, 1.5, 0.5, 2),
                    BadGrid);
    CHECK_THROWS_AS(remainder_rates({0.25, 0.125, 0.0625}, {1.0, 0.5, 0.25},
                                    {1.0, 0.5, 0.25}, {1.0, 0.5, 0.25}, 2.0, 1.5, 0.5, 2),
                    InsufficientPoints);
    const SweepReport r = remainder_rates(eps, e1, e1, e1, 2.0, 1.5, 0.5, 2);
    CHECK(r.slope_l2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.mu_reference == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("1-d rate sweep tracks the first-order corrector scaling") {
    const std::vector<double> eps{1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0};
    const auto f = [](double x) { return 1.0 + 0.5 * x; };
    const SweepReport r = rate_sweep_1d(trig_spec(), f, eps, 0.4, 0.5, 2);
    CHECK(r.slope_l2 > 0.85);
    CHECK(r.slope_l2 < 1.15);
    CHECK(r.slope_grad_r > 0.8);
    CHECK(r.slope_grad_r < 1.2);
    CHECK(r.r2_l2 > 0.99);
    // without the corrector the gradient error does not vanish
    REQUIRE(r.err_grad_plain.size() == eps.size());
    CHECK(r.err_grad_plain.back() / r.err_grad_r.back() > 5.0);
}

TEST_CASE("the 1-d subsequence limit is attained and phase-dependent") {
    const auto f = [](double) { return 1.0; };
    const SubsequenceReport rep = counterexample_1d({1, 2, 3}, f, 0.0);
    REQUIRE(rep.distances.size() == 3);
    CHECK(rep.distances[0] > rep.distances[1]);
    CHECK(rep.distances[1] > rep.distances[2]);
    CHECK(rep.distances[2] < 1e-3 * rep.limit_norm);
    CHECK(rep.cross_branch_distance > 0.01 * rep.limit_norm);

    // zero source gives the zero solution on every branch
    const SubsequenceReport z = counterexample_1d({1, 2}, [](double) { return 0.0; }, 0.0);
    for (double dist : z.distances) CHECK(dist == 0.0);
    CHECK(z.limit_norm == 0.0);
}

TEST_CASE("the 2-d annulus counter-example separates its two limits") {
    const Counterexample2DResult res = counterexample_2d({1, 2}, 1.0, 32);
    CHECK(res.scaling_identity_error < 1e-12);
    for (const auto* br : {&res.branch1, &res.branch2}) {
        REQUIRE(br->distances.size() == 2);
        REQUIRE(br->perturbation_bound.size() == 2);
        for (std::size_t i = 0; i < br->distances.size(); ++i)
            CHECK(br->distances[i] <= br->perturbation_bound[i]);
        CHECK(br->coef_deviation[0] > br->coef_deviation[1]);
    }
    // vanishing source: both branch limits vanish identically
    const Counterexample2DResult z = counterexample_2d({1}, 0.0, 32);
    CHECK(z.branch1.limit_norm == 0.0);
    CHECK(z.branch2.limit_norm == 0.0);

    CHECK_THROWS_AS(counterexample_2d({1}, 1.0, 16), ResolutionInsufficient);
}

TEST_CASE("the finite-volume path enforces its oscillation resolution floor") {
    const Grid g = Grid::make(1, {0.0, 0.0}, {1, 1}, 32);
    const ScalarField f(g, 1.0);
    CHECK_THROWS_AS(solve_eps_fv(trig_spec(), EpsDescriptor::literal(1.0 / 64.0), g, f),
                    ResolutionInsufficient);
}

TEST_CASE("Simpson L2 norm against a closed form") {
    const int n = 201;
    std::vector<double> vals(n);
    const double delta = 1.0 / (n - 1);
    for (int i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = std::sin(kTwoPi * i * delta);
    CHECK(simpson_l2(vals, delta) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-8));
}
