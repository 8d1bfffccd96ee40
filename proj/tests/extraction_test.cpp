#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "homoglab/coefficient.hpp"
#include "homoglab/extraction.hpp"

using namespace homoglab;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double periodic_probe(Vec2 x) {
    return 2.0 + std::sin(kTwoPi * x[0]) + 0.5 * std::cos(kTwoPi * x[1]);
}

double bump(Vec2 x) {
    return 3.0 * std::exp(-4.0 * (x[0] * x[0] + x[1] * x[1]));
}

ScalarField sample(const Grid& g, double (*fn)(Vec2)) {
    ScalarField f(g);
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) f.at(i, j) = fn(g.cell_center(i, j));
    return f;
}
} // namespace

TEST_CASE("cesaro extraction is exact on purely periodic data") {
    const Grid g = Grid::centered_box(2, 8, 8);
    const ScalarField f = sample(g, periodic_probe);
    const Decomposition dec = cesaro_periodic_part(f, 6, 1.5);
    CHECK_FALSE(dec.non_convergent);
    CHECK(dec.n_used <= 3);
    // every translate of a 1-periodic sample coincides, so the mean is exact
    const Grid& ug = dec.periodic_part.grid;
    for (int j = 0; j < ug.cells[1]; ++j)
        for (int i = 0; i < ug.cells[0]; ++i)
            CHECK(dec.periodic_part.at(i, j) ==
                  doctest::Approx(periodic_probe(ug.cell_center(i, j))).epsilon(1e-12));
    for (double v : dec.perturbation.values) CHECK(std::fabs(v) < 1e-12);
}

TEST_CASE("cesaro extraction splits periodic-plus-bump data") {
    const Grid g = Grid::centered_box(2, 8, 4);
    ScalarField f = sample(g, periodic_probe);
    const ScalarField b = sample(g, bump);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += b.values[i];
    const Decomposition dec = cesaro_periodic_part(f, 6, 1.5);
    // the bump leaks into the mean only through 1/#I_N of its mass
    const Grid& ug = dec.periodic_part.grid;
    for (int j = 0; j < ug.cells[1]; ++j)
        for (int i = 0; i < ug.cells[0]; ++i)
            CHECK(std::fabs(dec.periodic_part.at(i, j) -
                            periodic_probe(ug.cell_center(i, j))) < 0.05);
    // ... so the perturbation tracks the bump at the same accuracy
    for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i)
            CHECK(std::fabs(dec.perturbation.at(i, j) - b.at(i, j)) < 0.05);
    CHECK(std::isfinite(dec.gns_ratio));
    CHECK(dec.gns_ratio > 0.0);
}

TEST_CASE("slowly drifting radial coefficients are flagged non-convergent") {
    const Grid g = Grid::centered_box(2, 7, 4);
    for (int kind = 0; kind < 2; ++kind) {
        const CoefficientSpec spec = kind == 0 ? CoefficientSpec::radial_log_osc(2.0, 1.0)
                                               : CoefficientSpec::radial_iter_log_osc(2.0, 1.0);
        ScalarField f(g);
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i)
                f.at(i, j) = spec.eval(g.cell_center(i, j), 2).a00;
        const Decomposition dec = cesaro_periodic_part(f, 6, 1.5);
        CHECK(dec.non_convergent);
        CHECK(dec.n_used == 6);
        REQUIRE(!dec.convergence_trace.empty());
        CHECK(dec.convergence_trace.back().second >= 1e-4);
    }
}

TEST_CASE("extraction validates its inputs") {
    const Grid small = Grid::centered_box(2, 3, 4);
    const ScalarField f(small, 1.0);
    CHECK_THROWS_AS(cesaro_periodic_part(f, 6, 1.5), GridTooSmall);
    CHECK_THROWS_AS(cesaro_periodic_part(f, 0, 1.5), GridTooSmall);
}

TEST_CASE("discrete Sobolev inequality check on a bump") {
    const Grid g = Grid::centered_box(2, 8, 8);
    ScalarField f = sample(g, periodic_probe);
    const ScalarField b = sample(g, bump);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += b.values[i];
    const GnsReport rep = gns_verify(f, 1.5);
    CHECK_FALSE(rep.zero_over_zero);
    CHECK(rep.lp_of_delta > 0.0);
    CHECK(std::isfinite(rep.ratio));
    CHECK(rep.ratio > 0.0);

    const ScalarField c(g, 4.0);
    const GnsReport rc = gns_verify(c, 1.5);
    CHECK(rc.zero_over_zero);
    CHECK(rc.ratio == 0.0);

    CHECK_THROWS_AS(gns_verify(f, 2.0), ExponentOutOfRange);
    CHECK_THROWS_AS(gns_verify(f, 0.5), ExponentOutOfRange);
}

TEST_CASE("Holder-to-Lebesgue exponent formula") {
    // q = (p(alpha + d) - d)/alpha
    CHECK(holder_lebesgue_exponent(4.0 / 3.0, 0.5, 1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(holder_lebesgue_exponent(1.5, 0.5, 2) == doctest::Approx(3.5).epsilon(1e-15));
    // alpha -> 1 recovers q = p(1 + d) - d
    CHECK(holder_lebesgue_exponent(2.0, 0.999, 2) ==
          doctest::Approx((2.0 * 2.999 - 2.0) / 0.999).epsilon(1e-15));
    CHECK_THROWS_AS(holder_lebesgue_exponent(0.5, 0.5, 2), ExponentOutOfRange);
    CHECK_THROWS_AS(holder_lebesgue_exponent(1.5, 1.0, 2), ExponentOutOfRange);
    CHECK_THROWS_AS(holder_lebesgue_exponent(1.5, 0.0, 2), ExponentOutOfRange);
}
