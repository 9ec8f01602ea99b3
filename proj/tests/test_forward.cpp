#include <catch_amalgamated.hpp>

#include "common.hpp"
#include "oracle_values.hpp"

using namespace romembed;
using Catch::Approx;

TEST_CASE("uniform discretization")
{
    auto sys = discretize(testing::constant(1.0, 1.0), 4);
    REQUIRE(sys.primary_steps.size() == 4);
    for (double d : sys.primary_steps) CHECK(d == Approx(0.25));
    CHECK(sys.boundary == Boundary::dirichlet_far);

    auto open = discretize(MediumProfile::preset("smooth_bump", 2.0, MediumKind::semi_infinite), 100);
    CHECK(open.boundary == Boundary::sommerfeld);
    double sum = 0.0;
    for (double d : open.primary_steps) sum += d;
    CHECK(sum == Approx(2.0).epsilon(1e-13));
}

TEST_CASE("cell speeds are point samples")
{
    auto p = MediumProfile::preset("smooth_bump", 2.0, MediumKind::bounded);
    auto sys = discretize(p, 4000);
    double h = 2.0 / 4000;
    for (int j : {1, 17, 1999, 2000, 3999}) CHECK(sys.cell_speeds[j] == p.speed(j * h));
    double sum = 0.0;
    for (double d : sys.primary_steps) sum += d;
    CHECK(sum == Approx(2.0).epsilon(1e-13));
}

TEST_CASE("impedance of a homogeneous layer converges to tanh")
{
    auto p = testing::constant(1.0, 1.0);
    std::vector<double> err;
    for (int N : {500, 1000, 2000, 4000}) err.push_back(std::abs(impedance(discretize(p, N), 1.0) - oracle::tanh1));
    for (size_t k = 1; k < err.size(); ++k) CHECK(std::log2(err[k - 1] / err[k]) >= 1.9);
    CHECK(err.back() < 1e-6);
}

TEST_CASE("homogeneous open medium has constant impedance")
{
    // the closure is exact in the continuum; the grid leaves an O(h^2) reflection
    auto p = testing::constant(1.0, 1.0, MediumKind::semi_infinite);
    cplx s(1.0, 0.3);
    std::vector<double> err;
    for (int N : {500, 1000, 2000}) err.push_back(std::abs(impedance(discretize(p, N), s) - 1.0));
    for (size_t k = 1; k < err.size(); ++k) CHECK(std::log2(err[k - 1] / err[k]) >= 1.9);
    CHECK(err.back() < 1e-6);
    auto sm = sample_contour(discretize(p, 2000), 0.1, 10.0, 25, 0.2);
    for (cplx f : sm.f) CHECK(std::abs(f - 1.0) < 1e-4);
}

TEST_CASE("conjugate symmetry and contour layout")
{
    auto sys = discretize(MediumProfile::preset("smoothed_step", 2.0, MediumKind::bounded), 800);
    cplx s(0.3, 4.1);
    CHECK(testing::rel(impedance(sys, std::conj(s)), std::conj(impedance(sys, s))) < 1e-14);
    auto sm = sample_contour(sys, 1.0, 5.0, 9, 0.1, Spacing::log);
    REQUIRE(sm.size() == 18);
    for (size_t k = 0; k < sm.size(); k += 2) {
        CHECK(sm.s[k + 1] == std::conj(sm.s[k]));
        CHECK(sm.f[k + 1] == std::conj(sm.f[k]));
    }
    CHECK(sm.s.front().imag() == Approx(1.0));
    CHECK(sm.s[16].imag() == Approx(5.0));
}

TEST_CASE("resonance is finite off the axis")
{
    auto sys = discretize(testing::constant(1.0, 1.0), 1000);
    double w1 = 0.5 * std::numbers::pi;
    double at = std::abs(impedance(sys, cplx(1e-9, w1)));
    double off = std::abs(impedance(sys, cplx(0.5, w1)));
    CHECK(at > 1e6);
    CHECK(off < 10.0);
    CHECK_THROWS_AS(impedance(sys, 0.0), std::domain_error);
}

TEST_CASE("singular fine system reports the pivot row")
{
    // two-cell hand system, s^2 equal to an eigenvalue of the 2x2 pencil
    std::vector<double> g{1.0}, gh{1.0};
    CHECK_THROWS_AS(staggered_solve(g, gh, {}, cplx(0.0, 1.0)), SolverBreakdown);
}

TEST_CASE("exact spectrum of a homogeneous layer")
{
    auto sys = discretize(testing::constant(1.0, 1.0), 4000);
    auto d = exact_spectrum(sys, 12);
    REQUIRE(d.size() == 12);
    for (int k = 1; k <= 12; ++k) {
        CHECK(std::abs(d.poles[k - 1] - cplx(0.0, (k - 0.5) * std::numbers::pi)) < 1e-6);
        CHECK(std::abs(d.residues[k - 1] - 1.0) < 1e-6);
    }
    auto d2 = exact_spectrum(discretize(testing::constant(1.0, 2.0), 4000), 1);
    CHECK(std::abs(d2.poles[0] - cplx(0.0, std::numbers::pi / 4)) < 1e-6);
    CHECK(std::abs(d2.residues[0] - 0.5) < 1e-6);
}

TEST_CASE("lossless spectra are real where they should be")
{
    auto d = exact_spectrum(discretize(MediumProfile::preset("bump_plus_reflector", 2.0, MediumKind::bounded), 2000), 20);
    CHECK(d.flavor == SpectralFlavor::lossless);
    for (size_t k = 0; k < d.size(); ++k) {
        CHECK(d.poles[k].real() == 0.0);
        CHECK(d.residues[k].imag() == 0.0);
        CHECK(d.residues[k].real() > 0.0);
        if (k) CHECK(d.poles[k].imag() > d.poles[k - 1].imag());
    }
}

TEST_CASE("spectrum reproduces the fine impedance")
{
    // the raw spectrum of the same grid is exact for that grid
    auto sys = discretize(MediumProfile::preset("smooth_bump", 2.0, MediumKind::bounded), 64);
    auto d = detail::raw_spectrum(sys, 64);
    for (cplx s : {cplx(0.5, 0.0), cplx(0.2, 3.0), cplx(1.0, -7.0)})
        CHECK(testing::rel(eval_pole_residue(d, s), impedance(sys, s)) < 1e-9);
}

TEST_CASE("open systems have no real spectrum")
{
    auto sys = discretize(testing::constant(1.0, 1.0, MediumKind::semi_infinite), 200);
    CHECK_THROWS(exact_spectrum(sys, 3));
}
