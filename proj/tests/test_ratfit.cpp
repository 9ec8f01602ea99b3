#include <catch_amalgamated.hpp>

#include "common.hpp"

using namespace romembed;
using Catch::Approx;

namespace {

ImpedanceSamples sample_model(const SpectralData& d, double w_min, double w_max, int count, double shift)
{
    ImpedanceSamples out;
    for (int k = 0; k < count; ++k) {
        cplx s(shift, w_min + (w_max - w_min) * k / std::max(1, count - 1));
        out.s.push_back(s);
        out.f.push_back(eval_pole_residue(d, s));
        out.s.push_back(std::conj(s));
        out.f.push_back(eval_pole_residue(d, std::conj(s)));
    }
    return out;
}

SpectralData passive_model()
{
    SpectralData d;
    d.poles = {{0.05, 1.3}, {0.2, 3.7}, {0.1, 6.1}};
    d.residues = {{0.4, 0.05}, {0.3, -0.02}, {0.6, 0.1}};
    return d;
}

}  // namespace

TEST_CASE("initial poles")
{
    auto p = initial_poles(1.0, 10.0, 2, 0.01);
    REQUIRE(p.size() == 2);
    CHECK(std::abs(p[0] - cplx(0.01, 1.0)) < 1e-15);
    CHECK(std::abs(p[1] - cplx(0.1, 10.0)) < 1e-15);
    auto q = initial_poles(5.0, 5.0, 1, 0.01);
    CHECK(std::abs(q[0] - cplx(0.05, 5.0)) < 1e-15);
    auto r = initial_poles(2.0, 9.0, 5);
    for (size_t k = 1; k + 1 < r.size(); ++k) CHECK(r[k].imag() == Approx(0.5 * (r[k - 1].imag() + r[k + 1].imag())));
}

TEST_CASE("evaluation of pole-residue data")
{
    SpectralData d;
    d.poles = {cplx(0.0, 1.0)};
    d.residues = {0.5};
    CHECK(std::abs(eval_pole_residue(d, 1.0) - 0.5) < 1e-15);
    std::mt19937 rng(3);
    auto L = testing::random_lossless(rng, 5);
    CHECK(std::abs(eval_pole_residue(L, 0.0).imag()) < 1e-14);
    cplx s(0.3, 2.2);
    CHECK(testing::rel(eval_pole_residue(L, std::conj(s)), std::conj(eval_pole_residue(L, s))) < 1e-14);
}

TEST_CASE("relocation converges on rational data")
{
    auto truth = passive_model();
    auto sm = sample_model(truth, 0.2, 8.0, 200, 0.0);
    auto poles = initial_poles(0.2, 8.0, 3);
    for (int it = 0; it < 10; ++it) poles = relocate(sm.s, sm.f, poles);
    for (size_t k = 0; k < 3; ++k) CHECK(std::abs(poles[k] - truth.poles[k]) < 1e-6);
    // a fixed point stays put
    auto again = relocate(sm.s, sm.f, truth.poles);
    for (size_t k = 0; k < 3; ++k) CHECK(std::abs(again[k] - truth.poles[k]) < 1e-10);
}

TEST_CASE("residues for known poles")
{
    auto truth = passive_model();
    auto sm = sample_model(truth, 0.2, 8.0, 50, 0.1);
    auto d = residues(sm.s, sm.f, truth.poles);
    for (size_t k = 0; k < 3; ++k) CHECK(std::abs(d.residues[k] - truth.residues[k]) < 1e-9);

    std::mt19937 rng(11);
    auto L = testing::random_lossless(rng, 4, 10.0);
    auto sl = sample_model(L, 0.3, 12.0, 80, 0.2);
    auto dl = residues(sl.s, sl.f, L.poles);
    for (auto y : dl.residues) CHECK(std::abs(y.imag()) < 1e-8);

    // one sample and its conjugate determine one pair
    SpectralData one;
    one.poles = {cplx(0.1, 2.0)};
    one.residues = {cplx(0.7, 0.1)};
    auto s1 = sample_model(one, 1.0, 1.0, 1, 0.3);
    auto d1 = residues(s1.s, s1.f, one.poles);
    CHECK(std::abs(eval_pole_residue(d1, s1.s[0]) - s1.f[0]) < 1e-12);
    CHECK(std::abs(eval_pole_residue(d1, s1.s[1]) - s1.f[1]) < 1e-12);
}

TEST_CASE("degenerate sampling is rank deficient")
{
    auto truth = passive_model();
    auto sm = sample_model(truth, 1.0, 1.0, 20, 0.0);  // 20 copies of one frequency
    CHECK_THROWS_AS(relocate(sm.s, sm.f, truth.poles), RankDeficient);
    CHECK_THROWS_AS(residues(sm.s, sm.f, truth.poles), RankDeficient);
}

TEST_CASE("fit of exactly representable data")
{
    auto truth = passive_model();
    auto sm = sample_model(truth, 0.2, 8.0, 200, 0.0);
    auto r = fit(sm.s, sm.f, 3, 0.2, 8.0);
    CHECK(r.converged);
    CHECK(r.data.misfit <= 1e-8);
    CHECK(r.data.flavor == SpectralFlavor::passive);
    for (size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(r.data.poles[k] - truth.poles[k]) < 1e-7);
        CHECK(std::abs(r.data.residues[k] - truth.residues[k]) < 1e-7);
    }
    // misfit does not grow once converged
    for (size_t k = 1; k < r.misfit_history.size(); ++k)
        CHECK(r.misfit_history[k] <= r.misfit_history[k - 1] + 1e-12);
}

TEST_CASE("fit of the homogeneous layer finds the tanh ladder")
{
    auto sys = discretize(testing::constant(1.0, 1.0), 4000);
    // band holds exactly the lowest 12 poles (11.5 pi < 38 < 12.5 pi)
    auto sm = sample_contour(sys, 0.04, 38.0, 1000, 0.0);
    auto r = fit(sm.s, sm.f, 12, 0.04, 38.0);
    // the ladder beyond the band bends the in-band poles by a few 1e-4
    auto ex = exact_spectrum(sys, 12, {.richardson = false});
    for (int k = 0; k < 12; ++k) CHECK(std::abs(r.data.poles[k] - ex.poles[k]) < 1e-3);
    for (int k = 0; k < 12; ++k) CHECK(std::abs(r.data.poles[k] - cplx(0, (k + 0.5) * std::numbers::pi)) < 1e-3);
}

TEST_CASE("fitted poles are flipped into the stable half plane")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        auto L = testing::random_lossless(rng, 6, 12.0);
        auto sm = sample_model(L, 0.2, 14.0, 120, 0.05);
        auto r = fit(sm.s, sm.f, 8, 0.2, 14.0);  // more poles than the data carries
        for (auto p : r.data.poles) {
            CHECK(p.real() >= 0.0);
            CHECK(p.imag() >= 0.0);
        }
        for (size_t k = 1; k < r.data.size(); ++k) CHECK(r.data.poles[k].imag() >= r.data.poles[k - 1].imag());
    }
}
