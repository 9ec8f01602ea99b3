#include <catch_amalgamated.hpp>

#include "common.hpp"

using namespace romembed;
using Catch::Approx;

TEST_CASE("lossless data gives no losses and the plain Krein curve")
{
    auto p = MediumProfile::preset("smooth_bump", 2.0, MediumKind::bounded);
    auto d = exact_spectrum(discretize(p, 4000), 20);
    auto e = embed_open(d);
    double scale = 0.0;
    for (cplx g : e.weights.gamma) scale = std::max(scale, std::abs(g));
    for (size_t i = 0; i < e.losses.n(); ++i) {
        CHECK(std::abs(e.losses.r[i]) <= 1e-8 * scale);
        CHECK(std::abs(e.losses.r_hat[i]) <= 1e-8 * scale);
    }
    auto k = krein_curve(extract_gamma(lanczos(assemble(d))));
    for (size_t j = 0; j < k.nodes.size(); ++j) CHECK(e.curve.nodes[j] == Approx(k.nodes[j]).epsilon(1e-12));
    CHECK(sommerfeld_pattern(e.losses, 0.05).result == PatternResult::indeterminate);
}

TEST_CASE("trace identity and loss bookkeeping")
{
    SpectralData d;
    d.poles = {{0.2, 1.0}, {0.05, 2.4}, {0.3, 3.9}, {0.1, 5.5}};
    d.residues = {{0.4, 0.05}, {0.3, 0.02}, {0.5, -0.1}, {0.2, 0.01}};
    auto e = embed_open(d);
    CHECK(e.trace_residual <= 1e-9);
    cplx sum = 0.0;
    for (cplx a : e.rom.alpha) sum += a;
    CHECK(sum.real() > 0.0);
    CHECK(std::abs(loss_trace(e.losses, e.weights) - sum) <= 1e-10 * std::abs(sum));
    // r_i sits on a node, rh_i between nodes
    for (size_t i = 0; i < e.losses.n(); ++i) {
        CHECK(e.losses.position_r[i] == Approx(e.curve.nodes[i]).margin(1e-14));
        CHECK(e.losses.position_r_hat[i] == Approx(0.5 * (e.curve.nodes[i] + e.curve.nodes[i + 1])));
    }
    // the lossy ROM still reproduces the data
    for (cplx s : {cplx(0.5, 1.0), cplx(0.1, -4.0)})
        CHECK(testing::rel(eval_tridiagonal(e.weights, e.rom.alpha, s), eval_pole_residue(d, s)) < 1e-10);
}

TEST_CASE("negative damping is rejected")
{
    SpectralData d;
    d.poles = {{-0.1, 1.0}};
    d.residues = {0.5};
    CHECK_THROWS_AS(embed_open(d), std::invalid_argument);
}

TEST_CASE("loss coefficient size mismatch")
{
    TridiagonalROM rom;
    rom.alpha.assign(4, 0.0);
    GridWeights w{{1.0}, {1.0}};
    CHECK_THROWS_AS(loss_coefficients(rom, w), std::invalid_argument);
}

TEST_CASE("Sommerfeld loss pattern")
{
    LossProfile lp;
    lp.r = {0.0, 0.0, 0.0};
    lp.r_hat = {0.0, 0.0, 1.0};
    lp.position_r = {0.0, 1.0, 2.0};
    lp.position_r_hat = {0.5, 1.5, 2.5};
    CHECK(sommerfeld_pattern(lp, 0.05).result == PatternResult::match);
    lp.r_hat[1] = 0.2;
    lp.r[0] = 0.3;
    auto rep = sommerfeld_pattern(lp, 0.05);
    CHECK(rep.result == PatternResult::mismatch);
    CHECK(rep.violators == std::vector<std::string>{"r_1", "rh_2"});
    LossProfile zero = lp;
    zero.r.assign(3, 0.0);
    zero.r_hat.assign(3, 0.0);
    CHECK(sommerfeld_pattern(zero, 0.05).result == PatternResult::indeterminate);
}

TEST_CASE("a single loss on the last dual cell is recovered")
{
    // FD system with damping only in the last row, taken to pole-residue form
    GridWeights w{{0.3, 0.5, 0.4, 0.6, 0.35}, {0.45, 0.3, 0.55, 0.4, 0.5}};
    const int n = int(w.n());
    std::vector<cplx> alpha(2 * n, 0.0);
    alpha[2 * n - 1] = 0.8;
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        K(2 * j, 2 * j + 1) = 1.0 / w.gamma_hat[j];
        if (j > 0) K(2 * j, 2 * j - 1) = -1.0 / w.gamma_hat[j];
        K(2 * j + 1, 2 * j) = -1.0 / w.gamma[j];
        if (j + 1 < n) K(2 * j + 1, 2 * j + 2) = 1.0 / w.gamma[j];
    }
    for (int k = 0; k < 2 * n; ++k) K(k, k) += alpha[k];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(K);
    Eigen::MatrixXcd V = es.eigenvectors(), Vi = V.inverse();
    SpectralData d;
    for (int k = 0; k < 2 * n; ++k) {
        cplx mu = es.eigenvalues()[k];
        REQUIRE(std::abs(mu.imag()) > 1e-6);
        if (mu.imag() < 0) continue;
        d.poles.push_back(mu);
        d.residues.push_back(V(0, k) * Vi(k, 0) / w.gamma_hat[0]);
    }
    REQUIRE(int(d.size()) == n);
    cplx s(0.4, 1.3);
    REQUIRE(testing::rel(eval_pole_residue(d, s), eval_tridiagonal(w, alpha, s)) < 1e-12);

    auto e = embed_open(d);
    CHECK(e.trace_residual <= 1e-9);
    for (int j = 0; j < n; ++j) {
        CHECK(std::abs(e.weights.gamma[j] - w.gamma[j]) < 1e-9);
        CHECK(std::abs(e.weights.gamma_hat[j] - w.gamma_hat[j]) < 1e-9);
    }
    CHECK(std::abs(e.losses.r_hat[n - 1] - w.gamma[n - 1] * 0.8) < 1e-9);
    CHECK(sommerfeld_pattern(e.losses, 1e-6).result == PatternResult::match);
}
