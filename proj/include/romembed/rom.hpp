#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratfit.hpp"
#include "tridiag.hpp"

namespace romembed {

// Lambda = diag(l_1..l_n, conj l_1..conj l_n), y = (sqrt y_j, sqrt conj y_j)
struct LambdaY {
    std::vector<cplx> lambda, y;
    std::vector<std::string> warnings;
};

inline LambdaY assemble(const SpectralData& d)
{
    const size_t n = d.size();
    if (n == 0) throw std::invalid_argument("empty spectral data");
    LambdaY ly;
    ly.lambda.resize(2 * n);
    ly.y.resize(2 * n);
    for (size_t j = 0; j < n; ++j) {
        ly.lambda[j] = d.poles[j];
        ly.lambda[n + j] = std::conj(d.poles[j]);
        ly.y[j] = std::sqrt(d.residues[j]);
        ly.y[n + j] = std::sqrt(std::conj(d.residues[j]));
        if (d.residues[j] == 0.0) ly.warnings.push_back("zero residue at pair " + std::to_string(j + 1));
    }
    return ly;
}

// alpha_1..alpha_2n and beta_2..beta_2n (beta[k] is beta_{k+2})
struct TridiagonalROM {
    std::vector<cplx> alpha, beta;
    cplx norm_y = 0.0;  // y^T y
    std::vector<std::string> warnings;
    size_t n() const { return alpha.size() / 2; }
};

struct LanczosBreakdown : std::runtime_error {
    int step;  // 1-based index j of the vanishing beta_j
    explicit LanczosBreakdown(int j)
        : std::runtime_error("Lanczos breakdown: beta_" + std::to_string(j) + " vanished"), step(j) {}
};

struct LanczosOptions {
    // Full re-orthogonalisation in the bilinear form. The bare three-term
    // recurrence loses orthogonality already around n = 20 in double precision.
    bool reorthogonalize = true;
    double breakdown_tol = 1e-13;
    double warn_tol = 1e-8;
};

inline cplx bilinear(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    cplx s = 0.0;
    for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

// Lanczos for the complex symmetric diagonal matrix Lambda, orthogonality in x^T y.
inline TridiagonalROM lanczos(const LambdaY& ly, LanczosOptions opt = {})
{
    const size_t m = ly.lambda.size();
    double norm_lambda = 0.0;
    for (cplx l : ly.lambda) norm_lambda = std::max(norm_lambda, std::abs(l));
    TridiagonalROM rom;
    rom.norm_y = bilinear(ly.y, ly.y);
    if (rom.norm_y == 0.0) throw LanczosBreakdown(1);
    rom.alpha.resize(m);
    rom.beta.resize(m - 1);
    std::vector<std::vector<cplx>> Q;
    Q.reserve(m);
    std::vector<cplx> q(m), v(m);
    cplx sq = std::sqrt(rom.norm_y);
    for (size_t k = 0; k < m; ++k) q[k] = ly.y[k] / sq;
    Q.push_back(q);
    for (size_t j = 0; j < m; ++j) {
        const auto& qj = Q[j];
        for (size_t k = 0; k < m; ++k) v[k] = ly.lambda[k] * qj[k];
        rom.alpha[j] = bilinear(v, qj);
        for (size_t k = 0; k < m; ++k) v[k] -= rom.alpha[j] * qj[k];
        if (j > 0)
            for (size_t k = 0; k < m; ++k) v[k] -= rom.beta[j - 1] * Q[j - 1][k];
        if (j + 1 == m) break;
        if (opt.reorthogonalize)
            for (size_t i = 0; i <= j; ++i) {
                cplx c = bilinear(Q[i], v);
                for (size_t k = 0; k < m; ++k) v[k] -= c * Q[i][k];
            }
        cplx b = std::sqrt(bilinear(v, v));
        if (std::abs(b) <= opt.breakdown_tol * norm_lambda) throw LanczosBreakdown(int(j) + 2);
        if (std::abs(b) <= opt.warn_tol * norm_lambda)
            rom.warnings.push_back("near breakdown at beta_" + std::to_string(j + 2));
        rom.beta[j] = b;
        for (size_t k = 0; k < m; ++k) q[k] = v[k] / b;
        Q.push_back(q);
    }
    return rom;
}

// gamma[j] = g_{j+1}, gamma_hat[j] = gh_{j+1}
struct GridWeights {
    std::vector<cplx> gamma, gamma_hat;
    size_t n() const { return gamma.size(); }
};

inline GridWeights extract_gamma(const TridiagonalROM& rom)
{
    const size_t n = rom.n();
    GridWeights w;
    w.gamma.resize(n);
    w.gamma_hat.resize(n);
    w.gamma_hat[0] = 1.0 / rom.norm_y;
    for (size_t j = 1; j <= n; ++j) {
        cplx b2 = rom.beta[2 * j - 2] * rom.beta[2 * j - 2];  // beta_{2j}^2
        if (b2 == 0.0) throw LanczosBreakdown(int(2 * j));
        w.gamma[j - 1] = -1.0 / (b2 * w.gamma_hat[j - 1]);
        if (j < n) {
            cplx b3 = rom.beta[2 * j - 1] * rom.beta[2 * j - 1];  // beta_{2j+1}^2
            if (b3 == 0.0) throw LanczosBreakdown(int(2 * j + 1));
            w.gamma_hat[j] = -1.0 / (b3 * w.gamma[j - 1]);
        }
    }
    return w;
}

// All node values [u0, uh1, ..., u_{n-1}, uh_n] of the ROM finite-difference system.
inline std::vector<cplx> fd_solution(const GridWeights& w, const std::vector<cplx>& alpha, cplx s)
{
    try {
        return staggered_solve(w.gamma, w.gamma_hat, alpha, s);
    } catch (const SolverBreakdown& e) {
        throw std::domain_error(std::string("singular shift: ") + e.what());
    }
}

inline cplx eval_tridiagonal(const GridWeights& w, const std::vector<cplx>& alpha, cplx s)
{
    return fd_solution(w, alpha, s)[0];
}

}  // namespace romembed
