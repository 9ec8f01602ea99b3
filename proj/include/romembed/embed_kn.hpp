#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "embed_krein.hpp"
#include "ratfit.hpp"
#include "rom.hpp"

namespace romembed {

// Integrated losses. The lossy diagonal follows the unknown order
// [u0, uh1, u1, ..., u_{n-1}, uh_n], so with 1-based alpha:
//
//   cell i | alpha on u_{i-1} | alpha on uh_i
//   -------+------------------+--------------
//     1    | alpha_1          | alpha_2
//     2    | alpha_3          | alpha_4
//
//   r_i  = gh_i alpha_{2i-1}  placed at x_{i-1}
//   rh_i = g_i  alpha_{2i}    placed between x_{i-1} and x_i
struct LossProfile {
    std::vector<cplx> r, r_hat;
    std::vector<double> position_r, position_r_hat;
    double noise = 0.0;  // magnitudes at or below this are roundoff
    size_t n() const { return r.size(); }
};

inline LossProfile loss_coefficients(const TridiagonalROM& rom, const GridWeights& w)
{
    if (rom.alpha.size() != 2 * w.n()) throw std::invalid_argument("ROM and weights differ in size");
    LossProfile lp;
    double x = 0.0;
    for (size_t i = 0; i < w.n(); ++i) {
        lp.r.push_back(w.gamma_hat[i] * rom.alpha[2 * i]);
        lp.r_hat.push_back(w.gamma[i] * rom.alpha[2 * i + 1]);
        double xn = x + w.gamma[i].real();
        lp.position_r.push_back(x);
        lp.position_r_hat.push_back(0.5 * (x + xn));
        x = xn;
    }
    return lp;
}

// sum_i r_i/gh_i + rh_i/g_i, which must equal trace(Lambda)
inline cplx loss_trace(const LossProfile& lp, const GridWeights& w)
{
    cplx t = 0.0;
    for (size_t i = 0; i < lp.n(); ++i) t += lp.r[i] / w.gamma_hat[i] + lp.r_hat[i] / w.gamma[i];
    return t;
}

struct OpenEmbedding {
    TridiagonalROM rom;
    GridWeights weights;
    KreinCurve curve;
    LossProfile losses;
    double imag_gamma_rel = 0.0, imag_gamma_hat_rel = 0.0;  // max |Im|/|.|
    double trace_residual = 0.0;  // |sum alpha - 2 sum Re lambda| / max|lambda|
};

inline OpenEmbedding embed_open(const SpectralData& d, LanczosOptions opt = {})
{
    for (cplx l : d.poles)
        if (l.real() < 0.0) throw std::invalid_argument("open embedding needs Re lambda >= 0");
    OpenEmbedding e;
    e.rom = lanczos(assemble(d), opt);
    e.weights = extract_gamma(e.rom);
    e.curve = krein_curve(e.weights);
    e.losses = loss_coefficients(e.rom, e.weights);
    for (size_t j = 0; j < e.weights.n(); ++j) {
        e.imag_gamma_rel = std::max(e.imag_gamma_rel, std::abs(e.weights.gamma[j].imag()) / std::abs(e.weights.gamma[j]));
        e.imag_gamma_hat_rel =
            std::max(e.imag_gamma_hat_rel, std::abs(e.weights.gamma_hat[j].imag()) / std::abs(e.weights.gamma_hat[j]));
    }
    cplx tr = 0.0;
    double lmax = 0.0;
    for (cplx a : e.rom.alpha) tr += a;
    for (cplx l : d.poles) {
        tr -= 2.0 * l.real();
        lmax = std::max(lmax, std::abs(l));
    }
    e.trace_residual = std::abs(tr) / (lmax > 0 ? lmax : 1.0);
    // r = weight * alpha, and alpha is roundoff below ~1e-9 |Lambda| for lossless data
    double wmax = 0.0;
    for (size_t j = 0; j < e.weights.n(); ++j)
        wmax = std::max({wmax, std::abs(e.weights.gamma[j]), std::abs(e.weights.gamma_hat[j])});
    e.losses.noise = 1e-9 * lmax * wmax;
    return e;
}

enum class PatternResult { match, mismatch, indeterminate };

inline const char* to_string(PatternResult p)
{
    switch (p) {
        case PatternResult::match: return "match";
        case PatternResult::mismatch: return "mismatch";
        default: return "indeterminate";
    }
}

struct PatternReport {
    PatternResult result = PatternResult::indeterminate;
    std::vector<std::string> violators;  // "r_3", "rh_7", ...
};

// Exact Sommerfeld closure: every loss vanishes except rh_n.
inline PatternReport sommerfeld_pattern(const LossProfile& lp, double tol)
{
    PatternReport rep;
    const size_t n = lp.n();
    if (n == 0) return rep;
    double ref = std::abs(lp.r_hat[n - 1]);
    double scale = 0.0;
    for (size_t i = 0; i < n; ++i) scale = std::max({scale, std::abs(lp.r[i]), std::abs(lp.r_hat[i])});
    if (ref == 0.0 || ref <= lp.noise || ref <= 1e-14 * scale) return rep;
    for (size_t i = 0; i < n; ++i) {
        if (std::abs(lp.r[i]) > tol * ref) rep.violators.push_back("r_" + std::to_string(i + 1));
        if (i + 1 < n && std::abs(lp.r_hat[i]) > tol * ref) rep.violators.push_back("rh_" + std::to_string(i + 1));
    }
    rep.result = rep.violators.empty() ? PatternResult::match : PatternResult::mismatch;
    return rep;
}

}  // namespace romembed
