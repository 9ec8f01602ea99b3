#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratfit.hpp"
#include "rom.hpp"

namespace romembed {

// Ladder of tanh(s*Theta): poles i(k-1/2)pi/Theta, residues 1/Theta.
inline SpectralData homogeneous_spectrum(int n, double theta)
{
    if (n < 1 || !(theta > 0.0)) throw std::invalid_argument("need n >= 1 and Theta > 0");
    SpectralData d;
    d.flavor = SpectralFlavor::lossless;
    for (int k = 1; k <= n; ++k) {
        d.poles.emplace_back(0.0, (k - 0.5) * std::numbers::pi / theta);
        d.residues.emplace_back(1.0 / theta, 0.0);
    }
    return d;
}

struct ReferenceGrid {
    std::vector<double> gamma0, gamma_hat0;
    double theta = 0.0;
    int n = 0;
};

inline ReferenceGrid train_reference(int n, double theta)
{
    GridWeights w = extract_gamma(lanczos(assemble(homogeneous_spectrum(n, theta))));
    ReferenceGrid ref;
    ref.n = n;
    ref.theta = theta;
    for (int j = 0; j < n; ++j) {
        // a homogeneous ladder can only give real positive weights
        if (!(w.gamma[j].real() > 0.0) || !(w.gamma_hat[j].real() > 0.0) ||
            std::abs(w.gamma[j].imag()) > 1e-8 * std::abs(w.gamma[j]) ||
            std::abs(w.gamma_hat[j].imag()) > 1e-8 * std::abs(w.gamma_hat[j]))
            throw std::logic_error("reference grid weight " + std::to_string(j + 1) + " not real positive");
        ref.gamma0.push_back(w.gamma[j].real());
        ref.gamma_hat0.push_back(w.gamma_hat[j].real());
    }
    return ref;
}

// Average slowness from the first dual weight. The reference must be trained
// on the physical length L; then gh_1/gh0_1 ~ T(L)/(L c(0)).
inline double estimate_slowness(const GridWeights& w, const ReferenceGrid& ref, double c0)
{
    if (!(c0 > 0.0)) throw std::invalid_argument("c(0) must be positive");
    if (!(w.gamma_hat[0].real() > 0.0)) throw std::domain_error("first dual weight has nonpositive real part");
    return c0 * w.gamma_hat[0].real() / ref.gamma_hat0[0];
}

struct TravelTimeOptions {
    // poles from this fraction of the ladder upward enter the fit
    double upper_fraction = 0.5;
};

// Small s gives f(s)/s -> sum 2 y/w^2, which is the length L of the interval,
// not its travel time. T(L) comes from the pole ladder instead:
// w_k ~ (k - 1/2) pi / T + b/((k - 1/2) pi), fitted over the upper poles.
// Assumes the data holds the lowest n poles with none missing.
inline double estimate_TL(const SpectralData& d, TravelTimeOptions opt = {})
{
    const size_t n = d.size();
    if (n == 0) throw std::invalid_argument("empty spectral data");
    std::vector<double> w(n);
    for (size_t j = 0; j < n; ++j) {
        if (!(d.residues[j].real() > 0.0)) throw std::domain_error("nonpositive residue; data not lossless");
        if (std::abs(d.poles[j].real()) > 1e-6 * std::abs(d.poles[j]))
            throw std::domain_error("pole off the imaginary axis; data not lossless");
        w[j] = std::abs(d.poles[j].imag());
    }
    std::sort(w.begin(), w.end());
    if (!(w[0] > 0.0)) throw std::domain_error("zero pole");
    if (n == 1) return 0.5 * std::numbers::pi / w[0];
    size_t first = std::min(n - 2, size_t(opt.upper_fraction * double(n)));
    // least squares for w = a k + b/k
    double kk = 0, ki = 0, ii = 0, wk = 0, wi = 0;
    for (size_t j = first; j < n; ++j) {
        double k = (double(j) + 0.5) * std::numbers::pi;
        kk += k * k;
        ki += 1.0;
        ii += 1.0 / (k * k);
        wk += w[j] * k;
        wi += w[j] / k;
    }
    double det = kk * ii - ki * ki;
    double a = std::abs(det) > 1e-14 * kk * ii ? (wk * ii - wi * ki) / det : wk / kk;
    if (!(a > 0.0)) throw std::domain_error("nonpositive travel-time estimate; data inconsistent");
    return 1.0 / a;
}

struct OGNode {
    double x, c;
};

struct OGReconstruction {
    std::vector<OGNode> primary, dual;  // c_j at x_{j-1}; ch_j at xh_j
    double slowness = 0.0;              // average slowness estimate
    double travel_time = 0.0;           // slowness * L
    double theta = 0.0;
    int n = 0;
    std::vector<std::string> warnings;
};

// Optimal-grid reconstruction:
//   ch_j = gamma_j/(s gamma0_j)      at xh_j
//   c_j  = s gamma_hat0_j/gamma_hat_j at x_{j-1}
//   x_j  = x_{j-1}  + s gamma0_j ch_j
//   xh_j = xh_{j-1} + s gamma_hat0_j c_j
// with s the average slowness.
inline OGReconstruction reconstruct(const GridWeights& w, const ReferenceGrid& ref, double slowness)
{
    if (int(w.n()) != ref.n) throw std::invalid_argument("weights and reference grid differ in n");
    if (!(slowness > 0.0)) throw std::invalid_argument("slowness must be positive");
    OGReconstruction rec;
    rec.n = ref.n;
    rec.slowness = slowness;
    rec.theta = ref.theta;
    rec.travel_time = slowness * ref.theta;
    double x = 0.0, xh = 0.0;
    for (int j = 0; j < ref.n; ++j) {
        double cj = slowness * ref.gamma_hat0[j] / w.gamma_hat[j].real();
        double chj = w.gamma[j].real() / (slowness * ref.gamma0[j]);
        if (!(cj > 0.0)) rec.warnings.push_back("nonpositive primary estimate at j=" + std::to_string(j + 1));
        if (!(chj > 0.0)) rec.warnings.push_back("nonpositive dual estimate at j=" + std::to_string(j + 1));
        rec.primary.push_back({x, cj});
        x += slowness * ref.gamma0[j] * chj;
        xh += slowness * ref.gamma_hat0[j] * cj;
        rec.dual.push_back({xh, chj});
    }
    return rec;
}

// Slowness taken from the first dual weight and the sensor-side speed c(0).
inline OGReconstruction reconstruct_with_c0(const GridWeights& w, const ReferenceGrid& ref, double c0)
{
    return reconstruct(w, ref, estimate_slowness(w, ref, c0));
}

// Merged, position-sorted (x, c) curve for metrics.
inline std::vector<OGNode> merged_curve(const OGReconstruction& rec)
{
    std::vector<OGNode> all = rec.primary;
    all.insert(all.end(), rec.dual.begin(), rec.dual.end());
    std::stable_sort(all.begin(), all.end(), [](const OGNode& a, const OGNode& b) { return a.x < b.x; });
    return all;
}

}  // namespace romembed
