#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rom.hpp"

namespace romembed {

// nodes x_0 = 0, x_j = g_1 + ... + g_j (n+1 values);
// mass[j-1] = gh_1 + ... + gh_j, sitting at x_{j-1}.
struct KreinCurve {
    std::vector<double> nodes, mass;
    std::vector<double> slowness_tags;  // only filled when a slowness estimate is given
    std::vector<double> imag_gamma, imag_gamma_hat;  // leftovers of complex input
};

inline KreinCurve krein_curve(const GridWeights& w)
{
    KreinCurve k;
    k.nodes.push_back(0.0);
    double x = 0.0, m = 0.0;
    for (size_t j = 0; j < w.n(); ++j) {
        x += w.gamma[j].real();
        m += w.gamma_hat[j].real();
        k.nodes.push_back(x);
        k.mass.push_back(m);
        k.imag_gamma.push_back(w.gamma[j].imag());
        k.imag_gamma_hat.push_back(w.gamma_hat[j].imag());
    }
    return k;
}

// T_j ~ s * x_j for a supplied average slowness s
inline void tag_slowness(KreinCurve& k, double slowness)
{
    k.slowness_tags.clear();
    for (double x : k.nodes) k.slowness_tags.push_back(slowness * x);
}

enum class KreinVelocity {
    slope,  // sqrt(dx/dM) on [x_{j-1}, x_j] with the mass jump gh_{j+1} across it
    ratio   // sqrt(g_j/gh_j) at the same midpoints
};

struct VelocitySample {
    double x, c;
};

struct KreinVelocityResult {
    std::vector<VelocitySample> samples;
    std::vector<int> flagged;  // segments with nonpositive slope (1-based)
};

inline KreinVelocityResult krein_velocity(const KreinCurve& k, KreinVelocity rule = KreinVelocity::slope)
{
    KreinVelocityResult out;
    const size_t n = k.mass.size();
    for (size_t j = 1; j <= n; ++j) {
        double dx = k.nodes[j] - k.nodes[j - 1];
        double dm;
        if (rule == KreinVelocity::slope) {
            if (j == n) break;  // no mass beyond the last node
            dm = k.mass[j] - k.mass[j - 1];
        } else {
            dm = k.mass[j - 1] - (j > 1 ? k.mass[j - 2] : 0.0);
        }
        if (!(dx > 0.0) || !(dm > 0.0)) {
            out.flagged.push_back(int(j));
            continue;
        }
        out.samples.push_back({0.5 * (k.nodes[j] + k.nodes[j - 1]), std::sqrt(dx / dm)});
    }
    return out;
}

// Piecewise-constant-slope string: point masses gh_{i+1} at x_i (i = 0..n-1),
// clamped at x_n.
struct StringModel {
    std::vector<double> positions, masses;
    std::vector<double> segments;  // x_{i+1} - x_i, kept so tiny cells survive
    double end = 0.0;
};

inline StringModel string_model(const GridWeights& w)
{
    KreinCurve k = krein_curve(w);
    StringModel m;
    for (size_t i = 0; i < w.n(); ++i) {
        m.positions.push_back(k.nodes[i]);
        m.masses.push_back(w.gamma_hat[i].real());
        m.segments.push_back(w.gamma[i].real());
    }
    m.end = k.nodes.back();
    return m;
}

// w'' = s^2 M(x) w with w(end) = 0 and w'(0-) = -s. Shoot from the clamped end:
// linear between masses, slope jump s^2 m w across each mass.
inline std::vector<cplx> string_response(const StringModel& m, cplx s)
{
    const size_t n = m.positions.size();
    if (n == 0) throw std::invalid_argument("empty string");
    std::vector<cplx> w(n);
    const bool seg = m.segments.size() == n;
    cplx wr = 0.0, slope = 1.0;
    double xr = m.end;
    for (size_t i = n; i-- > 0;) {
        w[i] = wr - slope * (seg ? m.segments[i] : xr - m.positions[i]);
        slope -= s * s * m.masses[i] * w[i];
        wr = w[i];
        xr = m.positions[i];
    }
    if (std::abs(slope) == 0.0) throw std::domain_error("s is an eigenvalue of the string");
    cplx scale = -s / slope;
    for (auto& v : w) v *= scale;
    return w;
}

}  // namespace romembed
