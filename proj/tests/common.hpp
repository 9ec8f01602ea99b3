#pragma once

#include <algorithm>
#include <random>
#include <set>

#include "romembed/romembed.hpp"

namespace testing {

using romembed::cplx;

// n lossless pairs with distinct frequencies in (0.5, wmax) and positive residues
inline romembed::SpectralData random_lossless(std::mt19937& rng, int n, double wmax = 30.0)
{
    std::uniform_real_distribution<double> w(0.5, wmax), y(0.1, 1.0);
    std::set<double> ws;
    while (int(ws.size()) < n) {
        double v = w(rng);
        bool far = std::all_of(ws.begin(), ws.end(), [&](double u) { return std::abs(u - v) > 0.05; });
        if (far) ws.insert(v);
    }
    romembed::SpectralData d;
    d.flavor = romembed::SpectralFlavor::lossless;
    for (double v : ws) {
        d.poles.emplace_back(0.0, v);
        d.residues.emplace_back(y(rng), 0.0);
    }
    return d;
}

inline cplx random_s(std::mt19937& rng)
{
    std::uniform_real_distribution<double> re(0.1, 5.0), im(-20.0, 20.0);
    return {re(rng), im(rng)};
}

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

inline romembed::MediumProfile constant(double c, double L, romembed::MediumKind k = romembed::MediumKind::bounded)
{
    return romembed::MediumProfile::preset("constant", L, k, {{"c", c}});
}

}  // namespace testing
