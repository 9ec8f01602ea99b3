#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ratfit.hpp"

namespace romembed {

struct PassivityReport {
    bool criterion1_ok = false;  // no poles in the open right half-plane
    bool criterion2_ok = false;  // h(conj s) = conj h(s)
    double criterion3_min = 0.0; // min Re h(i w + eps) over the grid
    bool criterion3_ok = false;
    std::vector<double> omega;
    double eps = 0.0;
    bool passive() const { return criterion1_ok && criterion2_ok && criterion3_ok; }
};

inline PassivityReport check_passive(const SpectralData& d, double w_min, double w_max, int count, double eps,
                                     double tol = 1e-12)
{
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (count < 1 || w_max < w_min) throw std::invalid_argument("bad sampling band");
    PassivityReport rep;
    rep.eps = eps;
    // poles of the transfer function sit at s = -lambda
    rep.criterion1_ok = std::all_of(d.poles.begin(), d.poles.end(), [](cplx l) { return l.real() >= 0.0; });
    rep.criterion2_ok = true;
    rep.criterion3_min = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (int k = 0; k < count; ++k) {
        double w = count == 1 ? w_min : w_min + (w_max - w_min) * k / (count - 1);
        rep.omega.push_back(w);
        cplx hp = eval_pole_residue(d, cplx(eps, w));
        cplx hm = eval_pole_residue(d, cplx(eps, -w));
        scale = std::max(scale, std::abs(hp));
        if (std::abs(hm - std::conj(hp)) > 1e-10 * std::max(1.0, std::abs(hp))) rep.criterion2_ok = false;
        rep.criterion3_min = std::min(rep.criterion3_min, hp.real());
    }
    rep.criterion3_ok = rep.criterion3_min >= -tol * std::max(1.0, scale);
    return rep;
}

// h(s) = s f(s^2) maps a Stieltjes function to a passive transfer function.
inline cplx stieltjes_to_passive(const std::function<cplx(cplx)>& f, cplx s) { return s * f(s * s); }

}  // namespace romembed
