#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace romembed {

enum class MediumKind { bounded, semi_infinite };

inline const char* to_string(MediumKind k)
{
    return k == MediumKind::bounded ? "bounded" : "semi_infinite";
}

// Wave speed c(x) on [0,L]. Either a piecewise-linear table or a closed-form
// preset. Semi-infinite media continue with c(L) for x > L.
class MediumProfile {
public:
    using Params = std::map<std::string, double>;

    static MediumProfile table(MediumKind kind, std::vector<double> x, std::vector<double> c)
    {
        if (x.size() < 2 || x.size() != c.size())
            throw std::invalid_argument("speed table needs >= 2 matching samples");
        if (x.front() != 0.0)
            throw std::invalid_argument("speed table must start at x = 0");
        for (size_t k = 1; k < x.size(); ++k)
            if (!(x[k] > x[k - 1])) throw std::invalid_argument("speed table abscissae must increase");
        for (double v : c)
            if (!(v > 0.0)) throw std::invalid_argument("speed must be positive");
        MediumProfile p;
        p.kind_ = kind;
        p.L_ = x.back();
        p.xs_ = std::move(x);
        p.cs_ = std::move(c);
        p.name_ = "table";
        return p;
    }

    // Known names: constant, smooth_bump, smoothed_step, bump_plus_reflector.
    // Missing parameters fall back to defaults(); unknown names throw.
    static MediumProfile preset(const std::string& name, double L, MediumKind kind, const Params& params = {})
    {
        if (!(L > 0.0)) throw std::invalid_argument("L must be positive");
        MediumProfile p;
        p.kind_ = kind;
        p.L_ = L;
        p.name_ = name;
        p.params_ = defaults(name, L);
        for (auto& [k, v] : params) {
            if (!p.params_.count(k)) throw std::invalid_argument("unknown parameter '" + k + "' for preset " + name);
            p.params_[k] = v;
        }
        // cheap positivity probe
        for (int k = 0; k <= 2000; ++k) {
            if (!(p.eval_raw(L * k / 2000.0) > 0.0)) throw std::invalid_argument("preset " + name + " is not positive on [0,L]");
        }
        return p;
    }

    static Params defaults(const std::string& name, double L)
    {
        if (name == "constant") return {{"c", 1.0}};
        if (name == "smooth_bump")
            return {{"c0", 1.0}, {"amplitude", 0.5}, {"center", 0.5 * L}, {"width", 0.15 * L}};
        if (name == "smoothed_step")
            return {{"c_left", 1.0}, {"c_right", 2.0}, {"position", 0.5 * L}, {"width", 0.02 * L}};
        if (name == "bump_plus_reflector")
            // two gentle bumps followed by a thin fast layer; constant beyond it
            return {{"c0", 1.0},
                    {"bump_amp", 0.3},   {"bump_pos", 0.25 * L}, {"bump_width", 0.075 * L},
                    {"dip_amp", 0.2},    {"dip_pos", 0.5 * L},   {"dip_width", 0.075 * L},
                    {"refl_amp", 0.8},   {"refl_start", 0.75 * L}, {"refl_end", 0.8 * L},
                    {"refl_edge", 0.005 * L}};
        throw std::invalid_argument("unknown preset '" + name + "'");
    }

    MediumKind kind() const { return kind_; }
    double length() const { return L_; }
    const std::string& name() const { return name_; }
    const Params& params() const { return params_; }
    const std::vector<double>& table_x() const { return xs_; }
    const std::vector<double>& table_c() const { return cs_; }
    bool is_table() const { return name_ == "table"; }

    // Points where c has a kink or is not smooth enough for plain Simpson.
    std::vector<double> breakpoints() const
    {
        if (is_table()) return xs_;
        return {0.0, L_};
    }

    double speed(double x) const
    {
        if (x < 0.0) throw std::domain_error("x < 0");
        if (x > L_) {
            if (kind_ == MediumKind::bounded) {
                if (x > L_ * (1.0 + 1e-12)) throw std::domain_error("x beyond L for a bounded medium");
            }
            x = L_;
        }
        return eval_raw(x);
    }

private:
    double eval_raw(double x) const
    {
        if (is_table()) {
            auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
            if (it == xs_.begin()) return cs_.front();
            if (it == xs_.end()) return cs_.back();
            size_t k = size_t(it - xs_.begin());
            double t = (x - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
            return cs_[k - 1] + t * (cs_[k] - cs_[k - 1]);
        }
        auto P = [&](const char* k) { return params_.at(k); };
        auto gauss = [](double x, double a, double w) { return std::exp(-((x - a) / w) * ((x - a) / w)); };
        if (name_ == "constant") return P("c");
        if (name_ == "smooth_bump") return P("c0") + P("amplitude") * gauss(x, P("center"), P("width"));
        if (name_ == "smoothed_step")
            return P("c_left") + 0.5 * (P("c_right") - P("c_left")) * (1.0 + std::tanh((x - P("position")) / P("width")));
        if (name_ == "bump_plus_reflector") {
            double box = 0.5 * (std::tanh((x - P("refl_start")) / P("refl_edge")) -
                                std::tanh((x - P("refl_end")) / P("refl_edge")));
            return P("c0") + P("bump_amp") * gauss(x, P("bump_pos"), P("bump_width")) -
                   P("dip_amp") * gauss(x, P("dip_pos"), P("dip_width")) + P("refl_amp") * box;
        }
        throw std::logic_error("unreachable preset");
    }

    MediumKind kind_ = MediumKind::bounded;
    double L_ = 1.0;
    std::string name_;
    Params params_;
    std::vector<double> xs_, cs_;
};

inline double eval_speed(const MediumProfile& p, double x) { return p.speed(x); }

namespace detail {

// composite Simpson of g over [a,b], split at the medium breakpoints so that
// table media are integrated segment by segment
template <class G>
double integrate(const MediumProfile& p, G g, double a, double b, int panels)
{
    if (b <= a) return 0.0;
    std::vector<double> cuts{a};
    for (double t : p.breakpoints())
        if (t > a && t < b) cuts.push_back(t);
    cuts.push_back(b);
    const double total = b - a;
    double sum = 0.0;
    for (size_t k = 1; k < cuts.size(); ++k) {
        double lo = cuts[k - 1], hi = cuts[k];
        int m = std::max(2, int(std::ceil(panels * (hi - lo) / total)));
        if (m % 2) ++m;
        double h = (hi - lo) / m;
        double s = g(lo) + g(hi);
        for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * g(lo + i * h);
        sum += s * h / 3.0;
    }
    return sum;
}

template <class G>
double tail_integral(const MediumProfile& p, G g, double x)
{
    // constant speed beyond L for semi-infinite media
    return x > p.length() ? (x - p.length()) * g(p.length()) : 0.0;
}

}  // namespace detail

struct QuadratureOptions {
    int panels = 4096;
};

// M(x) = int_0^x c^-2
inline double mass_function(const MediumProfile& p, double x, QuadratureOptions q = {})
{
    if (x < 0.0) throw std::domain_error("x < 0");
    auto g = [&](double t) { double c = p.speed(t); return 1.0 / (c * c); };
    double xe = std::min(x, p.length());
    if (p.kind() == MediumKind::bounded && x > p.length() * (1 + 1e-12)) throw std::domain_error("x beyond L");
    return detail::integrate(p, g, 0.0, xe, q.panels) + detail::tail_integral(p, g, x);
}

// T(x) = int_0^x c^-1
inline double travel_time(const MediumProfile& p, double x, QuadratureOptions q = {})
{
    if (x < 0.0) throw std::domain_error("x < 0");
    auto g = [&](double t) { return 1.0 / p.speed(t); };
    double xe = std::min(x, p.length());
    if (p.kind() == MediumKind::bounded && x > p.length() * (1 + 1e-12)) throw std::domain_error("x beyond L");
    return detail::integrate(p, g, 0.0, xe, q.panels) + detail::tail_integral(p, g, x);
}

// Inverse of travel_time by bisection (T is strictly increasing).
inline double inverse_travel_time(const MediumProfile& p, double T, QuadratureOptions q = {})
{
    double TL = travel_time(p, p.length(), q);
    if (T < 0.0) throw std::domain_error("T < 0");
    if (p.kind() == MediumKind::bounded && T > TL * (1 + 1e-12)) throw std::domain_error("T beyond T(L)");
    if (T >= TL) return p.length() + (T - TL) * p.speed(p.length());
    double lo = 0.0, hi = p.length();
    const double tol = 1e-12 * p.length();
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (travel_time(p, mid, q) < T) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline double average_slowness(const MediumProfile& p, QuadratureOptions q = {})
{
    if (p.kind() != MediumKind::bounded) throw std::invalid_argument("average slowness needs a bounded medium");
    return travel_time(p, p.length(), q) / p.length();
}

// Dense samples of M, T and the inverse map, for plotting and metrics.
struct TruthCurves {
    std::vector<double> x, mass, slowness, speed;
    double average_slowness = 0.0;

    // x(T) by monotone interpolation of the sampled T(x)
    double x_of_T(double T) const
    {
        auto it = std::lower_bound(slowness.begin(), slowness.end(), T);
        if (it == slowness.begin()) return x.front();
        if (it == slowness.end()) return x.back();
        size_t k = size_t(it - slowness.begin());
        double t = (T - slowness[k - 1]) / (slowness[k] - slowness[k - 1]);
        return x[k - 1] + t * (x[k] - x[k - 1]);
    }
};

// Cumulative Simpson on [0, xmax] with `count` intervals (rounded up to even).
inline TruthCurves truth_curves(const MediumProfile& p, double xmax, int count = 4096)
{
    if (count % 2) ++count;
    TruthCurves tc;
    double h = xmax / count;
    tc.x.resize(count + 1);
    tc.speed.resize(count + 1);
    for (int i = 0; i <= count; ++i) {
        tc.x[i] = i * h;
        tc.speed[i] = p.speed(std::min(tc.x[i], p.kind() == MediumKind::bounded ? p.length() : tc.x[i]));
    }
    tc.mass.assign(count + 1, 0.0);
    tc.slowness.assign(count + 1, 0.0);
    // pairwise Simpson with a midpoint evaluation keeps every sample exact to O(h^4)
    for (int i = 1; i <= count; ++i) {
        double cm = p.speed(std::min(tc.x[i] - 0.5 * h, xmax));
        double a = tc.speed[i - 1], b = tc.speed[i];
        tc.mass[i] = tc.mass[i - 1] + h / 6.0 * (1 / (a * a) + 4 / (cm * cm) + 1 / (b * b));
        tc.slowness[i] = tc.slowness[i - 1] + h / 6.0 * (1 / a + 4 / cm + 1 / b);
    }
    if (p.kind() == MediumKind::bounded) tc.average_slowness = average_slowness(p);
    return tc;
}

}  // namespace romembed
