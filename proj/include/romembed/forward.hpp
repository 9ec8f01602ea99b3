#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "medium.hpp"
#include "ratfit.hpp"
#include "tridiag.hpp"

namespace romembed {

enum class Boundary { dirichlet_far, sommerfeld };

// Fine staggered grid. Primary nodes x_0..x_{N-1} carry u, dual nodes carry
// uh. primary_steps[j] is the distance x_{j+1}-x_j (the last one ends at the
// far boundary), dual_steps[j] the length of the dual cell around x_j.
struct FineGridSystem {
    int N = 0;
    std::vector<double> primary_steps, dual_steps, cell_speeds;
    Boundary boundary = Boundary::dirichlet_far;
    double c_far = 1.0;  // c at the Sommerfeld node
    double length = 0.0;
    // kept so exact_spectrum can refine the grid; empty for hand-built systems
    std::shared_ptr<const MediumProfile> profile;
    double pad = 0.0;

    std::vector<double> gamma() const { return primary_steps; }
    std::vector<double> gamma_hat() const
    {
        std::vector<double> g(N);
        for (int j = 0; j < N; ++j) g[j] = dual_steps[j] / (cell_speeds[j] * cell_speeds[j]);
        return g;
    }
};

inline FineGridSystem discretize(const MediumProfile& profile, int N, double pad = 0.0)
{
    if (N < 1) throw std::invalid_argument("fine grid needs N >= 1");
    if (pad < 0.0) throw std::invalid_argument("pad must be nonnegative");
    if (pad > 0.0 && profile.kind() == MediumKind::bounded) throw std::invalid_argument("pad applies to semi-infinite media only");
    FineGridSystem sys;
    sys.N = N;
    sys.profile = std::make_shared<const MediumProfile>(profile);
    sys.pad = pad;
    sys.length = profile.length() + pad;
    const bool open = profile.kind() == MediumKind::semi_infinite;
    sys.boundary = open ? Boundary::sommerfeld : Boundary::dirichlet_far;
    // open grids end on a dual node: (N-1) full steps plus a half step
    const double h = open ? sys.length / (N - 0.5) : sys.length / N;
    sys.primary_steps.assign(N, h);
    if (open) sys.primary_steps[N - 1] = 0.5 * h;
    sys.dual_steps.assign(N, h);
    sys.dual_steps[0] = 0.5 * h;
    sys.cell_speeds.resize(N);
    sys.cell_speeds[0] = profile.speed(0.25 * h);
    for (int j = 1; j < N; ++j) sys.cell_speeds[j] = profile.speed(j * h);
    sys.c_far = profile.speed(sys.length);
    return sys;
}

// f(s) = u_0 from one tridiagonal solve of the fine system.
inline cplx impedance(const FineGridSystem& sys, cplx s)
{
    if (s.real() <= 0.0 && s.imag() == 0.0) throw std::domain_error("impedance needs Re s > 0 or Im s != 0");
    std::vector<cplx> alpha;
    if (sys.boundary == Boundary::sommerfeld) {
        // u_N = c(L) uh_N closes the last dual row
        alpha.assign(2 * size_t(sys.N), 0.0);
        alpha.back() = sys.c_far / sys.primary_steps.back();
    }
    return staggered_solve(sys.gamma(), sys.gamma_hat(), alpha, s)[0];
}

struct ImpedanceSamples {
    std::vector<cplx> s, f;
    size_t size() const { return s.size(); }
};

enum class Spacing { linear, log };

// Samples on s = shift + i w; each sample is followed by its conjugate.
inline ImpedanceSamples sample_contour(const FineGridSystem& sys, double w_min, double w_max, int count, double shift,
                                       Spacing spacing = Spacing::linear)
{
    if (!(w_min > 0.0) || !(w_max >= w_min)) throw std::invalid_argument("band must satisfy 0 < w_min <= w_max");
    if (count < 1) throw std::invalid_argument("count must be positive");
    if (shift < 0.0) throw std::invalid_argument("shift must be >= 0");
    ImpedanceSamples out;
    for (int k = 0; k < count; ++k) {
        double t = count == 1 ? 0.0 : double(k) / (count - 1);
        double w = spacing == Spacing::linear ? w_min + t * (w_max - w_min) : w_min * std::pow(w_max / w_min, t);
        cplx s(shift, w);
        cplx f = impedance(sys, s);
        out.s.push_back(s);
        out.f.push_back(f);
        out.s.push_back(std::conj(s));
        out.f.push_back(std::conj(f));
    }
    return out;
}

struct SpectrumOptions {
    // one Richardson step against a grid with 2N cells cancels the O(h^2)
    // dispersion of the staggered scheme; needs the profile
    bool richardson = true;
};

namespace detail {

// Jacobi matrix M^{-1/2} K M^{-1/2} of the second-order form (Dirichlet at u_N).
struct Jacobi {
    std::vector<double> d, e;
};

inline Jacobi second_order_form(const FineGridSystem& sys)
{
    const int N = sys.N;
    auto g = sys.gamma();
    auto gh = sys.gamma_hat();
    Jacobi J;
    J.d.resize(N);
    J.e.resize(N - 1);
    for (int j = 0; j < N; ++j) {
        double k = 1.0 / g[j] + (j > 0 ? 1.0 / g[j - 1] : 0.0);
        J.d[j] = k / gh[j];
        if (j + 1 < N) J.e[j] = -1.0 / (g[j] * std::sqrt(gh[j] * gh[j + 1]));
    }
    return J;
}

// number of eigenvalues below x (Sturm sequence)
inline int sturm_count(const Jacobi& J, double x)
{
    int count = 0;
    double q = J.d[0] - x;
    if (q < 0) ++count;
    for (size_t i = 1; i < J.d.size(); ++i) {
        if (q == 0.0) q = 1e-300;
        q = J.d[i] - x - J.e[i - 1] * J.e[i - 1] / q;
        if (q < 0) ++count;
    }
    return count;
}

inline double kth_eigenvalue(const Jacobi& J, int k, double lo, double hi)
{
    // smallest x with sturm_count(x) > k
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(J, mid) > k) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

// first component squared of the unit eigenvector, by inverse iteration
inline double first_component_sq(const Jacobi& J, double kappa)
{
    const size_t N = J.d.size();
    std::vector<double> x(N, 1.0 / std::sqrt(double(N)));
    double shift = kappa;
    for (int it = 0; it < 3; ++it) {
        std::vector<double> d(N);
        for (size_t i = 0; i < N; ++i) d[i] = J.d[i] - shift;
        try {
            x = thomas(J.e, d, J.e, x, 0.0);
        } catch (const SolverBreakdown&) {
            shift = kappa * (1.0 + 1e-14) + 1e-300;
            --it;
            continue;
        }
        double nrm = 0.0;
        for (double v : x) nrm += v * v;
        nrm = std::sqrt(nrm);
        for (double& v : x) v /= nrm;
    }
    return x[0] * x[0];
}

inline SpectralData raw_spectrum(const FineGridSystem& sys, int n)
{
    if (sys.boundary != Boundary::dirichlet_far) throw std::invalid_argument("exact spectrum needs a bounded lossless system");
    if (n < 1 || n > sys.N) throw std::invalid_argument("need 1 <= n <= N");
    Jacobi J = second_order_form(sys);
    double bound = 0.0;
    for (size_t i = 0; i < J.d.size(); ++i) {
        double r = std::abs(J.d[i]) + (i > 0 ? std::abs(J.e[i - 1]) : 0.0) + (i + 1 < J.d.size() ? std::abs(J.e[i]) : 0.0);
        bound = std::max(bound, r);
    }
    const double gh0 = sys.gamma_hat()[0];
    SpectralData out;
    out.flavor = SpectralFlavor::lossless;
    std::vector<double> kappas;
    for (int k = 0; k < n; ++k) {
        double lo = k == 0 ? 0.0 : kappas.back() * (1 - 1e-15);
        double kap = kth_eigenvalue(J, k, std::max(0.0, lo) - 1e-300, bound * (1 + 1e-12));
        if (!kappas.empty() && kap - kappas.back() <= 1e-12 * bound)
            throw std::runtime_error("non-simple eigenvalue at index " + std::to_string(k));
        kappas.push_back(kap);
        out.poles.emplace_back(0.0, std::sqrt(kap));
        out.residues.emplace_back(first_component_sq(J, kap) / (2.0 * gh0), 0.0);
    }
    return out;
}

}  // namespace detail

// Lowest n conjugate pole pairs and residues of the fine bounded system.
inline SpectralData exact_spectrum(const FineGridSystem& sys, int n, SpectrumOptions opt = {})
{
    SpectralData a = detail::raw_spectrum(sys, n);
    if (!opt.richardson || !sys.profile) return a;
    FineGridSystem fine = discretize(*sys.profile, 2 * sys.N);
    SpectralData b = detail::raw_spectrum(fine, n);
    for (int k = 0; k < n; ++k) {
        a.poles[k] = (4.0 * b.poles[k] - a.poles[k]) / 3.0;
        a.residues[k] = (4.0 * b.residues[k] - a.residues[k]) / 3.0;
    }
    return a;
}

}  // namespace romembed
