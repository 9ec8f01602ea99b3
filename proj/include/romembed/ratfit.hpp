#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tridiag.hpp"

namespace romembed {

enum class SpectralFlavor { unknown, lossless, passive };

inline const char* to_string(SpectralFlavor f)
{
    switch (f) {
        case SpectralFlavor::lossless: return "lossless";
        case SpectralFlavor::passive: return "passive";
        default: return "unknown";
    }
}

// n representatives (lambda_j, y_j); the conjugate pairs are implicit.
//   f(s) = sum_j y_j/(s + lambda_j) + conj(y_j)/(s + conj(lambda_j))
struct SpectralData {
    std::vector<cplx> poles, residues;
    SpectralFlavor flavor = SpectralFlavor::unknown;
    double misfit = 0.0;  // set by fit()
    size_t size() const { return poles.size(); }
};

inline cplx eval_pole_residue(const SpectralData& d, cplx s)
{
    cplx f = 0.0;
    for (size_t j = 0; j < d.size(); ++j) {
        cplx a = s + d.poles[j], b = s + std::conj(d.poles[j]);
        if (a == 0.0 || b == 0.0) throw std::domain_error("evaluation point hits a pole");
        f += d.residues[j] / a + std::conj(d.residues[j]) / b;
    }
    return f;
}

// |Im| ascending, then Re ascending
inline void canonical_order(SpectralData& d)
{
    std::vector<size_t> idx(d.size());
    for (size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        double ia = std::abs(d.poles[a].imag()), ib = std::abs(d.poles[b].imag());
        if (ia != ib) return ia < ib;
        return d.poles[a].real() < d.poles[b].real();
    });
    SpectralData o = d;
    for (size_t k = 0; k < idx.size(); ++k) {
        o.poles[k] = d.poles[idx[k]];
        o.residues[k] = d.residues[idx[k]];
    }
    d.poles = std::move(o.poles);
    d.residues = std::move(o.residues);
}

struct RankDeficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Weighting { uniform, inverse_magnitude };

struct FitOptions {
    int iterations = 10;
    double epsilon = 1e-2;      // initial damping ratio
    double tolerance = 1e-6;    // relative misfit considered converged
    Weighting weighting = Weighting::uniform;
};

inline std::vector<cplx> initial_poles(double w_min, double w_max, int n, double eps = 1e-2)
{
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(w_min > 0.0) || w_max < w_min) throw std::invalid_argument("bad band");
    std::vector<cplx> p;
    for (int j = 0; j < n; ++j) {
        double w = n == 1 ? w_min : w_min + (w_max - w_min) * j / (n - 1);
        p.emplace_back(eps * w, w);
    }
    return p;
}

namespace detail {

// Real basis per pair: phi1 = 1/(s+l) + 1/(s+conj l), phi2 = i/(s+l) - i/(s+conj l).
// Coefficients (a, b) of (phi1, phi2) give the residue y = a + i b.
inline Eigen::MatrixXcd pair_basis(const std::vector<cplx>& s, const std::vector<cplx>& poles)
{
    const cplx I(0, 1);
    Eigen::MatrixXcd B(s.size(), 2 * poles.size());
    for (size_t r = 0; r < s.size(); ++r)
        for (size_t j = 0; j < poles.size(); ++j) {
            cplx p = 1.0 / (s[r] + poles[j]), q = 1.0 / (s[r] + std::conj(poles[j]));
            B(r, 2 * j) = p + q;
            B(r, 2 * j + 1) = I * p - I * q;
        }
    return B;
}

// Conjugate samples add no information to the real-stacked system.
inline void upper_half(const std::vector<cplx>& s_in, const std::vector<cplx>& f_in, std::vector<cplx>& s,
                       std::vector<cplx>& f)
{
    for (size_t k = 0; k < s_in.size(); ++k)
        if (s_in[k].imag() >= 0.0) {
            s.push_back(s_in[k]);
            f.push_back(f_in[k]);
        }
}

// Least squares with column equilibration. Structural degeneracy throws;
// numerical rank loss (typical once poles have converged) falls back to the
// basic solution of the pivoted QR and bumps *rank_loss.
inline Eigen::VectorXd lsq(Eigen::MatrixXd A, const Eigen::VectorXd& b, int* rank_loss = nullptr)
{
    if (A.rows() < A.cols()) throw RankDeficient("fewer equations than unknowns: " + std::to_string(A.rows()) + " < " + std::to_string(A.cols()));
    Eigen::VectorXd scale(A.cols());
    for (Eigen::Index c = 0; c < A.cols(); ++c) {
        scale(c) = A.col(c).norm();
        if (scale(c) == 0.0) throw RankDeficient("zero column " + std::to_string(c));
        A.col(c) /= scale(c);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-15);
    if (qr.rank() < A.cols() && rank_loss) ++*rank_loss;
    Eigen::VectorXd x = qr.solve(b);
    return x.cwiseQuotient(scale);
}

// distinct samples with Im s >= 0; duplicates add no information
inline size_t distinct(const std::vector<cplx>& s)
{
    std::vector<std::pair<double, double>> v;
    for (cplx z : s) v.emplace_back(z.real(), z.imag());
    std::sort(v.begin(), v.end());
    return size_t(std::unique(v.begin(), v.end()) - v.begin());
}

inline Eigen::MatrixXd stack(const Eigen::MatrixXcd& A)
{
    Eigen::MatrixXd R(2 * A.rows(), A.cols());
    R << A.real(), A.imag();
    return R;
}

inline Eigen::VectorXd stack(const Eigen::VectorXcd& v)
{
    Eigen::VectorXd R(2 * v.size());
    R << v.real(), v.imag();
    return R;
}

inline std::vector<double> weights(const std::vector<cplx>& f, Weighting w)
{
    std::vector<double> out(f.size(), 1.0);
    if (w == Weighting::inverse_magnitude)
        for (size_t k = 0; k < f.size(); ++k) out[k] = 1.0 / std::max(std::abs(f[k]), 1e-300);
    return out;
}

}  // namespace detail

// One vector-fitting pole relocation. Returns n canonical representatives
// (Im >= 0, Re >= 0 after flipping, sorted).
inline std::vector<cplx> relocate(const std::vector<cplx>& s_all, const std::vector<cplx>& f_all,
                                  const std::vector<cplx>& poles, Weighting weighting = Weighting::uniform,
                                  int* rank_loss = nullptr)
{
    std::vector<cplx> s, f;
    detail::upper_half(s_all, f_all, s, f);
    const Eigen::Index n = Eigen::Index(poles.size());
    if (Eigen::Index(detail::distinct(s)) * 2 < 4 * n)
        throw RankDeficient("too few distinct samples for " + std::to_string(n) + " pole pairs");
    Eigen::MatrixXcd B = detail::pair_basis(s, poles);
    auto w = detail::weights(f, weighting);
    // f*sigma ~ p with sigma = 1 + sum c phi: unknowns [p coefficients, c]
    Eigen::MatrixXcd A(s.size(), 4 * n);
    Eigen::VectorXcd rhs(s.size());
    for (size_t r = 0; r < s.size(); ++r) {
        for (Eigen::Index c = 0; c < 2 * n; ++c) {
            A(r, c) = w[r] * B(r, c);
            A(r, 2 * n + c) = -w[r] * f[r] * B(r, c);
        }
        rhs(r) = w[r] * f[r];
    }
    Eigen::VectorXd x = detail::lsq(detail::stack(A), detail::stack(rhs), rank_loss);
    // zeros of sigma: eig(A - b c^T) with real 2x2 blocks for each pole pair
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        cplx a = -poles[j];
        M(2 * j, 2 * j) = a.real();
        M(2 * j, 2 * j + 1) = a.imag();
        M(2 * j + 1, 2 * j) = -a.imag();
        M(2 * j + 1, 2 * j + 1) = a.real();
    }
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index c = 0; c < 2 * n; ++c) M(2 * j, c) -= 2.0 * x(2 * n + c);
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver failed in pole relocation");
    Eigen::VectorXcd z = es.eigenvalues();
    double zmax = z.cwiseAbs().maxCoeff();
    std::vector<cplx> cplx_z;
    std::vector<double> real_z;
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        if (z(k).imag() > 1e-12 * zmax) cplx_z.push_back(z(k));
        else if (std::abs(z(k).imag()) <= 1e-12 * zmax) real_z.push_back(z(k).real());
    }
    // real zeros come in even number; pair neighbours into one complex pole
    std::sort(real_z.begin(), real_z.end());
    for (size_t k = 0; k + 1 < real_z.size(); k += 2)
        cplx_z.emplace_back(0.5 * (real_z[k] + real_z[k + 1]), 0.5 * std::abs(real_z[k + 1] - real_z[k]));
    SpectralData d;
    for (cplx zz : cplx_z) {
        cplx l = -zz;
        d.poles.emplace_back(std::abs(l.real()), std::abs(l.imag()));
        d.residues.emplace_back(0.0);
    }
    canonical_order(d);
    return d.poles;
}

// Least-squares residues for fixed poles; conjugate symmetry by construction.
inline SpectralData residues(const std::vector<cplx>& s_all, const std::vector<cplx>& f_all,
                             const std::vector<cplx>& poles, Weighting weighting = Weighting::uniform,
                             int* rank_loss = nullptr)
{
    std::vector<cplx> s, f;
    detail::upper_half(s_all, f_all, s, f);
    if (detail::distinct(s) < poles.size())
        throw RankDeficient("too few distinct samples for " + std::to_string(poles.size()) + " pole pairs");
    Eigen::MatrixXcd B = detail::pair_basis(s, poles);
    auto w = detail::weights(f, weighting);
    Eigen::VectorXcd rhs(s.size());
    for (size_t r = 0; r < s.size(); ++r) {
        B.row(r) *= w[r];
        rhs(r) = w[r] * f[r];
    }
    Eigen::VectorXd x = detail::lsq(detail::stack(B), detail::stack(rhs), rank_loss);
    SpectralData d;
    d.poles = poles;
    for (size_t j = 0; j < poles.size(); ++j) d.residues.emplace_back(x(2 * j), x(2 * j + 1));
    return d;
}

inline double relative_misfit(const std::vector<cplx>& s, const std::vector<cplx>& f, const SpectralData& d)
{
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < s.size(); ++k) {
        num = std::max(num, std::abs(eval_pole_residue(d, s[k]) - f[k]));
        den = std::max(den, std::abs(f[k]));
    }
    return den > 0.0 ? num / den : num;
}

struct FitResult {
    SpectralData data;
    std::vector<double> misfit_history;  // after each relocation
    bool converged = false;
    int rank_loss = 0;  // solves that fell back to the basic QR solution
};

inline FitResult fit(const std::vector<cplx>& s, const std::vector<cplx>& f, int n, double w_min, double w_max,
                     FitOptions opt = {})
{
    FitResult out;
    std::vector<cplx> poles = initial_poles(w_min, w_max, n, opt.epsilon);
    for (int it = 0; it < opt.iterations; ++it) {
        poles = relocate(s, f, poles, opt.weighting, &out.rank_loss);
        out.misfit_history.push_back(relative_misfit(s, f, residues(s, f, poles, opt.weighting)));
    }
    out.data = residues(s, f, poles, opt.weighting, &out.rank_loss);
    out.data.flavor = SpectralFlavor::passive;
    canonical_order(out.data);
    out.data.misfit = relative_misfit(s, f, out.data);
    out.converged = out.data.misfit <= opt.tolerance;
    return out;
}

}  // namespace romembed
