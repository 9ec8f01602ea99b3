#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace romembed {

using cplx = std::complex<double>;

// Thrown when elimination meets a zero pivot; `row` is 0-based.
struct SolverBreakdown : std::runtime_error {
    int row;
    explicit SolverBreakdown(int r)
        : std::runtime_error("tridiagonal solve broke down (zero pivot) at row " + std::to_string(r)), row(r) {}
};

// Thomas algorithm. lower[i] couples row i+1 to column i, upper[i] couples row
// i to column i+1. No pivoting: a pivot below tol*scale is treated as zero.
template <class T>
std::vector<T> thomas(const std::vector<T>& lower, std::vector<T> diag, const std::vector<T>& upper,
                      std::vector<T> rhs, double tol = 1e-300)
{
    const size_t m = diag.size();
    for (size_t i = 0; i < m; ++i) {
        if (i > 0) {
            T w = lower[i - 1] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        if (std::abs(diag[i]) <= tol) throw SolverBreakdown(int(i));
    }
    std::vector<T> x(m);
    x[m - 1] = rhs[m - 1] / diag[m - 1];
    for (size_t i = m - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    return x;
}

// Staggered first-order system in unknown order [u0, uh1, u1, uh2, ..., u_{n-1}, uh_n]:
//   (uh_{j+1} - uh_j)/gh_{j+1} + (s + a) u_j  = 0,  uh_0 = 1 (unit flux at x=0)
//   (u_j - u_{j-1})/g_j      + (s + a) uh_j = 0,  u_n = 0
// gamma[j] holds g_{j+1}, gamma_hat[j] holds gh_{j+1}; alpha (may be empty) is
// added to the diagonal in the same order as the unknowns.
template <class W>
std::vector<cplx> staggered_solve(const std::vector<W>& gamma, const std::vector<W>& gamma_hat,
                                  const std::vector<cplx>& alpha, cplx s)
{
    const size_t n = gamma.size();
    const size_t m = 2 * n;
    std::vector<cplx> lo(m - 1), up(m - 1), d(m, s), rhs(m, 0.0);
    for (size_t j = 0; j < n; ++j) {
        cplx gh = gamma_hat[j], g = gamma[j];
        up[2 * j] = 1.0 / gh;                   // row u_j, column uh_{j+1}
        if (j > 0) lo[2 * j - 1] = -1.0 / gh;   // row u_j, column uh_j
        lo[2 * j] = -1.0 / g;                   // row uh_{j+1}, column u_j
        if (j + 1 < n) up[2 * j + 1] = 1.0 / g; // row uh_{j+1}, column u_{j+1}
    }
    if (!alpha.empty())
        for (size_t k = 0; k < m; ++k) d[k] += alpha[k];
    rhs[0] = 1.0 / cplx(gamma_hat[0]);
    return thomas(lo, d, up, rhs);
}

}  // namespace romembed
