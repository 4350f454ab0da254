#pragma once

#include "tfpp/caputo.hpp"
#include "tfpp/errors.hpp"
#include "tfpp/grid.hpp"
#include "tfpp/problem.hpp"
#include "tfpp/time_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <vector>

namespace tfpp {

/// Tridiagonal system for the interior unknowns u_1..u_{N-1}:
/// sub[i] u_{i-1} + diag[i] u_i + super[i] u_{i+1} = rhs[i].
struct StepSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;
    std::vector<double> rhs;
    double a = 0.0; // a^k
    double c = 0.0; // c^k

    std::size_t size() const noexcept { return diag.size(); }

    static StepSystem constant(std::size_t n, double a, double c, std::vector<double> rhs) {
        StepSystem s;
        s.sub.assign(n, -a);
        s.diag.assign(n, c);
        s.super.assign(n, -a);
        s.sub.front() = 0.0;
        s.super.back() = 0.0;
        s.rhs = std::move(rhs);
        s.a = a;
        s.c = c;
        return s;
    }
};

/// Strict row diagonal dominance; throws IllPosedSystemError otherwise.
inline void check_dominance(const StepSystem& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double off = std::abs(s.sub[i]) + std::abs(s.super[i]);
        if (!(std::abs(s.diag[i]) > off)) {
            std::ostringstream os;
            os << "tridiagonal system not strictly diagonally dominant at row " << i << ": |diag| = "
               << std::abs(s.diag[i]) << ", off-diagonal sum = " << off;
            throw IllPosedSystemError(os.str());
        }
    }
}

inline std::vector<double> thomas_solve(const StepSystem& s) {
    const std::size_t n = s.size();
    if (n == 0 || s.sub.size() != n || s.super.size() != n || s.rhs.size() != n) {
        throw ShapeError("tridiagonal system arrays must be non-empty and of equal length");
    }
    check_dominance(s);
    std::vector<double> cp(n), dp(n), x(n);
    cp[0] = s.super[0] / s.diag[0];
    dp[0] = s.rhs[0] / s.diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = s.diag[i] - s.sub[i] * cp[i - 1];
        cp[i] = s.super[i] / m;
        dp[i] = (s.rhs[i] - s.sub[i] * dp[i - 1]) / m;
    }
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
    return x;
}

/// Gaussian elimination with partial pivoting on the dense form of the system.
inline std::vector<double> dense_solve(const StepSystem& s) {
    const std::size_t n = s.size();
    std::vector<double> A(n * n, 0.0);
    std::vector<double> b = s.rhs;
    for (std::size_t i = 0; i < n; ++i) {
        A[i * n + i] = s.diag[i];
        if (i > 0) {
            A[i * n + i - 1] = s.sub[i];
        }
        if (i + 1 < n) {
            A[i * n + i + 1] = s.super[i];
        }
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) {
                piv = r;
            }
        }
        if (A[piv * n + col] == 0.0) {
            throw IllPosedSystemError("dense solve: singular matrix");
        }
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(A[col * n + j], A[piv * n + j]);
            }
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] / A[col * n + col];
            if (f == 0.0) {
                continue;
            }
            for (std::size_t j = col; j < n; ++j) {
                A[r * n + j] -= f * A[col * n + j];
            }
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double v = b[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            v -= A[i * n + j] * x[j];
        }
        x[i] = v / A[i * n + i];
    }
    return x;
}

/// max_i |(A x - b)_i|.
inline double residual_inf(const StepSystem& s, std::span<const double> x) {
    double r = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double v = s.diag[i] * x[i] - s.rhs[i];
        if (i > 0) {
            v += s.sub[i] * x[i - 1];
        }
        if (i + 1 < s.size()) {
            v += s.super[i] * x[i + 1];
        }
        r = std::max(r, std::abs(v));
    }
    return r;
}

struct FdOptions {
    /// Compare every Thomas solve against dense elimination (only for N <= 64).
    bool dense_check = false;
    double dense_tol = 1e-10;
};

struct FdStats {
    std::size_t steps_assembled = 0;
    double min_dominance_margin = std::numeric_limits<double>::infinity(); // min_k (c^k - 2a^k)
    double max_dense_mismatch = 0.0;
};

namespace detail {
/// W = u - mu * second difference of u, with zero Dirichlet values.
inline void pseudo_row(std::span<const double> u, double mu, double h, std::span<double> w) {
    const std::size_t N = u.size() - 1;
    const double s = mu / (h * h);
    w[0] = 0.0;
    w[N] = 0.0;
    for (std::size_t i = 1; i < N; ++i) {
        w[i] = u[i] - s * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
    }
}
} // namespace detail

/// Builds the level-k system from rows 0..k-1 of the field. Moving every
/// j < k contribution of the L1 sum to the right-hand side gives
///   b_i^k = (1/Gamma(2-rho)) [d_{k,1} W_i^0 + sum_{m=1}^{k-1} (d_{k,m+1} - d_{k,m}) W_i^m] + r(t_k) g(x_i)
/// with W = u - mu (u_{i+1} - 2u_i + u_{i-1})/h^2.
inline StepSystem assemble_step(const ProblemSpec& spec, const SolutionField& history, std::size_t k) {
    const TimeMesh& mesh = history.time();
    const SpaceGrid& grid = history.space();
    if (k < 1 || k > mesh.M()) {
        throw IndexError("step index must satisfy 1 <= k <= M");
    }
    if (!spec.has_source()) {
        throw ParameterError("forward solve needs the source factor r(t)");
    }
    const std::size_t N = grid.N();
    const double h = grid.h();
    const double gi = 1.0 / std::tgamma(2.0 - spec.rho);
    const auto d = l1_weights(mesh, spec.rho, k);
    const double dkk = d[k - 1];
    const double sk = spec.sigma(mesh.t(k));
    const double a = spec.mu * dkk * gi / (h * h) + sk / (h * h);
    const double c = dkk * gi + 2.0 * spec.mu * dkk * gi / (h * h) + 2.0 * sk / (h * h);

    std::vector<double> acc(N + 1, 0.0), w(N + 1);
    for (std::size_t m = 0; m < k; ++m) {
        const double coef = m == 0 ? d[0] : d[m] - d[m - 1];
        detail::pseudo_row(history.row(m), spec.mu, h, w);
        for (std::size_t i = 1; i < N; ++i) {
            acc[i] += coef * w[i];
        }
    }
    const double rk = spec.source_r(mesh.t(k));
    std::vector<double> rhs(N - 1);
    for (std::size_t i = 1; i < N; ++i) {
        rhs[i - 1] = gi * acc[i] + rk * spec.g(grid.x(i));
    }
    StepSystem sys = StepSystem::constant(N - 1, a, c, std::move(rhs));
    if (!(a > 0.0) || !(c - 2.0 * a > 0.0)) {
        std::ostringstream os;
        os << "assembled step " << k << " violates c > 2a > 0 (a = " << a << ", c = " << c << ")";
        throw IllPosedSystemError(os.str());
    }
    return sys;
}

/// Time march: row 0 is phi on the grid, each later row solves its
/// tridiagonal system with u_0 = u_N = 0.
inline SolutionField march(const ProblemSpec& spec, const SpaceGrid& grid, const TimeMesh& mesh,
                           const FdOptions& opt = {}, FdStats* stats = nullptr) {
    spec.validate();
    spec.sigma_bounds(mesh);
    if (!spec.has_source()) {
        throw ParameterError("forward solve needs the source factor r(t)");
    }
    SolutionField field(grid, mesh);
    const std::size_t N = grid.N();
    auto row0 = field.row(0);
    for (std::size_t i = 1; i < N; ++i) {
        row0[i] = spec.phi(grid.x(i));
    }
    FdStats local;
    for (std::size_t k = 1; k <= mesh.M(); ++k) {
        const StepSystem sys = assemble_step(spec, field, k);
        ++local.steps_assembled;
        local.min_dominance_margin = std::min(local.min_dominance_margin, sys.c - 2.0 * sys.a);
        auto x = thomas_solve(sys);
        if (opt.dense_check && N <= 64) {
            const auto y = dense_solve(sys);
            double diff = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                diff = std::max(diff, std::abs(x[i] - y[i]));
            }
            local.max_dense_mismatch = std::max(local.max_dense_mismatch, diff);
            if (diff > opt.dense_tol) {
                std::ostringstream os;
                os << "Thomas and dense solutions differ by " << diff << " at step " << k;
                throw IllPosedSystemError(os.str());
            }
        }
        auto row = field.row(k);
        for (std::size_t i = 1; i < N; ++i) {
            row[i] = x[i - 1];
        }
    }
    if (stats) {
        *stats = local;
    }
    return field;
}

struct BoundaryDerivatives {
    std::vector<double> left;  // u_x(0, t_k)
    std::vector<double> right; // u_x(1, t_k)
};

/// One-sided second-order differences at both ends for every time level.
inline BoundaryDerivatives boundary_derivatives(const SolutionField& field) {
    const std::size_t N = field.space().N();
    const double h = field.space().h();
    BoundaryDerivatives bd;
    for (std::size_t k = 0; k <= field.time().M(); ++k) {
        const auto u = field.row(k);
        if (N >= 2) {
            bd.left.push_back((-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h));
            bd.right.push_back((3.0 * u[N] - 4.0 * u[N - 1] + u[N - 2]) / (2.0 * h));
        }
    }
    return bd;
}

struct SliceError {
    double t = 0.0;
    double max_err = 0.0;
    double l2_err = 0.0;
};

struct ErrorReport {
    double max_err = 0.0;
    double l2_err = 0.0; // at t_M
    std::vector<SliceError> slices;
};

inline ErrorReport error_report(const SolutionField& field, const std::function<double(double, double)>& exact) {
    const auto& x = field.space().nodes();
    const double h = field.space().h();
    ErrorReport rep;
    for (std::size_t k = 0; k <= field.time().M(); ++k) {
        const double t = field.time().t(k);
        SliceError s{t, 0.0, 0.0};
        double sq = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double e = std::abs(field.at(i, k) - exact(x[i], t));
            s.max_err = std::max(s.max_err, e);
            sq += e * e;
        }
        s.l2_err = std::sqrt(h * sq);
        rep.max_err = std::max(rep.max_err, s.max_err);
        rep.slices.push_back(s);
    }
    rep.l2_err = rep.slices.back().l2_err;
    return rep;
}

} // namespace tfpp
