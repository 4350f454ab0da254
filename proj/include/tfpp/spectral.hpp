#pragma once

#include "tfpp/errors.hpp"
#include "tfpp/grid.hpp"
#include "tfpp/mittag_leffler.hpp"
#include "tfpp/parallel.hpp"
#include "tfpp/problem.hpp"
#include "tfpp/quadrature.hpp"
#include "tfpp/time_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

namespace tfpp {

inline double eigenvalue(std::size_t k) {
    if (k < 1) {
        throw IndexError("eigen index must be >= 1");
    }
    const double a = std::numbers::pi * static_cast<double>(k);
    return a * a;
}

/// sqrt(2) sin(k pi x).
inline double eigenfunction(std::size_t k, double x) {
    if (k < 1) {
        throw IndexError("eigen index must be >= 1");
    }
    return std::numbers::sqrt2 * std::sin(static_cast<double>(k) * std::numbers::pi * x);
}

struct Eigenpair {
    double lambda;
    std::function<double(double)> v;
};

inline Eigenpair eigensystem(std::size_t k) {
    const double lambda = eigenvalue(k);
    return {lambda, [k](double x) { return eigenfunction(k, x); }};
}

/// int_0^1 f(x) sqrt(2) sin(k pi x) dx.
template <class F>
double fourier_coeff(F&& f, std::size_t k, double tol = 1e-10) {
    if (k < 1) {
        throw IndexError("eigen index must be >= 1");
    }
    const double w = static_cast<double>(k) * std::numbers::pi;
    auto integrand = [&](double x) { return f(x) * std::numbers::sqrt2 * std::sin(w * x); };
    return integrate(integrand, 0.0, 1.0, tol).value;
}

/// Product-integration weights for
///   int_0^{t_n} (t_n - s)^{rho-1} E_{rho,rho}(-c (t_n - s)^rho) f(s) ds
/// with f replaced by its piecewise-linear interpolant on the mesh.
/// Moments over intervals close to the singularity come from the closed-form
/// antiderivatives; the remaining ones from 8-point Gauss-Legendre.
class ModalKernel {
public:
    ModalKernel(double rho, double c, const TimeMesh& mesh) : rho_(rho), c_(c), M_(mesh.M()) {
        if (!(rho > 0.0 && rho < 1.0)) {
            throw ParameterError("kernel order must lie in (0, 1)");
        }
        if (!(c >= 0.0) || !std::isfinite(c)) {
            throw ParameterError("kernel rate must be finite and nonnegative");
        }
        const MittagLeffler e1({rho, 1.0});
        const MittagLeffler ek({rho, rho});
        const MittagLeffler e0({rho, rho + 1.0});
        const MittagLeffler e2({rho, rho + 2.0});
        auto kernel = [&](double w) { return std::pow(w, rho - 1.0) * ek(-c * std::pow(w, rho)); };
        auto j0 = [&](double x) {
            const double xr = std::pow(x, rho);
            return xr * e0(-c * xr);
        };
        auto j1 = [&](double x) {
            if (x == 0.0) {
                return 0.0;
            }
            const double xr = std::pow(x, rho);
            return x * xr * (e0(-c * xr) - e2(-c * xr));
        };

        const Gauss8Rule rule;
        const auto& t = mesh.nodes();
        const auto& tau = mesh.steps();
        offsets_.resize(M_ + 2, 0);
        for (std::size_t n = 1; n <= M_; ++n) {
            offsets_[n + 1] = offsets_[n] + n + 1;
        }
        weights_.assign(offsets_[M_ + 1], 0.0);
        decay_.resize(M_ + 1);
        decay_[0] = 1.0;
        for (std::size_t n = 1; n <= M_; ++n) {
            decay_[n] = e1(-c * std::pow(t[n], rho));
            double* w = weights_.data() + offsets_[n];
            for (std::size_t j = 1; j <= n; ++j) {
                const double a = t[n] - t[j];
                const double b = t[n] - t[j - 1];
                const double h = tau[j];
                double left = 0.0;  // weight on f_{j-1}
                double right = 0.0; // weight on f_j
                if (a >= 2.0 * h) {
                    const double mid = 0.5 * (a + b);
                    const double half = 0.5 * h;
                    for (std::size_t q = 0; q < 8; ++q) {
                        const double s = mid + half * rule.x[q];
                        const double kw = rule.w[q] * half * kernel(s);
                        left += kw * (s - a);
                        right += kw * (b - s);
                    }
                    left /= h;
                    right /= h;
                } else {
                    const double d0 = j0(b) - j0(a);
                    const double d1 = j1(b) - j1(a);
                    left = (d1 - a * d0) / h;
                    right = (b * d0 - d1) / h;
                }
                w[j - 1] += left;
                w[j] += right;
            }
        }
    }

    double rho() const noexcept { return rho_; }
    double c() const noexcept { return c_; }
    std::size_t M() const noexcept { return M_; }

    /// E_{rho,1}(-c t_n^rho).
    double decay(std::size_t n) const { return decay_.at(n); }

    /// Weights on f_0..f_n for node n.
    std::span<const double> row(std::size_t n) const {
        if (n < 1 || n > M_) {
            throw IndexError("kernel row out of range");
        }
        return {weights_.data() + offsets_[n], n + 1};
    }

    double convolve(std::size_t n, std::span<const double> f) const {
        const auto w = row(n);
        double s = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            s += w[j] * f[j];
        }
        return s;
    }

private:
    double rho_;
    double c_;
    std::size_t M_;
    std::vector<std::size_t> offsets_;
    std::vector<double> weights_;
    std::vector<double> decay_;
};

struct SpectralOptions {
    std::size_t K = 64;
    double quad_tol = 1e-10;
    double picard_tol = 1e-10;
    int picard_cap = 200;
    unsigned threads = 1;
};

struct ModeSolution {
    std::vector<double> u;
    int sweeps = 0;
    std::vector<double> history; // max-norm change per sweep
};

struct ModeData {
    std::size_t k = 1;
    double lambda = 0.0;
    double phi = 0.0; // phi_k
    double g = 0.0;   // g_k
};

/// Product integration of
///   u(t) = phi_k E_{rho,1}(-c t^rho) + g_k/(1+mu lambda) int r K
///        + lambda/(1+mu lambda) int (M_sigma - sigma) u K,   c = lambda M_sigma/(1+mu lambda),
/// with Picard sweeps on the last term.
inline ModeSolution solve_volterra(const ModalKernel& ker, const ModeData& mode, double mu, double sigma_max,
                                   std::span<const double> sigma_samples, std::span<const double> r_samples,
                                   double picard_tol = 1e-10, int picard_cap = 200) {
    const std::size_t M = ker.M();
    if (r_samples.size() != M + 1 || sigma_samples.size() != M + 1) {
        throw ShapeError("source and sigma samples must have M + 1 entries");
    }
    const double scale = 1.0 / (1.0 + mu * mode.lambda);
    const double kappa = mode.lambda * scale;

    std::vector<double> base(M + 1);
    base[0] = mode.phi;
    for (std::size_t n = 1; n <= M; ++n) {
        base[n] = mode.phi * ker.decay(n) + mode.g * scale * ker.convolve(n, r_samples);
    }
    std::vector<double> gap(M + 1);
    for (std::size_t j = 0; j <= M; ++j) {
        gap[j] = sigma_max - sigma_samples[j];
    }

    ModeSolution sol;
    sol.u = base;
    std::vector<double> f(M + 1), next(M + 1);
    for (int sweep = 1; sweep <= picard_cap; ++sweep) {
        for (std::size_t j = 0; j <= M; ++j) {
            f[j] = gap[j] * sol.u[j];
        }
        next[0] = base[0];
        double change = 0.0;
        for (std::size_t n = 1; n <= M; ++n) {
            next[n] = base[n] + kappa * ker.convolve(n, f);
            change = std::max(change, std::abs(next[n] - sol.u[n]));
        }
        sol.u.swap(next);
        sol.history.push_back(change);
        sol.sweeps = sweep;
        if (change < picard_tol) {
            return sol;
        }
    }
    std::ostringstream os;
    os << "Picard iteration for mode " << mode.k << " did not reach " << picard_tol << " in "
       << picard_cap << " sweeps";
    throw ConvergenceError(os.str(), sol.history);
}

/// Everything about modes 1..K that does not depend on r: eigenvalues,
/// Fourier coefficients, sigma on the mesh and the kernels with rate
/// lambda_k M_sigma / (1 + mu lambda_k).
struct ModalCache {
    double rho = 0.5;
    double mu = 1.0;
    TimeMesh mesh;
    SigmaBounds bounds;
    std::vector<double> sigma_samples;
    std::vector<double> lambdas;
    std::vector<double> phi_coeffs;
    std::vector<double> g_coeffs;
    std::vector<ModalKernel> kernels;

    std::size_t K() const noexcept { return lambdas.size(); }

    static ModalCache build(const ProblemSpec& spec, const TimeMesh& mesh, const SpectralOptions& opt) {
        spec.validate();
        if (opt.K < 1) {
            throw ParameterError("mode count K must be >= 1");
        }
        ModalCache m{spec.rho, spec.mu, mesh, spec.sigma_bounds(mesh), {}, {}, {}, {}, {}};
        m.sigma_samples.resize(mesh.M() + 1);
        for (std::size_t j = 0; j <= mesh.M(); ++j) {
            m.sigma_samples[j] = spec.sigma(mesh.t(j));
        }
        const std::size_t K = opt.K;
        m.lambdas.resize(K);
        m.phi_coeffs.resize(K);
        m.g_coeffs.resize(K);
        std::vector<std::optional<ModalKernel>> kernels(K);
        parallel_for(K, opt.threads, [&](std::size_t i) {
            const std::size_t k = i + 1;
            const double lambda = eigenvalue(k);
            m.lambdas[i] = lambda;
            m.phi_coeffs[i] = fourier_coeff(spec.phi, k, opt.quad_tol);
            m.g_coeffs[i] = fourier_coeff(spec.g, k, opt.quad_tol);
            kernels[i].emplace(spec.rho, lambda * m.bounds.max / (1.0 + spec.mu * lambda), mesh);
        });
        m.kernels.reserve(K);
        for (auto& k : kernels) {
            m.kernels.push_back(std::move(*k));
        }
        return m;
    }

    /// Solves the modal Volterra equation for mode k (1-based) with the
    /// source factor given by its samples on the mesh.
    ModeSolution solve(std::size_t k, std::span<const double> r_samples, double picard_tol = 1e-10,
                       int picard_cap = 200) const {
        if (k < 1 || k > K()) {
            throw IndexError("mode index out of range of the cache");
        }
        const std::size_t i = k - 1;
        return solve_volterra(kernels[i], {k, lambdas[i], phi_coeffs[i], g_coeffs[i]}, mu, bounds.max,
                              sigma_samples, r_samples, picard_tol, picard_cap);
    }
};

inline std::vector<double> sample_on(const ScalarFn& f, const TimeMesh& mesh) {
    std::vector<double> s(mesh.M() + 1);
    for (std::size_t j = 0; j <= mesh.M(); ++j) {
        s[j] = f(mesh.t(j));
    }
    return s;
}

inline std::vector<double> solve_mode(const ProblemSpec& spec, std::size_t k, const TimeMesh& mesh,
                                      const SpectralOptions& opt = {}) {
    if (!spec.has_source()) {
        throw ParameterError("forward solve needs the source factor r(t)");
    }
    spec.validate();
    const double lambda = eigenvalue(k);
    const SigmaBounds b = spec.sigma_bounds(mesh);
    const ModalKernel ker(spec.rho, lambda * b.max / (1.0 + spec.mu * lambda), mesh);
    const ModeData mode{k, lambda, fourier_coeff(spec.phi, k, opt.quad_tol), fourier_coeff(spec.g, k, opt.quad_tol)};
    return solve_volterra(ker, mode, spec.mu, b.max, sample_on(spec.sigma, mesh), sample_on(spec.source_r, mesh),
                          opt.picard_tol, opt.picard_cap)
        .u;
}

/// Pointwise upper bound for |u_k(t_j)| built from m_sigma:
/// |phi_k| E_{rho,1}(-c_m t^rho) + |g_k|/(1 + mu lambda_k) int |r| K_m.
inline std::vector<double> modal_estimate_bound(const ProblemSpec& spec, std::size_t k, const TimeMesh& mesh,
                                                const SpectralOptions& opt = {}) {
    if (!spec.has_source()) {
        throw ParameterError("modal estimate needs the source factor r(t)");
    }
    spec.validate();
    const double lambda = eigenvalue(k);
    const SigmaBounds b = spec.sigma_bounds(mesh);
    const double scale = 1.0 / (1.0 + spec.mu * lambda);
    const ModalKernel ker(spec.rho, lambda * b.min * scale, mesh);
    const double phik = std::abs(fourier_coeff(spec.phi, k, opt.quad_tol));
    const double gk = std::abs(fourier_coeff(spec.g, k, opt.quad_tol));
    std::vector<double> absr = sample_on(spec.source_r, mesh);
    for (double& v : absr) {
        v = std::abs(v);
    }
    std::vector<double> bound(mesh.M() + 1);
    bound[0] = phik;
    for (std::size_t n = 1; n <= mesh.M(); ++n) {
        bound[n] = phik * ker.decay(n) + gk * scale * ker.convolve(n, absr);
    }
    return bound;
}

struct ModalSet {
    std::size_t K = 0;
    TimeMesh mesh;
    std::vector<double> lambdas;
    std::vector<double> phi_coeffs;
    std::vector<double> g_coeffs;
    std::vector<std::vector<double>> mode_solutions;
    std::vector<int> sweeps;
    /// |phi_K| + |g_K| sup|r| / (lambda_K m_sigma).
    double tail_estimate = 0.0;
};

inline ModalSet solve_modes(const ModalCache& cache, std::span<const double> r_samples, const SpectralOptions& opt) {
    const std::size_t K = cache.K();
    ModalSet set{K, cache.mesh, cache.lambdas, cache.phi_coeffs, cache.g_coeffs, {}, {}, 0.0};
    set.mode_solutions.resize(K);
    set.sweeps.resize(K);
    parallel_for(K, opt.threads, [&](std::size_t i) {
        auto sol = cache.solve(i + 1, r_samples, opt.picard_tol, opt.picard_cap);
        set.mode_solutions[i] = std::move(sol.u);
        set.sweeps[i] = sol.sweeps;
    });
    double rmax = 0.0;
    for (double v : r_samples) {
        rmax = std::max(rmax, std::abs(v));
    }
    set.tail_estimate = std::abs(cache.phi_coeffs[K - 1]) +
                        std::abs(cache.g_coeffs[K - 1]) * rmax / (cache.lambdas[K - 1] * cache.bounds.min);
    return set;
}

inline ModalSet solve_modes(const ProblemSpec& spec, const TimeMesh& mesh, const SpectralOptions& opt = {}) {
    if (!spec.has_source()) {
        throw ParameterError("forward solve needs the source factor r(t)");
    }
    const ModalCache cache = ModalCache::build(spec, mesh, opt);
    return solve_modes(cache, sample_on(spec.source_r, mesh), opt);
}

/// u(x_i, t_j) = sum_k u_k(t_j) sqrt(2) sin(k pi x_i); boundary values are 0.
inline SolutionField assemble(const ModalSet& modes, const SpaceGrid& space, unsigned threads = 1) {
    SolutionField field(space, modes.mesh);
    const std::size_t N = space.N();
    std::vector<double> basis(modes.K * (N + 1));
    for (std::size_t k = 1; k <= modes.K; ++k) {
        for (std::size_t i = 1; i < N; ++i) {
            basis[(k - 1) * (N + 1) + i] = eigenfunction(k, space.x(i));
        }
    }
    parallel_for(modes.mesh.M() + 1, threads, [&](std::size_t j) {
        auto row = field.row(j);
        for (std::size_t k = 0; k < modes.K; ++k) {
            const double uk = modes.mode_solutions[k][j];
            if (uk == 0.0) {
                continue;
            }
            const double* v = basis.data() + k * (N + 1);
            for (std::size_t i = 1; i < N; ++i) {
                row[i] += uk * v[i];
            }
        }
        row[0] = 0.0;
        row[N] = 0.0;
    });
    return field;
}

} // namespace tfpp
