#pragma once

#include "tfpp/caputo.hpp"
#include "tfpp/errors.hpp"
#include "tfpp/mittag_leffler.hpp"
#include "tfpp/parallel.hpp"
#include "tfpp/problem.hpp"
#include "tfpp/quadrature.hpp"
#include "tfpp/spectral.hpp"
#include "tfpp/time_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace tfpp {

enum class FunctionalKind { point, flux_right, mean };

inline std::string to_string(FunctionalKind k) {
    switch (k) {
    case FunctionalKind::point:
        return "point";
    case FunctionalKind::flux_right:
        return "flux";
    case FunctionalKind::mean:
        return "mean";
    }
    return "?";
}

inline FunctionalKind functional_kind_from(const std::string& s) {
    if (s == "point") {
        return FunctionalKind::point;
    }
    if (s == "flux" || s == "flux_right") {
        return FunctionalKind::flux_right;
    }
    if (s == "mean") {
        return FunctionalKind::mean;
    }
    throw ParameterError("unknown functional '" + s + "' (expected point, flux or mean)");
}

/// F[v_k] in closed form.
inline double functional_on_mode(FunctionalKind kind, std::size_t k, double x0 = 0.5) {
    const double kp = static_cast<double>(k) * std::numbers::pi;
    switch (kind) {
    case FunctionalKind::point:
        return std::numbers::sqrt2 * std::sin(kp * x0);
    case FunctionalKind::flux_right:
        return (k % 2 == 0 ? 1.0 : -1.0) * std::numbers::sqrt2 * kp;
    case FunctionalKind::mean:
        return k % 2 == 0 ? 0.0 : 2.0 * std::numbers::sqrt2 / kp;
    }
    return 0.0;
}

inline double default_gamma(FunctionalKind kind) {
    switch (kind) {
    case FunctionalKind::point:
        return 0.5;
    case FunctionalKind::flux_right:
        return 1.0;
    case FunctionalKind::mean:
        return 0.0;
    }
    return 0.0;
}

struct Functional {
    FunctionalKind kind = FunctionalKind::mean;
    double x0 = 0.5;
    double gamma = 0.0;
    std::vector<double> fv;     // F[v_k], k = 1..K
    double c_f = 0.0;           // sqrt(sum_k |F[v_k] / lambda_k^gamma|^2), truncated at K
    double c_f_tail_sq = 0.0;   // bound on the omitted part of the squared sum
    double f_g = 0.0;           // F[g]
    double f_resolvent_g = 0.0; // F[(I + mu A)^-1 g]
    std::vector<std::string> warnings;

    std::size_t K() const noexcept { return fv.size(); }

    /// F applied to a function of x. The flux uses a fourth-order one-sided
    /// difference at x = 1.
    template <class F>
    double apply(F&& f, double quad_tol = 1e-10) const {
        switch (kind) {
        case FunctionalKind::point:
            return f(x0);
        case FunctionalKind::mean:
            return integrate(f, 0.0, 1.0, quad_tol).value;
        case FunctionalKind::flux_right: {
            const double h = 1e-3;
            return (25.0 * f(1.0) - 48.0 * f(1.0 - h) + 36.0 * f(1.0 - 2.0 * h) - 16.0 * f(1.0 - 3.0 * h) +
                    3.0 * f(1.0 - 4.0 * h)) /
                   (12.0 * h);
        }
        }
        return 0.0;
    }
};

namespace detail {
/// Upper bound for sum_{k > K} |F[v_k]|^2 / lambda_k^{2 gamma} from
/// |F[v_k]|^2 <= C k^{2p}; infinite when the series diverges.
inline double functional_tail_sq(FunctionalKind kind, double gamma, std::size_t K) {
    const double pi = std::numbers::pi;
    double C = 0.0;
    double p = 0.0;
    switch (kind) {
    case FunctionalKind::point:
        C = 2.0;
        p = 0.0;
        break;
    case FunctionalKind::flux_right:
        C = 2.0 * pi * pi;
        p = 1.0;
        break;
    case FunctionalKind::mean:
        C = 8.0 / (pi * pi);
        p = -1.0;
        break;
    }
    const double q = 4.0 * gamma - 2.0 * p; // terms <= C pi^{-4 gamma} k^{-q}
    if (q <= 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    return C * std::pow(pi, -4.0 * gamma) * std::pow(static_cast<double>(K), 1.0 - q) / (q - 1.0);
}
} // namespace detail

/// Builds the functional descriptor and checks F[g] != 0 and
/// F[(I + mu A)^-1 g] != 0.
inline Functional make_functional(FunctionalKind kind, const ProblemSpec& spec, std::size_t K, double x0 = 0.5,
                                  std::optional<double> gamma = std::nullopt, double quad_tol = 1e-10) {
    if (K < 1) {
        throw ParameterError("functional needs K >= 1");
    }
    if (kind == FunctionalKind::point && !(x0 > 0.0 && x0 < 1.0)) {
        throw ParameterError("point functional needs 0 < x0 < 1");
    }
    if (!spec.g) {
        throw ParameterError("functional needs g");
    }
    Functional f;
    f.kind = kind;
    f.x0 = x0;
    f.gamma = gamma.value_or(default_gamma(kind));
    f.fv.resize(K);
    double sq = 0.0;
    double res = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double fv = functional_on_mode(kind, k, x0);
        const double lambda = eigenvalue(k);
        f.fv[k - 1] = fv;
        const double w = fv / std::pow(lambda, f.gamma);
        sq += w * w;
        res += fourier_coeff(spec.g, k, quad_tol) * fv / (1.0 + spec.mu * lambda);
    }
    f.c_f = std::sqrt(sq);
    f.c_f_tail_sq = detail::functional_tail_sq(kind, f.gamma, K);
    if (!(f.c_f_tail_sq <= 0.01 * sq)) {
        std::ostringstream os;
        os << "tail of sum |F[v_k]/lambda_k^gamma|^2 past K=" << K << " is bounded by " << f.c_f_tail_sq
           << ", more than 1% of the partial sum " << sq;
        f.warnings.push_back(os.str());
    }
    f.f_g = f.apply(spec.g, quad_tol);
    f.f_resolvent_g = res;
    if (!(std::abs(f.f_g) >= 1e-12)) {
        std::ostringstream os;
        os << "admissibility violated: F[g] = " << f.f_g << " (must be nonzero)";
        throw AdmissibilityError("F[g] != 0", os.str());
    }
    if (!(std::abs(f.f_resolvent_g) >= 1e-12)) {
        std::ostringstream os;
        os << "admissibility violated: F[(I + mu A)^-1 g] = " << f.f_resolvent_g << " (must be nonzero)";
        throw AdmissibilityError("F[(I+mu A)^-1 g] != 0", os.str());
    }
    return f;
}

enum class DphiMode { analytic, numeric_l1 };

inline std::string to_string(DphiMode m) {
    return m == DphiMode::analytic ? "analytic" : "numeric-L1";
}

/// Observed Phi(t) = F[u(t)] on the mesh, optionally with its Caputo
/// derivative in closed form.
struct Observation {
    std::vector<double> phi_samples;
    ScalarFn dphi;

    DphiMode mode() const { return dphi ? DphiMode::analytic : DphiMode::numeric_l1; }

    static Observation from_function(const ScalarFn& phi, const TimeMesh& mesh, ScalarFn dphi = {}) {
        return {sample_on(phi, mesh), std::move(dphi)};
    }
};

/// Caputo derivative of Phi at t_1..t_M.
inline std::vector<double> caputo_phi(const Observation& obs, const TimeMesh& mesh, double rho) {
    if (obs.phi_samples.size() != mesh.M() + 1) {
        throw ShapeError("observation must have M + 1 samples");
    }
    if (obs.mode() == DphiMode::numeric_l1) {
        return caputo_l1(obs.phi_samples, mesh, rho);
    }
    std::vector<double> out(mesh.M());
    for (std::size_t k = 1; k <= mesh.M(); ++k) {
        out[k - 1] = obs.dphi(mesh.t(k));
    }
    return out;
}

/// Phi(0) must equal F[phi].
inline void check_compatibility(const Observation& obs, const Functional& f, const ProblemSpec& spec,
                                double tol = 1e-8) {
    const double fphi = f.apply(spec.phi);
    const double diff = std::abs(obs.phi_samples.at(0) - fphi);
    if (!(diff <= tol)) {
        std::ostringstream os;
        os << "observation incompatible with the initial data: Phi(0) = " << obs.phi_samples[0]
           << " but F[phi] = " << fphi;
        throw AdmissibilityError("Phi(0) = F[phi]", os.str());
    }
}

/// B[r](t_j) = D^rho Phi(t_j)/f_res + sigma(t_j)/f_res sum_k lambda_k/(1 + mu lambda_k) u_k(t_j) F[v_k],
/// with u_k the modal solutions driven by r. dphi has M + 1 entries.
inline std::vector<double> apply_B(std::span<const double> r_samples, const Functional& f, const ModalCache& cache,
                                   std::span<const double> dphi, const SpectralOptions& opt = {}) {
    const std::size_t M = cache.mesh.M();
    const std::size_t K = std::min(cache.K(), f.K());
    if (r_samples.size() != M + 1 || dphi.size() != M + 1) {
        throw ShapeError("apply_B: samples must have M + 1 entries");
    }
    std::vector<std::vector<double>> contrib(K);
    parallel_for(K, opt.threads, [&](std::size_t i) {
        if (f.fv[i] == 0.0) {
            return;
        }
        const double kappa = cache.lambdas[i] / (1.0 + cache.mu * cache.lambdas[i]);
        auto sol = cache.solve(i + 1, r_samples, opt.picard_tol, opt.picard_cap);
        for (double& v : sol.u) {
            v *= kappa * f.fv[i];
        }
        contrib[i] = std::move(sol.u);
    });
    std::vector<double> out(M + 1);
    for (std::size_t j = 0; j <= M; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < K; ++i) {
            if (!contrib[i].empty()) {
                s += contrib[i][j];
            }
        }
        out[j] = (dphi[j] + cache.sigma_samples[j] * s) / f.f_resolvent_g;
    }
    return out;
}

struct C1Bound {
    double value = 0.0;     // may overflow to +inf
    double log_value = 0.0; // natural log, finite when value overflows
    double prefactor = 0.0;
    double argument = 0.0;  // argument of E_{rho,1}
};

/// C_1 = (||D^rho Phi|| / |f_res| + C_F M_sigma ||phi||_gamma / (mu |f_res|))
///       * E_{rho,1}(C_F M_sigma T^rho ||g||_gamma / (mu |f_res|)),
/// with the D(A^gamma) norms truncated at K modes.
inline C1Bound c1_bound(const ModalCache& cache, const Functional& f, std::span<const double> dphi, double T) {
    double dmax = 0.0;
    for (double v : dphi) {
        dmax = std::max(dmax, std::abs(v));
    }
    double np = 0.0;
    double ng = 0.0;
    const std::size_t K = std::min(cache.K(), f.K());
    for (std::size_t i = 0; i < K; ++i) {
        const double w = std::pow(cache.lambdas[i], f.gamma);
        np += std::pow(w * cache.phi_coeffs[i], 2);
        ng += std::pow(w * cache.g_coeffs[i], 2);
    }
    np = std::sqrt(np);
    ng = std::sqrt(ng);
    const double fr = std::abs(f.f_resolvent_g);
    const double Ms = cache.bounds.max;
    C1Bound b;
    b.prefactor = dmax / fr + f.c_f * Ms * np / (cache.mu * fr);
    b.argument = f.c_f * Ms * std::pow(T, cache.rho) * ng / (cache.mu * fr);
    const MittagLeffler e({cache.rho, 1.0});
    if (b.prefactor == 0.0) {
        b.value = 0.0;
        b.log_value = -std::numeric_limits<double>::infinity();
        return b;
    }
    const double ev = e(b.argument);
    b.value = b.prefactor * ev;
    b.log_value = std::log(b.prefactor) + (b.argument > 0.0 ? e.log_positive(b.argument) : std::log(ev));
    return b;
}

struct InverseOptions {
    SpectralOptions spectral{16, 1e-10, 1e-10, 200, 1};
    double tol = 1e-8;
    int max_iter = 500;
    double theta = 1.0;
    bool auto_relax = true;
    std::optional<std::vector<double>> r0;
};

struct InverseResult {
    std::vector<double> r_samples;
    int iterations = 0;
    std::vector<double> residual_history; // ||B[r_n] - r_n||_inf
    C1Bound c1;
    bool bound_violated = false;
    double theta = 1.0;
    DphiMode dphi_mode = DphiMode::analytic;
    double f_g = 0.0;
    double f_resolvent_g = 0.0;
    double c_f = 0.0;
};

namespace detail {
inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

/// Residuals whose successive differences alternate in sign `run` times in a row.
inline bool oscillating(const std::vector<double>& h, std::size_t run = 5) {
    if (h.size() < run + 2) {
        return false;
    }
    for (std::size_t i = h.size() - run; i < h.size(); ++i) {
        const double d1 = h[i] - h[i - 1];
        const double d0 = h[i - 1] - h[i - 2];
        if (!(d1 * d0 < 0.0)) {
            return false;
        }
    }
    return true;
}
} // namespace detail

/// Fixed-point iteration r <- (1 - theta) r + theta B[r], started from
/// D^rho Phi / f_res unless opt.r0 is given.
inline InverseResult recover(const ProblemSpec& spec, const Functional& f, const Observation& obs,
                             const TimeMesh& mesh, const InverseOptions& opt = {}) {
    if (!(opt.tol > 0.0)) {
        throw ParameterError("inverse tolerance must be positive");
    }
    if (!(opt.theta > 0.0 && opt.theta <= 1.0)) {
        throw ParameterError("relaxation factor must lie in (0, 1]");
    }
    ProblemSpec s = spec;
    s.source_r = {};
    const ModalCache cache = ModalCache::build(s, mesh, opt.spectral);
    check_compatibility(obs, f, s);

    const std::size_t M = mesh.M();
    const auto d = caputo_phi(obs, mesh, spec.rho);
    std::vector<double> dphi(M + 1);
    dphi[0] = obs.mode() == DphiMode::analytic ? obs.dphi(0.0) : 0.0;
    std::copy(d.begin(), d.end(), dphi.begin() + 1);

    InverseResult res;
    res.dphi_mode = obs.mode();
    res.f_g = f.f_g;
    res.f_resolvent_g = f.f_resolvent_g;
    res.c_f = f.c_f;
    res.c1 = c1_bound(cache, f, dphi, spec.T);
    res.theta = opt.theta;

    std::vector<double> r(M + 1);
    if (opt.r0) {
        if (opt.r0->size() != M + 1) {
            throw ShapeError("initial guess must have M + 1 entries");
        }
        r = *opt.r0;
    } else {
        for (std::size_t j = 0; j <= M; ++j) {
            r[j] = dphi[j] / f.f_resolvent_g;
        }
    }
    double theta = opt.theta;
    bool relaxed = false;
    for (int it = 1; it <= opt.max_iter; ++it) {
        const auto b = apply_B(r, f, cache, dphi, opt.spectral);
        const double resid = detail::max_abs_diff(b, r);
        res.residual_history.push_back(resid);
        res.iterations = it;
        if (resid <= opt.tol) {
            res.r_samples = r;
            res.theta = theta;
            double rmax = 0.0;
            for (double v : r) {
                rmax = std::max(rmax, std::abs(v));
            }
            res.bound_violated = !(rmax <= res.c1.value + 1e-6);
            return res;
        }
        if (opt.auto_relax && !relaxed && theta == 1.0 && detail::oscillating(res.residual_history)) {
            theta = 0.5;
            relaxed = true;
        }
        for (std::size_t j = 0; j <= M; ++j) {
            r[j] = (1.0 - theta) * r[j] + theta * b[j];
        }
    }
    std::ostringstream os;
    os << "source recovery did not converge to " << opt.tol << " in " << opt.max_iter << " iterations (last residual "
       << res.residual_history.back() << ")";
    throw ConvergenceError(os.str(), res.residual_history);
}

} // namespace tfpp
