#pragma once

#include "tfpp/config.hpp"
#include "tfpp/csv.hpp"
#include "tfpp/expr.hpp"
#include "tfpp/fd_solver.hpp"
#include "tfpp/grid.hpp"
#include "tfpp/parallel.hpp"
#include "tfpp/spectral.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tfpp {

/// The worked example: sigma = 2 + sqrt(t), g = sqrt(2)(1 + pi^2) sin(pi x),
/// T = 5, mu = 1, rho = 1/2, exact solution 2(1 + t^2) sin(pi x). The initial
/// value is that solution's trace 2 sin(pi x).
inline RunConfig worked_example_config() {
    RunConfig c;
    c.rho = 0.5;
    c.mu = 1.0;
    c.T = 5.0;
    c.N = 1000;
    c.M = 100;
    c.K = 64;
    c.sigma = "2+sqrt(t)";
    c.phi = "2*sin(pi*x)";
    c.g = "sqrt(2)*(1+pi^2)*sin(pi*x)";
    c.r = "16/(3*sqrt(2*pi))*t^(3/2) + sqrt(2)*pi^2/(1+pi^2)*(2+sqrt(t))*(1+t^2)";
    c.u_exact = "2*(1+t^2)*sin(pi*x)";
    c.functional = "mean";
    c.obs_phi = "4*(1+t^2)/pi";
    c.obs_dphi = "32*t^(3/2)/(3*pi^(3/2))";
    c.r_true = c.r;
    return c;
}

inline TimeMesh config_mesh(const RunConfig& c) {
    return TimeMesh(*c.T, *c.M, c.resolved_grading());
}

inline SpectralOptions config_spectral(const RunConfig& c, unsigned threads) {
    return {c.K, c.quadrature_tol, c.picard_tol, c.picard_cap, threads};
}

inline std::function<double(double, double)> exact_of(const RunConfig& c) {
    if (c.u_exact.empty()) {
        return {};
    }
    const Expr e = parse_expr(c.u_exact);
    return [e](double x, double t) { return e.eval(x, t); };
}

inline SolutionField run_fd(const RunConfig& c, FdStats* stats = nullptr, const FdOptions& opt = {}) {
    return march(c.to_problem(), SpaceGrid(*c.N), config_mesh(c), opt, stats);
}

inline SolutionField run_spectral(const RunConfig& c, unsigned threads = 1, double* tail_estimate = nullptr) {
    const ModalSet set = solve_modes(c.to_problem(), config_mesh(c), config_spectral(c, threads));
    if (tail_estimate) {
        *tail_estimate = set.tail_estimate;
    }
    return assemble(set, SpaceGrid(*c.N), threads);
}

struct ReproduceReport {
    ErrorReport fd;
    ErrorReport spectral;
    double fd_mid_start = 0.0;  // u(0.5, 0)
    double fd_mid_end = 0.0;    // u(0.5, T)
    double spectral_mid_start = 0.0;
    double spectral_mid_end = 0.0;
    double boundary_max = 0.0;  // max |u| on x = 0 and x = 1, both solvers
    double max_solver_gap = 0.0;
    FdStats fd_stats;
    double fd_seconds = 0.0;
    double spectral_seconds = 0.0;
    std::vector<std::string> files;
};

/// Runs both forward solvers on the worked example and writes the surface
/// data, the t = T slice and the per-slice error table to out_dir.
inline ReproduceReport reproduce_paper(const std::string& out_dir, unsigned threads = 1) {
    const RunConfig c = worked_example_config();
    std::filesystem::create_directories(out_dir);
    const auto exact = exact_of(c);
    ReproduceReport rep;
    auto t0 = std::chrono::steady_clock::now();
    const SolutionField fd = run_fd(c, &rep.fd_stats);
    auto t1 = std::chrono::steady_clock::now();
    const SolutionField sp = run_spectral(c, threads);
    auto t2 = std::chrono::steady_clock::now();
    rep.fd_seconds = std::chrono::duration<double>(t1 - t0).count();
    rep.spectral_seconds = std::chrono::duration<double>(t2 - t1).count();
    rep.fd = error_report(fd, exact);
    rep.spectral = error_report(sp, exact);

    const std::size_t N = *c.N;
    const std::size_t M = *c.M;
    const std::size_t mid = N / 2;
    rep.fd_mid_start = fd.at(mid, 0);
    rep.fd_mid_end = fd.at(mid, M);
    rep.spectral_mid_start = sp.at(mid, 0);
    rep.spectral_mid_end = sp.at(mid, M);
    for (std::size_t k = 0; k <= M; ++k) {
        for (std::size_t i : {std::size_t{0}, N}) {
            rep.boundary_max = std::max({rep.boundary_max, std::abs(fd.at(i, k)), std::abs(sp.at(i, k))});
        }
        for (std::size_t i = 0; i <= N; ++i) {
            rep.max_solver_gap = std::max(rep.max_solver_gap, std::abs(fd.at(i, k) - sp.at(i, k)));
        }
    }

    const std::filesystem::path dir(out_dir);
    auto path = [&](const char* name) {
        rep.files.push_back((dir / name).string());
        return rep.files.back();
    };
    write_field(path("fd_surface.csv"), fd);
    write_field(path("spectral_surface.csv"), sp);
    std::vector<double> xs = fd.space().nodes(), ufd(N + 1), usp(N + 1), uex(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        ufd[i] = fd.at(i, M);
        usp[i] = sp.at(i, M);
        uex[i] = exact(xs[i], *c.T);
    }
    write_table(path("final_slice.csv"), {"x", "u_fd", "u_spectral", "u_exact"}, {xs, ufd, usp, uex});
    std::vector<double> ts, fm, fl, sm, sl;
    for (std::size_t k = 0; k <= M; ++k) {
        ts.push_back(rep.fd.slices[k].t);
        fm.push_back(rep.fd.slices[k].max_err);
        fl.push_back(rep.fd.slices[k].l2_err);
        sm.push_back(rep.spectral.slices[k].max_err);
        sl.push_back(rep.spectral.slices[k].l2_err);
    }
    write_table(path("errors.csv"), {"t", "fd_max_err", "fd_l2_err", "spectral_max_err", "spectral_l2_err"},
                {ts, fm, fl, sm, sl});
    return rep;
}

struct ConvergenceLevel {
    std::size_t n = 0;  // M for temporal levels, N for spatial ones
    double max_err = 0.0;
    std::optional<double> ratio;      // previous max_err / this max_err
    std::optional<double> order;      // log2(ratio)
    std::optional<double> richardson; // temporal only, from successive differences
};

struct ConvergenceTable {
    std::vector<ConvergenceLevel> temporal; // N fixed, M doubling
    std::vector<ConvergenceLevel> spatial;  // M fixed, N doubling
};

namespace detail {
inline void fill_orders(std::vector<ConvergenceLevel>& levels) {
    for (std::size_t l = 1; l < levels.size(); ++l) {
        const double a = levels[l - 1].max_err;
        const double b = levels[l].max_err;
        if (a > 0.0 && b > 0.0) {
            levels[l].ratio = a / b;
            levels[l].order = std::log2(a / b);
        }
    }
}
} // namespace detail

/// FD runs at M, 2M, 4M, ... (N fixed) and at N, 2N, 4N, ... (M fixed),
/// errors against u_exact. Temporal levels also get the Richardson order
/// log2(|u_M - u_2M| / |u_2M - u_4M|) over the coarse nodes, which is free
/// of the spatial error.
inline ConvergenceTable convergence_study(const RunConfig& c, unsigned threads = 1) {
    c.validate(RunMode::convergence);
    const auto exact = exact_of(c);
    const std::size_t L = c.refinements;
    ConvergenceTable tab;
    tab.temporal.resize(L);
    tab.spatial.resize(L);
    std::vector<std::optional<SolutionField>> tf(L);
    parallel_for(2 * L, threads, [&](std::size_t job) {
        RunConfig v = c;
        const std::size_t l = job % L;
        if (job < L) {
            v.M = *c.M << l;
            tf[l].emplace(run_fd(v));
            tab.temporal[l] = {*v.M, error_report(*tf[l], exact).max_err, {}, {}, {}};
        } else {
            v.N = *c.N << l;
            tab.spatial[l] = {*v.N, error_report(run_fd(v), exact).max_err, {}, {}, {}};
        }
    });
    detail::fill_orders(tab.temporal);
    detail::fill_orders(tab.spatial);
    const std::size_t N = *c.N;
    for (std::size_t l = 2; l < L; ++l) {
        const SolutionField& a = *tf[l - 2];
        const SolutionField& b = *tf[l - 1];
        const SolutionField& d = *tf[l];
        double d1 = 0.0;
        double d2 = 0.0;
        for (std::size_t k = 0; k <= a.time().M(); ++k) {
            for (std::size_t i = 0; i <= N; ++i) {
                d1 = std::max(d1, std::abs(a.at(i, k) - b.at(i, 2 * k)));
                d2 = std::max(d2, std::abs(b.at(i, 2 * k) - d.at(i, 4 * k)));
            }
        }
        if (d1 > 0.0 && d2 > 0.0) {
            tab.temporal[l].richardson = std::log2(d1 / d2);
        }
    }
    return tab;
}

} // namespace tfpp
