#include "tfpp/tfpp.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

namespace {

using namespace tfpp;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;
constexpr int kIoError = 4;

struct Globals {
    std::string config;
    std::string out;
    unsigned threads = 1;
    std::uint64_t seed = 0;
};

RunConfig load_config(const Globals& g) {
    if (g.config.empty()) {
        throw ConfigError("--config is required");
    }
    return RunConfig::load(g.config);
}

void require_out(const Globals& g) {
    if (g.out.empty()) {
        throw ConfigError("--out is required");
    }
}

json header(const std::string& cmd, const RunConfig& c, const Globals& g) {
    json j = report_header(cmd, c);
    j["threads"] = g.threads;
    j["seed"] = g.seed;
    return j;
}

int cmd_ml(double rho, double beta, double z) {
    const double v = ml({rho, beta}, z);
    std::printf("%.15g\n", v);
    return kOk;
}

int cmd_forward(const Globals& g, const std::string& method, bool exact) {
    require_out(g);
    const RunConfig c = load_config(g);
    const RunMode mode = method == "fd" ? RunMode::forward_fd : RunMode::forward_spectral;
    c.validate(mode);
    if (exact && c.u_exact.empty()) {
        throw ConfigError("--exact needs 'u_exact' in the config");
    }
    json rep = header("forward", c, g);
    rep["method"] = method;
    SolutionField field = [&] {
        if (mode == RunMode::forward_fd) {
            FdStats stats;
            SolutionField f = run_fd(c, &stats);
            rep["fd_stats"] = to_json(stats);
            const auto bd = boundary_derivatives(f);
            rep["u_x_left_final"] = num(bd.left.back());
            rep["u_x_right_final"] = num(bd.right.back());
            return f;
        }
        double tail = 0.0;
        SolutionField f = run_spectral(c, g.threads, &tail);
        rep["modal_tail_estimate"] = num(tail);
        return f;
    }();
    write_field(g.out, field);
    if (exact) {
        const ErrorReport e = error_report(field, exact_of(c));
        std::vector<double> t, mx, l2;
        for (const auto& s : e.slices) {
            t.push_back(s.t);
            mx.push_back(s.max_err);
            l2.push_back(s.l2_err);
        }
        write_table(g.out + ".errors.csv", {"t", "max_err", "l2_err"}, {t, mx, l2});
        rep["errors"] = to_json(e);
    }
    write_json(g.out + ".report.json", rep);
    return kOk;
}

Observation load_observation(const std::string& obs, const RunConfig& c, const TimeMesh& mesh) {
    if (obs == "manufactured") {
        if (c.obs_phi.empty()) {
            throw ConfigError("--obs manufactured needs 'obs_phi' in the config");
        }
        ScalarFn dphi;
        if (!c.obs_dphi.empty()) {
            dphi = parse_expr(c.obs_dphi).of_t();
        }
        return Observation::from_function(parse_expr(c.obs_phi).of_t(), mesh, dphi);
    }
    auto cols = read_table(obs);
    if (!cols.count("t") || !cols.count("phi")) {
        throw ConfigError("observation CSV needs columns t and phi");
    }
    const auto& t = cols["t"];
    if (t.size() != mesh.M() + 1) {
        throw ConfigError("observation CSV must have one row per mesh node (M + 1 rows)");
    }
    for (std::size_t j = 0; j <= mesh.M(); ++j) {
        if (std::abs(t[j] - mesh.t(j)) > 1e-12 * std::max(1.0, mesh.T())) {
            throw ConfigError("observation CSV times do not match the configured mesh at row " + std::to_string(j + 1));
        }
    }
    Observation o{cols["phi"], {}};
    return o;
}

int cmd_inverse(const Globals& g, RunConfig c, const std::string& functional, double x0, std::optional<double> gamma,
                const std::string& obs) {
    require_out(g);
    if (!functional.empty()) {
        c.functional = functional;
    }
    if (x0 >= 0.0) {
        c.x0 = x0;
    }
    if (gamma) {
        c.gamma = gamma;
    }
    c.validate(RunMode::inverse);
    if (obs.empty()) {
        throw ConfigError("--obs is required (CSV path or 'manufactured')");
    }
    json rep = header("inverse", c, g);
    const ProblemSpec spec = c.to_problem();
    const TimeMesh mesh = config_mesh(c);
    const Functional f = make_functional(functional_kind_from(c.functional), spec, c.K, c.x0, c.gamma, c.quadrature_tol);
    rep["functional"] = {{"kind", to_string(f.kind)},
                         {"x0", f.x0},
                         {"gamma", f.gamma},
                         {"c_f", num(f.c_f)},
                         {"c_f_tail_sq_bound", num(f.c_f_tail_sq)},
                         {"f_g", num(f.f_g)},
                         {"f_resolvent_g", num(f.f_resolvent_g)},
                         {"warnings", f.warnings}};
    for (const auto& w : f.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    const Observation o = load_observation(obs, c, mesh);
    InverseOptions opt;
    opt.spectral = config_spectral(c, g.threads);
    opt.tol = c.inverse_tol;
    opt.max_iter = c.max_iter;
    opt.theta = c.theta;
    const InverseResult r = recover(spec, f, o, mesh, opt);
    rep["result"] = to_json(r);

    std::vector<std::string> headers{"t", "r_recovered"};
    std::vector<std::vector<double>> cols{mesh.nodes(), r.r_samples};
    if (!c.r_true.empty()) {
        const auto truth = sample_on(parse_expr(c.r_true).of_t(), mesh);
        std::vector<double> err(truth.size());
        double emax = 0.0;
        double rmax = 0.0;
        for (std::size_t j = 0; j < truth.size(); ++j) {
            err[j] = std::abs(r.r_samples[j] - truth[j]);
            emax = std::max(emax, err[j]);
            rmax = std::max(rmax, std::abs(truth[j]));
        }
        headers.insert(headers.end(), {"r_true", "abs_err"});
        cols.push_back(truth);
        cols.push_back(err);
        rep["max_abs_err"] = num(emax);
        rep["max_rel_err"] = num(rmax > 0.0 ? emax / rmax : emax);
    }
    write_table(g.out, headers, cols);
    write_json(g.out + ".report.json", rep);
    return kOk;
}

int cmd_convergence(const Globals& g) {
    require_out(g);
    const RunConfig c = load_config(g);
    const ConvergenceTable tab = convergence_study(c, g.threads);
    auto f = open_out(g.out);
    f << "study,n,max_err,ratio,order,richardson_order\n";
    auto opt = [](const std::optional<double>& v) { return v ? fmt17(*v) : std::string("NA"); };
    for (const auto& l : tab.temporal) {
        f << "temporal," << l.n << ',' << fmt17(l.max_err) << ',' << opt(l.ratio) << ',' << opt(l.order) << ','
          << opt(l.richardson) << '\n';
    }
    for (const auto& l : tab.spatial) {
        f << "spatial," << l.n << ',' << fmt17(l.max_err) << ',' << opt(l.ratio) << ',' << opt(l.order) << ",NA\n";
    }
    if (!f) {
        throw IoError("write failed for '" + g.out + "'");
    }
    json rep = header("convergence", c, g);
    rep["table"] = to_json(tab);
    write_json(g.out + ".report.json", rep);
    return kOk;
}

int cmd_reproduce(const Globals& g) {
    const std::string dir = g.out.empty() ? "reproduce_out" : g.out;
    const ReproduceReport r = reproduce_paper(dir, g.threads);
    json rep = header("reproduce-paper", worked_example_config(), g);
    rep["result"] = to_json(r);
    write_json((std::filesystem::path(dir) / "report.json").string(), rep);
    std::printf("fd max error %.6g, spectral max error %.6g, u(0.5,0) = %.15g, u(0.5,T) = %.15g\n", r.fd.max_err,
                r.spectral.max_err, r.fd_mid_start, r.fd_mid_end);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forward and inverse solvers for a time-fractional pseudo-parabolic equation"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "run configuration file");
    app.add_option("--out", g.out, "output path");
    app.add_option("--threads", g.threads, "worker threads (0 = all cores)")->default_val(1);
    app.add_option("--seed", g.seed, "seed for randomized utilities (recorded only)")->default_val(0);

    double rho = 0.0, beta = 0.0, z = 0.0;
    auto* ml_cmd = app.add_subcommand("ml", "evaluate the Mittag-Leffler function E_{rho,beta}(z)");
    ml_cmd->add_option("--rho", rho)->required();
    ml_cmd->add_option("--beta", beta)->required();
    ml_cmd->add_option("--z", z)->required();

    std::string method = "fd";
    bool exact = false;
    auto* fwd = app.add_subcommand("forward", "solve the forward problem");
    fwd->add_option("--method", method)->check(CLI::IsMember({"fd", "spectral"}));
    fwd->add_flag("--exact", exact, "write <out>.errors.csv against u_exact");

    std::string functional, obs;
    double x0 = -1.0;
    std::optional<double> gamma;
    auto* inv = app.add_subcommand("inverse", "recover r(t) from an observation");
    inv->add_option("--functional", functional)->check(CLI::IsMember({"point", "flux", "mean"}));
    inv->add_option("--x0", x0);
    inv->add_option("--gamma", gamma);
    inv->add_option("--obs", obs, "observation CSV (columns t, phi) or 'manufactured'");

    auto* conv = app.add_subcommand("convergence", "temporal and spatial refinement study");
    auto* rep = app.add_subcommand("reproduce-paper", "run the built-in worked example");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (ml_cmd->parsed()) {
            return cmd_ml(rho, beta, z);
        }
        if (fwd->parsed()) {
            return cmd_forward(g, method, exact);
        }
        if (inv->parsed()) {
            return cmd_inverse(g, load_config(g), functional, x0, gamma, obs);
        }
        if (conv->parsed()) {
            return cmd_convergence(g);
        }
        if (rep->parsed()) {
            return cmd_reproduce(g);
        }
    } catch (const AdmissibilityError& e) {
        std::cerr << "error: " << e.what() << " [condition: " << e.condition() << "]\n";
        return kNumericalError;
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericalError;
    }
    return kOk;
}
