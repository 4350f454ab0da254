#pragma once

#include "tfpp/errors.hpp"
#include "tfpp/expr.hpp"
#include "tfpp/problem.hpp"
#include "tfpp/time_mesh.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

namespace tfpp {

enum class RunMode { forward_fd, forward_spectral, inverse, convergence, reproduce_paper };

/// Run description read from `key = value` lines ('#' starts a comment).
/// Function-valued keys hold expression strings: sigma, r, obs_phi, obs_dphi
/// and r_true in t; phi and g in x; u_exact in x and t.
struct RunConfig {
    std::optional<double> rho;
    std::optional<double> mu;
    std::optional<double> T;
    std::optional<std::size_t> N;
    std::optional<std::size_t> M;
    std::optional<double> grading; // unset: max(1, (2 - rho)/rho)
    std::size_t K = 64;

    std::string sigma;
    std::string phi;
    std::string g;
    std::string r;
    std::string u_exact;

    std::string functional = "mean";
    double x0 = 0.5;
    std::optional<double> gamma;
    std::string obs_phi;
    std::string obs_dphi;
    std::string r_true;

    double quadrature_tol = 1e-10;
    double picard_tol = 1e-10;
    int picard_cap = 200;
    double inverse_tol = 1e-8;
    int max_iter = 500;
    double theta = 1.0;
    std::size_t refinements = 3;

    bool operator==(const RunConfig&) const = default;

    double resolved_grading() const { return grading ? *grading : default_grading(rho.value_or(0.5)); }

    static RunConfig parse(const std::string& text) {
        RunConfig c;
        std::istringstream in(text);
        std::string line;
        std::set<std::string> seen;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) {
                line.erase(hash);
            }
            line = trim(line);
            if (line.empty()) {
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                fail(lineno, "expected 'key = value'");
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (!seen.insert(key).second) {
                fail(lineno, "duplicate key '" + key + "'");
            }
            if (value.empty()) {
                fail(lineno, "empty value for '" + key + "'");
            }
            c.set(key, value, lineno);
        }
        return c;
    }

    static RunConfig load(const std::string& path) {
        std::ifstream f(path);
        if (!f) {
            throw IoError("cannot read config file '" + path + "'");
        }
        std::stringstream ss;
        ss << f.rdbuf();
        return parse(ss.str());
    }

    /// Canonical text form; parse(to_text()) == *this.
    std::string to_text() const {
        std::ostringstream os;
        auto num = [&](const char* k, double v) { os << k << " = " << fmt(v) << "\n"; };
        auto str = [&](const char* k, const std::string& v) {
            if (!v.empty()) {
                os << k << " = " << v << "\n";
            }
        };
        if (rho) num("rho", *rho);
        if (mu) num("mu", *mu);
        if (T) num("T", *T);
        if (N) os << "N = " << *N << "\n";
        if (M) os << "M = " << *M << "\n";
        if (grading) num("grading", *grading);
        os << "K = " << K << "\n";
        str("sigma", sigma);
        str("phi", phi);
        str("g", g);
        str("r", r);
        str("u_exact", u_exact);
        os << "functional = " << functional << "\n";
        num("x0", x0);
        if (gamma) num("gamma", *gamma);
        str("obs_phi", obs_phi);
        str("obs_dphi", obs_dphi);
        str("r_true", r_true);
        num("quadrature_tol", quadrature_tol);
        num("picard_tol", picard_tol);
        os << "picard_cap = " << picard_cap << "\n";
        num("inverse_tol", inverse_tol);
        os << "max_iter = " << max_iter << "\n";
        num("theta", theta);
        os << "refinements = " << refinements << "\n";
        return os.str();
    }

    /// 64-bit FNV-1a of the canonical text, as 16 hex digits.
    std::string hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char ch : to_text()) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    void validate(RunMode mode) const {
        auto need = [](bool ok, const std::string& what) {
            if (!ok) {
                throw ConfigError("config: " + what);
            }
        };
        need(rho.has_value(), "missing key 'rho'");
        need(mu.has_value(), "missing key 'mu'");
        need(T.has_value(), "missing key 'T'");
        need(M.has_value(), "missing key 'M'");
        need(*rho > 0.0 && *rho < 1.0, "rho must lie in (0, 1)");
        need(*mu > 0.0 && std::isfinite(*mu), "mu must be positive");
        need(*T > 0.0 && std::isfinite(*T), "T must be positive");
        need(*M >= 1, "M must be >= 1");
        need(!grading || *grading >= 1.0, "grading must be >= 1");
        need(K >= 1, "K must be >= 1");
        need(quadrature_tol > 0.0 && picard_tol > 0.0 && inverse_tol > 0.0, "tolerances must be positive");
        need(picard_cap >= 1 && max_iter >= 1, "iteration caps must be >= 1");
        need(theta > 0.0 && theta <= 1.0, "theta must lie in (0, 1]");
        need(!sigma.empty(), "missing key 'sigma'");
        need(!phi.empty(), "missing key 'phi'");
        need(!g.empty(), "missing key 'g'");
        if (mode == RunMode::forward_fd || mode == RunMode::forward_spectral || mode == RunMode::convergence) {
            need(N.has_value(), "missing key 'N'");
            need(*N >= 2, "N must be >= 2");
        }
        if (N) {
            need(*N >= 2, "N must be >= 2");
        }
        if (mode != RunMode::inverse) {
            need(!r.empty(), "missing key 'r'");
        }
        if (mode == RunMode::convergence) {
            need(!u_exact.empty(), "convergence study needs 'u_exact'");
            need(refinements >= 2, "refinements must be >= 2");
        }
        if (mode == RunMode::inverse) {
            functional_ok();
        }
        check_expr("sigma", sigma, false, true);
        check_expr("phi", phi, true, false);
        check_expr("g", g, true, false);
        check_expr("r", r, false, true);
        check_expr("u_exact", u_exact, true, true);
        check_expr("obs_phi", obs_phi, false, true);
        check_expr("obs_dphi", obs_dphi, false, true);
        check_expr("r_true", r_true, false, true);
    }

    /// Problem data with expression-backed functions (r omitted when empty).
    ProblemSpec to_problem() const {
        ProblemSpec p;
        p.rho = rho.value_or(0.5);
        p.mu = mu.value_or(1.0);
        p.T = T.value_or(1.0);
        p.sigma = parse_expr(sigma).of_t();
        p.phi = parse_expr(phi).of_x();
        p.g = parse_expr(g).of_x();
        if (!r.empty()) {
            p.source_r = parse_expr(r).of_t();
        }
        return p;
    }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) {
            return "";
        }
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    [[noreturn]] static void fail(int line, const std::string& msg) {
        std::ostringstream os;
        os << "config line " << line << ": " << msg;
        throw ConfigError(os.str());
    }

    static double to_double(const std::string& v, int line) {
        std::size_t used = 0;
        double d = 0.0;
        try {
            d = std::stod(v, &used);
        } catch (const std::exception&) {
            fail(line, "not a number: '" + v + "'");
        }
        if (used != v.size()) {
            fail(line, "not a number: '" + v + "'");
        }
        return d;
    }

    static long long to_int(const std::string& v, int line) {
        std::size_t used = 0;
        long long n = 0;
        try {
            n = std::stoll(v, &used);
        } catch (const std::exception&) {
            fail(line, "not an integer: '" + v + "'");
        }
        if (used != v.size()) {
            fail(line, "not an integer: '" + v + "'");
        }
        return n;
    }

    static std::size_t to_count(const std::string& v, int line) {
        const long long n = to_int(v, line);
        if (n < 0) {
            fail(line, "must be nonnegative: '" + v + "'");
        }
        return static_cast<std::size_t>(n);
    }

    void set(const std::string& k, const std::string& v, int line) {
        if (k == "rho") rho = to_double(v, line);
        else if (k == "mu") mu = to_double(v, line);
        else if (k == "T") T = to_double(v, line);
        else if (k == "N") N = to_count(v, line);
        else if (k == "M") M = to_count(v, line);
        else if (k == "grading") {
            if (v != "auto") {
                grading = to_double(v, line);
            }
        }
        else if (k == "K") K = to_count(v, line);
        else if (k == "sigma") sigma = v;
        else if (k == "phi") phi = v;
        else if (k == "g") g = v;
        else if (k == "r") r = v;
        else if (k == "u_exact") u_exact = v;
        else if (k == "functional") functional = v;
        else if (k == "x0") x0 = to_double(v, line);
        else if (k == "gamma") gamma = to_double(v, line);
        else if (k == "obs_phi") obs_phi = v;
        else if (k == "obs_dphi") obs_dphi = v;
        else if (k == "r_true") r_true = v;
        else if (k == "quadrature_tol") quadrature_tol = to_double(v, line);
        else if (k == "picard_tol") picard_tol = to_double(v, line);
        else if (k == "picard_cap") picard_cap = static_cast<int>(to_int(v, line));
        else if (k == "inverse_tol") inverse_tol = to_double(v, line);
        else if (k == "max_iter") max_iter = static_cast<int>(to_int(v, line));
        else if (k == "theta") theta = to_double(v, line);
        else if (k == "refinements") refinements = to_count(v, line);
        else fail(line, "unknown key '" + k + "'");
    }

    void functional_ok() const {
        if (functional != "point" && functional != "flux" && functional != "flux_right" && functional != "mean") {
            throw ConfigError("config: functional must be point, flux or mean");
        }
        if (functional == "point" && !(x0 > 0.0 && x0 < 1.0)) {
            throw ConfigError("config: x0 must lie in (0, 1)");
        }
    }

    static void check_expr(const char* key, const std::string& src, bool x_ok, bool t_ok) {
        if (src.empty()) {
            return;
        }
        Expr e = [&] {
            try {
                return parse_expr(src);
            } catch (const ParseError& err) {
                throw ParseError(std::string("config key '") + key + "': " + err.what(), err.position(),
                                 err.expected());
            }
        }();
        if ((e.uses_x() && !x_ok) || (e.uses_t() && !t_ok)) {
            throw ConfigError(std::string("config key '") + key + "' may only depend on " +
                              (x_ok && t_ok ? "x and t" : x_ok ? "x" : "t"));
        }
    }
};

} // namespace tfpp
