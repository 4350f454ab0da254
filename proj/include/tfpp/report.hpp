#pragma once

#include "tfpp/config.hpp"
#include "tfpp/csv.hpp"
#include "tfpp/errors.hpp"
#include "tfpp/experiments.hpp"
#include "tfpp/fd_solver.hpp"
#include "tfpp/inverse.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <string>

namespace tfpp {

using json = nlohmann::json;

/// Non-finite numbers become strings ("inf", "-inf", "nan") so the report
/// stays valid JSON.
inline json num(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

inline json opt_num(const std::optional<double>& v) {
    return v ? num(*v) : json(nullptr);
}

inline json report_header(const std::string& command, const RunConfig& c) {
    return {{"command", command}, {"config_hash", c.hash()}, {"config", c.to_text()}};
}

inline json to_json(const ErrorReport& e) {
    return {{"max_err", num(e.max_err)}, {"l2_err_final", num(e.l2_err)}};
}

inline json to_json(const FdStats& s) {
    return {{"steps_assembled", s.steps_assembled},
            {"min_dominance_margin", num(s.min_dominance_margin)},
            {"max_dense_mismatch", num(s.max_dense_mismatch)}};
}

inline json to_json(const C1Bound& b) {
    return {{"value", num(b.value)}, {"log_value", num(b.log_value)}, {"prefactor", num(b.prefactor)},
            {"ml_argument", num(b.argument)}};
}

inline json to_json(const InverseResult& r) {
    json hist = json::array();
    for (double v : r.residual_history) {
        hist.push_back(num(v));
    }
    return {{"iterations", r.iterations},
            {"residual_history", hist},
            {"c1_bound", to_json(r.c1)},
            {"bound_violated", r.bound_violated},
            {"theta", r.theta},
            {"dphi_mode", to_string(r.dphi_mode)},
            {"f_g", num(r.f_g)},
            {"f_resolvent_g", num(r.f_resolvent_g)},
            {"c_f", num(r.c_f)}};
}

inline json to_json(const ConvergenceTable& t) {
    auto levels = [](const std::vector<ConvergenceLevel>& ls, const char* key) {
        json a = json::array();
        for (const auto& l : ls) {
            a.push_back({{key, l.n},
                         {"max_err", num(l.max_err)},
                         {"ratio", opt_num(l.ratio)},
                         {"order", opt_num(l.order)},
                         {"richardson_order", opt_num(l.richardson)}});
        }
        return a;
    };
    return {{"temporal", levels(t.temporal, "M")}, {"spatial", levels(t.spatial, "N")}};
}

inline json to_json(const ReproduceReport& r) {
    return {{"fd", to_json(r.fd)},
            {"spectral", to_json(r.spectral)},
            {"fd_u_mid_t0", num(r.fd_mid_start)},
            {"fd_u_mid_T", num(r.fd_mid_end)},
            {"spectral_u_mid_t0", num(r.spectral_mid_start)},
            {"spectral_u_mid_T", num(r.spectral_mid_end)},
            {"boundary_max_abs", num(r.boundary_max)},
            {"max_fd_spectral_gap", num(r.max_solver_gap)},
            {"fd_stats", to_json(r.fd_stats)},
            {"fd_seconds", r.fd_seconds},
            {"spectral_seconds", r.spectral_seconds},
            {"files", r.files}};
}

inline void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    f << j.dump(2) << '\n';
    if (!f) {
        throw IoError("write failed for '" + path + "'");
    }
}

} // namespace tfpp
