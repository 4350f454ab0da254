#pragma once

#include "tfpp/errors.hpp"
#include "tfpp/time_mesh.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace tfpp {

namespace detail {
inline void check_order(double rho) {
    if (!(rho > 0.0 && rho < 1.0)) {
        throw ParameterError("fractional order must lie in (0, 1)");
    }
}
} // namespace detail

/// L1 weights d_{k,j} = ((t_k - t_{j-1})^{1-rho} - (t_k - t_j)^{1-rho}) / tau_j,
/// returned as out[j-1] for j = 1..k.
inline std::vector<double> l1_weights(const TimeMesh& mesh, double rho, std::size_t k) {
    detail::check_order(rho);
    if (k < 1 || k > mesh.M()) {
        throw IndexError("L1 weight row index must satisfy 1 <= k <= M");
    }
    const auto& t = mesh.nodes();
    const double e = 1.0 - rho;
    std::vector<double> d(k);
    double right = 0.0; // (t_k - t_j)^{1-rho}, starting from j = k
    for (std::size_t j = k; j >= 1; --j) {
        const double left = std::pow(t[k] - t[j - 1], e);
        d[j - 1] = (left - right) / mesh.steps()[j];
        right = left;
    }
    return d;
}

/// Non-uniform L1 approximation of the Caputo derivative at t_1..t_M:
/// (1/Gamma(2-rho)) sum_j d_{k,j} (u^j - u^{j-1}).
inline std::vector<double> caputo_l1(std::span<const double> samples, const TimeMesh& mesh, double rho) {
    detail::check_order(rho);
    if (samples.size() != mesh.M() + 1) {
        throw ShapeError("caputo_l1: sample count must equal M + 1");
    }
    const double g = 1.0 / std::tgamma(2.0 - rho);
    std::vector<double> out(mesh.M());
    for (std::size_t k = 1; k <= mesh.M(); ++k) {
        const auto d = l1_weights(mesh, rho, k);
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            s += d[j - 1] * (samples[j] - samples[j - 1]);
        }
        out[k - 1] = g * s;
    }
    return out;
}

} // namespace tfpp
