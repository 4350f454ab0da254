#pragma once

#include "tfpp/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace tfpp {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

/// Adaptive 15-point Gauss-Kronrod on [a, b]. The error target is
/// tol * max(1, integral of |f|); missing it raises AccuracyError.
template <class F>
QuadResult integrate(F&& f, double a, double b, double tol = 1e-10, unsigned max_depth = 15) {
    QuadResult r;
    r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, max_depth, tol, &r.error, &r.l1);
    const double target = tol * std::max(1.0, r.l1);
    if (!(r.error <= target) || !std::isfinite(r.value)) {
        std::ostringstream os;
        os << "adaptive quadrature on [" << a << ", " << b << "] reached error estimate "
           << r.error << " above target " << target;
        throw AccuracyError(os.str(), r.error);
    }
    return r;
}

/// Fixed 8-point Gauss-Legendre rule on [a, b].
template <class F>
double gauss8(F&& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 8>::integrate(f, a, b);
}

/// Nodes and weights of the 8-point Gauss-Legendre rule on [-1, 1].
struct Gauss8Rule {
    std::array<double, 8> x{};
    std::array<double, 8> w{};

    Gauss8Rule() {
        using rule = boost::math::quadrature::gauss<double, 8>;
        const auto& ax = rule::abscissa();
        const auto& wt = rule::weights();
        for (std::size_t i = 0; i < 4; ++i) {
            x[i] = -ax[3 - i];
            w[i] = wt[3 - i];
            x[7 - i] = ax[3 - i];
            w[7 - i] = wt[3 - i];
        }
    }
};

} // namespace tfpp
