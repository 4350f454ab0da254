#pragma once

#include "tfpp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace tfpp {

/// Reciprocal gamma function, entire: zero at the poles of Gamma.
inline double rgamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) {
        return 0.0;
    }
    return 1.0 / std::tgamma(x);
}

/// Parameters (order, second parameter) of the two-parameter Mittag-Leffler
/// function E_{rho,beta}. Supported envelope: 0 < rho <= 1, beta > 0.
struct MLParams {
    double rho = 1.0;
    double beta = 1.0;

    void validate() const {
        if (!(rho > 0.0 && rho <= 1.0) || !(beta > 0.0) || !std::isfinite(beta)) {
            std::ostringstream os;
            os << "Mittag-Leffler parameters out of range: rho=" << rho
               << " (need 0 < rho <= 1), beta=" << beta << " (need beta > 0)";
            throw ParameterError(os.str());
        }
    }
};

/// Evaluator for E_{rho,beta}(z) on the real line.
///
/// Three branches are used on the negative axis:
///  - |z| <= 0.5: the defining power series (terms bounded by 1.13 * 0.5^k);
///  - |z|^(1/rho) >= 60: the algebraic asymptotic expansion
///    -sum_{n>=1} z^-n / Gamma(beta - rho n), accepted only if its term
///    envelope drops below 1e-17 relative before it has grown a
///    thousandfold over its minimum;
///  - otherwise: inversion of the Laplace transform s^(rho-beta)/(s^rho - z)
///    by the trapezoidal rule on a parabolic contour.
/// Positive arguments use the series, or the leading exponential term plus
/// algebraic corrections once |z|^(1/rho) is large. Results overflow to +inf.
///
/// The object is immutable after construction; contour nodes and series
/// coefficients are precomputed so repeated calls are cheap.
class MittagLeffler {
public:
    static constexpr double kSeriesRadius = 0.5;
    static constexpr double kAsymptoticThreshold = 60.0; // on |z|^(1/rho)

    explicit MittagLeffler(MLParams p) : p_(p) {
        p_.validate();
        build_series_table();
        build_asymptotic_table();
        build_contour();
    }

    const MLParams& params() const noexcept { return p_; }

    double operator()(double z) const {
        if (z == 0.0) {
            return rgamma(p_.beta);
        }
        if (std::isnan(z)) {
            return z;
        }
        if (z > 0.0) {
            return positive(z);
        }
        const double x = -z;
        if (x <= kSeriesRadius) {
            return series(z);
        }
        if (std::isinf(x)) {
            return 0.0;
        }
        if (std::pow(x, 1.0 / p_.rho) >= kAsymptoticThreshold) {
            double value = 0.0;
            if (try_asymptotic(z, value)) {
                return value;
            }
        }
        const double v = contour(z);
        // completely monotone on the negative axis for rho <= 1, beta >= rho
        return p_.beta >= p_.rho ? std::max(0.0, v) : v;
    }

    /// Power series branch, |z| <= kSeriesRadius.
    double series(double z) const {
        double sum = 0.0;
        double zk = 1.0;
        for (double c : series_coeffs_) {
            const double term = c * zk;
            sum += term;
            zk *= z;
            if (std::abs(zk) < 1e-20 * std::abs(sum)) {
                break;
            }
        }
        return sum;
    }

    /// Algebraic asymptotic branch for z < 0. Throws if the optimally
    /// truncated expansion does not reach double precision.
    double asymptotic(double z) const {
        double value = 0.0;
        if (!try_asymptotic(z, value)) {
            throw DomainError("asymptotic Mittag-Leffler expansion not accurate at this argument");
        }
        return value;
    }

    /// Contour-integral branch for z < 0.
    double contour(double z) const {
        double sum = 0.0;
        for (std::size_t k = 0; k < weights_.size(); ++k) {
            sum += (weights_[k] / (poles_[k] - z)).real();
        }
        return sum;
    }

    /// Natural logarithm of E_{rho,beta}(z) for z > 0; finite even when the
    /// value itself overflows.
    double log_positive(double z) const {
        if (!(z > 0.0)) {
            throw DomainError("log_positive requires z > 0");
        }
        const double v = positive(z);
        if (std::isfinite(v)) {
            return std::log(v);
        }
        // Leading exponential term dominates by far once the value overflows.
        return std::pow(z, 1.0 / p_.rho) + (1.0 - p_.beta) / p_.rho * std::log(z) - std::log(p_.rho);
    }

private:
    void build_series_table() {
        // |z| <= 0.5 and |1/Gamma| <= 1.13 on the positive axis: 64 terms reach 1e-19.
        series_coeffs_.resize(64);
        for (std::size_t k = 0; k < series_coeffs_.size(); ++k) {
            series_coeffs_[k] = rgamma(p_.rho * static_cast<double>(k) + p_.beta);
        }
    }

    void build_asymptotic_table() {
        asym_coeffs_.resize(256);
        asym_envelope_.resize(asym_coeffs_.size());
        for (std::size_t n = 1; n <= asym_coeffs_.size(); ++n) {
            const double a = p_.beta - p_.rho * static_cast<double>(n);
            asym_coeffs_[n - 1] = rgamma(a);
            // |1/Gamma(a)| = Gamma(1-a) |sin(pi a)| / pi; the sine factor
            // oscillates, so truncation decisions use the envelope. Both forms
            // agree at a = 1/2.
            asym_envelope_[n - 1] = a >= 0.5 ? std::abs(asym_coeffs_[n - 1])
                                             : std::tgamma(1.0 - a) / std::numbers::pi;
        }
    }

    void build_contour() {
        // Parabolic contour s(u) = mu (1 + iu)^2, u in [-w, w], trapezoidal
        // rule with 2n + 1 nodes. Truncation error ~ exp(mu (1 - w^2)),
        // round-off amplification ~ exp(mu).
        const double mu = 3.0;
        const double w = 4.0;
        const int n = 40;
        const double h = w / n;

        using cplx = std::complex<double>;
        weights_.resize(static_cast<std::size_t>(n) + 1);
        poles_.resize(static_cast<std::size_t>(n) + 1);
        for (int k = 0; k <= n; ++k) {
            const double u = h * k;
            const cplx s = mu * (cplx(1.0, u) * cplx(1.0, u));
            const cplx ds = cplx(-2.0 * mu * u, 2.0 * mu);
            const cplx log_s = std::log(s);
            const cplx num = std::exp(s + (p_.rho - p_.beta) * log_s) * ds;
            // h/(2 pi i); the k and -k nodes are complex conjugates.
            const cplx scale = cplx(0.0, -h / (2.0 * std::numbers::pi));
            weights_[k] = num * scale * (k == 0 ? 1.0 : 2.0);
            poles_[k] = std::exp(p_.rho * log_s);
        }
    }

    bool try_asymptotic(double z, double& out) const {
        const double inv = 1.0 / z;
        const double log_x = std::log(-z);
        double zn = 1.0;
        double sum = 0.0;
        double lowest = std::numeric_limits<double>::infinity();
        for (std::size_t n = 0; n < asym_coeffs_.size(); ++n) {
            zn *= inv;
            sum -= asym_coeffs_[n] * zn;
            const double env = asym_envelope_[n] * std::exp(-static_cast<double>(n + 1) * log_x);
            lowest = std::min(lowest, env);
            if (!(env <= 1000.0 * lowest)) {
                return false;
            }
            if (env <= 1e-17 * std::abs(sum) || env == 0.0) {
                out = sum;
                return true;
            }
        }
        return false;
    }

    double positive(double z) const {
        const double growth = std::pow(z, 1.0 / p_.rho);
        if (growth <= 50.0) {
            // All terms positive: no cancellation. Sum past the peak term.
            const double log_z = std::log(z);
            double sum = 0.0;
            for (int k = 0; k < 100000; ++k) {
                const double a = p_.rho * k + p_.beta;
                const double term = std::exp(k * log_z - std::lgamma(a));
                sum += term;
                if (a > growth + 2.0 && term < 1e-18 * sum) {
                    break;
                }
            }
            return sum;
        }
        // Exponential term plus the first algebraic corrections.
        double value = std::pow(z, (1.0 - p_.beta) / p_.rho) * std::exp(growth) / p_.rho;
        double zn = 1.0;
        for (int n = 1; n <= 8; ++n) {
            zn /= z;
            value -= zn * asym_coeffs_[static_cast<std::size_t>(n - 1)];
        }
        return value;
    }

    MLParams p_;
    std::vector<double> series_coeffs_;
    std::vector<double> asym_coeffs_;
    std::vector<double> asym_envelope_;
    std::vector<std::complex<double>> weights_;
    std::vector<std::complex<double>> poles_;
};

/// E_{rho,beta}(z). Builds a throwaway evaluator; hold a MittagLeffler
/// object instead when evaluating many points with the same parameters.
inline double ml(MLParams params, double z) {
    return MittagLeffler(params)(z);
}

/// lambda t^(rho-1) E_{rho,rho}(-lambda t^rho): the kernel whose integral
/// over [0, t] equals 1 - E_{rho,1}(-lambda t^rho).
inline double ml_derivative_kernel(MLParams params, double lambda, double t) {
    params.validate();
    if (params.beta != params.rho) {
        throw ParameterError("ml_derivative_kernel requires beta == rho");
    }
    if (!(t > 0.0)) {
        throw DomainError("ml_derivative_kernel requires t > 0 (singular at the origin)");
    }
    if (!(lambda > 0.0)) {
        throw ParameterError("ml_derivative_kernel requires lambda > 0");
    }
    const double tr = std::pow(t, params.rho);
    return lambda * tr / t * ml(params, -lambda * tr);
}

} // namespace tfpp
