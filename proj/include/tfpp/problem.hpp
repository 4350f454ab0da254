#pragma once

#include "tfpp/errors.hpp"
#include "tfpp/time_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace tfpp {

using ScalarFn = std::function<double(double)>;

struct SigmaBounds {
    double min = 0.0; // m_sigma
    double max = 0.0; // M_sigma
};

/// Data of D^rho [u + mu A u] + sigma(t) A u = r(t) g, u(0) = phi,
/// A = -d^2/dx^2 on (0, 1) with homogeneous Dirichlet conditions.
/// source_r is empty when r is the unknown of an inverse problem.
struct ProblemSpec {
    double rho = 0.5;
    double mu = 1.0;
    double T = 1.0;
    ScalarFn sigma;
    ScalarFn source_r;
    ScalarFn phi;
    ScalarFn g;

    bool has_source() const { return static_cast<bool>(source_r); }

    void validate() const {
        std::ostringstream os;
        if (!(rho > 0.0 && rho < 1.0)) {
            os << "rho = " << rho << " outside (0, 1)";
        } else if (!(mu > 0.0) || !std::isfinite(mu)) {
            os << "mu = " << mu << " must be positive";
        } else if (!(T > 0.0) || !std::isfinite(T)) {
            os << "T = " << T << " must be positive";
        } else if (!sigma || !phi || !g) {
            os << "problem needs sigma, phi and g";
        }
        if (!os.str().empty()) {
            throw ParameterError(os.str());
        }
        for (double x : {0.0, 1.0}) {
            const double v = phi(x);
            if (!(std::abs(v) <= 1e-8)) {
                std::ostringstream e;
                e << "phi must vanish at the boundary; phi(" << x << ") = " << v;
                throw ParameterError(e.str());
            }
        }
    }

    /// m_sigma and M_sigma sampled on a 4x refinement of the mesh.
    SigmaBounds sigma_bounds(const TimeMesh& mesh) const {
        SigmaBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
        const TimeMesh fine = mesh.refined(4);
        for (double t : fine.nodes()) {
            const double s = sigma(t);
            if (!std::isfinite(s)) {
                std::ostringstream os;
                os << "sigma(" << t << ") is not finite";
                throw ParameterError(os.str());
            }
            b.min = std::min(b.min, s);
            b.max = std::max(b.max, s);
        }
        if (!(b.min > 0.0)) {
            std::ostringstream os;
            os << "sigma must be positive on [0, T]; sampled minimum " << b.min;
            throw ParameterError(os.str());
        }
        return b;
    }
};

} // namespace tfpp
