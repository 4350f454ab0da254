#pragma once

#include "tfpp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <utility>
#include <vector>

namespace tfpp {

/// Temporal nodes t_0 = 0 < t_1 < ... < t_M = T together with the steps
/// tau_k = t_k - t_{k-1}. Graded meshes follow t_k = T (k/M)^r.
class TimeMesh {
public:
    TimeMesh(double T, std::size_t M, double grading = 1.0) : T_(T), grading_(grading) {
        if (!(T > 0.0) || !std::isfinite(T)) {
            throw ParameterError("time horizon T must be positive and finite");
        }
        if (M < 1) {
            throw ParameterError("time mesh needs M >= 1");
        }
        if (!(grading >= 1.0) || !std::isfinite(grading)) {
            throw ParameterError("grading exponent must be >= 1");
        }
        nodes_.resize(M + 1);
        const double m = static_cast<double>(M);
        for (std::size_t k = 0; k <= M; ++k) {
            nodes_[k] = T * std::pow(static_cast<double>(k) / m, grading);
        }
        nodes_[M] = T;
        fill_steps();
    }

    /// Mesh on user-chosen nodes (must start at 0 and increase strictly).
    static TimeMesh from_nodes(std::vector<double> nodes) {
        if (nodes.size() < 2 || nodes.front() != 0.0) {
            throw ParameterError("mesh nodes must start at 0 and contain at least two points");
        }
        for (std::size_t k = 1; k < nodes.size(); ++k) {
            if (!(nodes[k] > nodes[k - 1])) {
                std::ostringstream os;
                os << "mesh nodes not strictly increasing at index " << k;
                throw ParameterError(os.str());
            }
        }
        TimeMesh m;
        m.T_ = nodes.back();
        m.grading_ = 0.0;
        m.nodes_ = std::move(nodes);
        m.fill_steps();
        return m;
    }

    double T() const noexcept { return T_; }
    std::size_t M() const noexcept { return nodes_.size() - 1; }
    /// Grading exponent; 0 for meshes built from explicit nodes.
    double grading() const noexcept { return grading_; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    /// steps()[k] = tau_k for k >= 1; steps()[0] = 0.
    const std::vector<double>& steps() const noexcept { return steps_; }
    double t(std::size_t k) const { return nodes_.at(k); }
    double tau(std::size_t k) const {
        if (k < 1 || k >= nodes_.size()) {
            throw IndexError("step index out of range");
        }
        return steps_[k];
    }

    /// Mesh whose nodes include these plus (factor - 1) equispaced points
    /// inside every step.
    TimeMesh refined(std::size_t factor) const {
        if (factor < 1) {
            throw ParameterError("refinement factor must be >= 1");
        }
        std::vector<double> out;
        out.reserve(M() * factor + 1);
        out.push_back(0.0);
        for (std::size_t k = 1; k < nodes_.size(); ++k) {
            for (std::size_t j = 1; j < factor; ++j) {
                out.push_back(nodes_[k - 1] + steps_[k] * static_cast<double>(j) / static_cast<double>(factor));
            }
            out.push_back(nodes_[k]);
        }
        return from_nodes(std::move(out));
    }

private:
    TimeMesh() = default;

    void fill_steps() {
        steps_.assign(nodes_.size(), 0.0);
        for (std::size_t k = 1; k < nodes_.size(); ++k) {
            steps_[k] = nodes_[k] - nodes_[k - 1];
            if (!(steps_[k] > 0.0)) {
                throw ParameterError("time mesh has a non-positive step (grading too strong for M?)");
            }
        }
    }

    double T_ = 0.0;
    double grading_ = 1.0;
    std::vector<double> nodes_;
    std::vector<double> steps_;
};

/// max(1, (2 - rho)/rho).
inline double default_grading(double rho) {
    return std::max(1.0, (2.0 - rho) / rho);
}

} // namespace tfpp
