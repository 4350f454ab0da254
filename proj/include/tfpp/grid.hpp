#pragma once

#include "tfpp/errors.hpp"
#include "tfpp/time_mesh.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace tfpp {

/// Uniform nodes x_i = i h, h = 1/N, on [0, 1].
class SpaceGrid {
public:
    explicit SpaceGrid(std::size_t N) : N_(N) {
        if (N < 2) {
            throw ParameterError("space grid needs N >= 2");
        }
        h_ = 1.0 / static_cast<double>(N);
        nodes_.resize(N + 1);
        for (std::size_t i = 0; i <= N; ++i) {
            nodes_[i] = static_cast<double>(i) * h_;
        }
        nodes_[N] = 1.0;
    }

    std::size_t N() const noexcept { return N_; }
    double h() const noexcept { return h_; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    double x(std::size_t i) const { return nodes_.at(i); }

private:
    std::size_t N_;
    double h_;
    std::vector<double> nodes_;
};

/// Samples u_i^k = u(x_i, t_k), stored one time level per row.
class SolutionField {
public:
    SolutionField(SpaceGrid space, TimeMesh time)
        : space_(std::move(space)), time_(std::move(time)),
          values_((space_.N() + 1) * (time_.M() + 1), 0.0) {}

    const SpaceGrid& space() const noexcept { return space_; }
    const TimeMesh& time() const noexcept { return time_; }

    double& at(std::size_t i, std::size_t k) { return values_[k * stride() + i]; }
    double at(std::size_t i, std::size_t k) const { return values_[k * stride() + i]; }

    std::span<double> row(std::size_t k) {
        if (k > time_.M()) {
            throw IndexError("time level out of range");
        }
        return {values_.data() + k * stride(), stride()};
    }
    std::span<const double> row(std::size_t k) const {
        if (k > time_.M()) {
            throw IndexError("time level out of range");
        }
        return {values_.data() + k * stride(), stride()};
    }

    /// u(x_i, t_0..t_M).
    std::vector<double> column(std::size_t i) const {
        std::vector<double> c(time_.M() + 1);
        for (std::size_t k = 0; k <= time_.M(); ++k) {
            c[k] = at(i, k);
        }
        return c;
    }

private:
    std::size_t stride() const noexcept { return space_.N() + 1; }

    SpaceGrid space_;
    TimeMesh time_;
    std::vector<double> values_;
};

} // namespace tfpp
