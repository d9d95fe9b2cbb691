#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "raygeo/statespace.hpp"

namespace raygeo {

/// d-parameter sampled chart u -> psi(u) on a row-major tensor grid.
/// The lift is expected to be smooth in the parameters; finite differences
/// of the stored states are used as tangents.
class ChartedManifold {
public:
    /// `params` holds one d-vector per grid node in row-major order
    /// (last axis fastest); `shape` gives the per-axis node counts.
    ChartedManifold(std::vector<Index> shape,
                    std::vector<std::vector<double>> params,
                    std::vector<StateVector> states,
                    const Tolerances& tol = default_tol());

    /// Tensor grid from per-axis coordinate lists and a lift callback.
    static ChartedManifold from_axes(
        const std::vector<std::vector<double>>& axes,
        const std::function<StateVector(std::span<const double>)>& lift,
        const Tolerances& tol = default_tol());

    int d() const { return static_cast<int>(shape_.size()); }
    const std::vector<Index>& shape() const { return shape_; }
    Index node_count() const { return static_cast<Index>(states_.size()); }
    const std::vector<StateVector>& states() const { return states_; }
    const StateVector& state(Index flat) const { return states_[static_cast<std::size_t>(flat)]; }
    const std::vector<double>& param(Index flat) const { return params_[static_cast<std::size_t>(flat)]; }

    Index flat_index(std::span<const Index> multi) const;
    std::vector<Index> multi_index(Index flat) const;

    /// Step along one axis at a multi-index (forward difference of params).
    double axis_step(std::span<const Index> multi, int axis) const;

private:
    std::vector<Index> shape_;
    std::vector<std::vector<double>> params_;
    std::vector<StateVector> states_;
};

/// Two-parameter chart together with an oriented boundary sampling
/// (indices into the grid, traversed counterclockwise in (u, v)).
struct SurfaceChart {
    ChartedManifold chart;
    std::vector<Index> boundary;

    /// Wrap a d = 2 chart with its box boundary, traversed counterclockwise:
    /// u forward at v_min, v forward at u_max, u backward at v_max,
    /// v backward at u_min.
    static SurfaceChart with_box_boundary(ChartedManifold m);
};

/// Chart sampled at the overlap level only: the Gram matrix of the node
/// states stands in for the states themselves. This is how function-space
/// families (e.g. Gaussian wavepackets) enter the triple and isotropy
/// checks without any amplitude discretization.
struct GramChart {
    std::vector<Index> shape;
    std::vector<std::vector<double>> params;  // row-major, like ChartedManifold
    Eigen::MatrixXcd gram;                    // gram(i, j) = (psi_i, psi_j)
    int family_param_count = 0;               // dimension of the generating family

    Index node_count() const { return gram.rows(); }
};

/// Evaluate the full Gram matrix of a chart's node states.
Eigen::MatrixXcd chart_gram(const ChartedManifold& m);

/// Forget the states of a chart, keeping overlap data only.
GramChart to_gram_chart(const ChartedManifold& m);

}  // namespace raygeo
