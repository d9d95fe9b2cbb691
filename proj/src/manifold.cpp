#include "raygeo/manifold.hpp"

#include <string>

namespace raygeo {

ChartedManifold::ChartedManifold(std::vector<Index> shape,
                                 std::vector<std::vector<double>> params,
                                 std::vector<StateVector> states,
                                 const Tolerances& tol)
    : shape_(std::move(shape)), params_(std::move(params)), states_(std::move(states)) {
    if (shape_.empty()) throw SpecError("ChartedManifold: empty shape");
    Index total = 1;
    for (Index n : shape_) {
        if (n < 1) throw SpecError("ChartedManifold: axis with no nodes");
        total *= n;
    }
    if (static_cast<Index>(states_.size()) != total ||
        static_cast<Index>(params_.size()) != total) {
        throw SpecError("ChartedManifold: grid size mismatch (" +
                        std::to_string(states_.size()) + " states, " +
                        std::to_string(params_.size()) + " params, shape wants " +
                        std::to_string(total) + ")");
    }
    const std::size_t d = shape_.size();
    const Index dim = states_.front().dim();
    for (const auto& p : params_) {
        if (p.size() != d) throw SpecError("ChartedManifold: param arity mismatch");
    }
    for (const auto& s : states_) {
        if (s.dim() != dim) throw DimensionError("ChartedManifold: mixed state dims");
        if (std::abs(s.amplitudes().norm() - 1.0) > tol.tol_norm) {
            throw InvariantError("ChartedManifold: non-unit lift vector");
        }
    }
}

ChartedManifold ChartedManifold::from_axes(
    const std::vector<std::vector<double>>& axes,
    const std::function<StateVector(std::span<const double>)>& lift,
    const Tolerances& tol) {
    if (axes.empty()) throw SpecError("from_axes: no axes");
    std::vector<Index> shape;
    Index total = 1;
    for (const auto& ax : axes) {
        if (ax.empty()) throw SpecError("from_axes: empty axis");
        shape.push_back(static_cast<Index>(ax.size()));
        total *= shape.back();
    }
    const std::size_t d = axes.size();
    std::vector<std::vector<double>> params;
    std::vector<StateVector> states;
    params.reserve(static_cast<std::size_t>(total));
    states.reserve(static_cast<std::size_t>(total));
    std::vector<Index> multi(d, 0);
    for (Index flat = 0; flat < total; ++flat) {
        std::vector<double> p(d);
        for (std::size_t k = 0; k < d; ++k) p[k] = axes[k][static_cast<std::size_t>(multi[k])];
        states.push_back(lift(std::span<const double>(p)));
        params.push_back(std::move(p));
        for (std::size_t k = d; k-- > 0;) {  // row-major: last axis fastest
            if (++multi[k] < shape[k]) break;
            multi[k] = 0;
        }
    }
    return ChartedManifold(std::move(shape), std::move(params), std::move(states), tol);
}

Index ChartedManifold::flat_index(std::span<const Index> multi) const {
    Index flat = 0;
    for (std::size_t k = 0; k < shape_.size(); ++k) {
        flat = flat * shape_[k] + multi[k];
    }
    return flat;
}

std::vector<Index> ChartedManifold::multi_index(Index flat) const {
    std::vector<Index> multi(shape_.size());
    for (std::size_t k = shape_.size(); k-- > 0;) {
        multi[k] = flat % shape_[k];
        flat /= shape_[k];
    }
    return multi;
}

double ChartedManifold::axis_step(std::span<const Index> multi, int axis) const {
    std::vector<Index> a(multi.begin(), multi.end());
    std::vector<Index> b(multi.begin(), multi.end());
    if (multi[static_cast<std::size_t>(axis)] + 1 < shape_[static_cast<std::size_t>(axis)]) {
        ++b[static_cast<std::size_t>(axis)];
    } else {
        --a[static_cast<std::size_t>(axis)];
    }
    const auto& pa = param(flat_index(a));
    const auto& pb = param(flat_index(b));
    return pb[static_cast<std::size_t>(axis)] - pa[static_cast<std::size_t>(axis)];
}

SurfaceChart SurfaceChart::with_box_boundary(ChartedManifold m) {
    if (m.d() != 2) throw SpecError("SurfaceChart: chart must have d = 2");
    const Index nu = m.shape()[0], nv = m.shape()[1];
    auto at = [&](Index i, Index j) {
        const Index multi[2] = {i, j};
        return m.flat_index(std::span<const Index>(multi, 2));
    };
    std::vector<Index> boundary;
    for (Index i = 0; i < nu; ++i) boundary.push_back(at(i, 0));
    for (Index j = 1; j < nv; ++j) boundary.push_back(at(nu - 1, j));
    for (Index i = nu - 2; i >= 0; --i) boundary.push_back(at(i, nv - 1));
    for (Index j = nv - 2; j >= 1; --j) boundary.push_back(at(0, j));
    return SurfaceChart{std::move(m), std::move(boundary)};
}

Eigen::MatrixXcd chart_gram(const ChartedManifold& m) {
    const Index n = m.node_count();
    Eigen::MatrixXcd g(n, n);
    for (Index i = 0; i < n; ++i) {
        g(i, i) = Complex(1.0, 0.0);
        for (Index j = i + 1; j < n; ++j) {
            g(i, j) = inner(m.state(i), m.state(j));
            g(j, i) = std::conj(g(i, j));
        }
    }
    return g;
}

GramChart to_gram_chart(const ChartedManifold& m) {
    GramChart g;
    g.shape = m.shape();
    g.params.reserve(static_cast<std::size_t>(m.node_count()));
    for (Index i = 0; i < m.node_count(); ++i) g.params.push_back(m.param(i));
    g.gram = chart_gram(m);
    g.family_param_count = m.d();
    return g;
}

}  // namespace raygeo
