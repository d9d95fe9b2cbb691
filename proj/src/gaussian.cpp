#include "raygeo/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace raygeo {

namespace {
constexpr double kPi = std::numbers::pi;
}

GaussianState::GaussianState(Eigen::VectorXd y, Eigen::MatrixXd U)
    : y_(std::move(y)), U_(std::move(U)) {
    const Eigen::Index n = y_.size();
    if (n < 1) throw DimensionError("GaussianState: N >= 1 required");
    if (U_.rows() != n || U_.cols() != n) {
        throw DimensionError("GaussianState: U must be N x N");
    }
    if ((U_ - U_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw MatrixError("GaussianState: U not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(U_);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 1e-10) {
        throw MatrixError("GaussianState: U not positive definite (min eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()) + ")");
    }
    log_det_U_ = es.eigenvalues().array().log().sum();
}

GaussianState GaussianState::translate(Eigen::VectorXd y) {
    const Eigen::Index n = y.size();
    return GaussianState(std::move(y), Eigen::MatrixXd::Identity(n, n));
}

double GaussianState::eval(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd d = x - y_;
    const double quad = d.dot(U_ * d);
    return std::pow(kPi, -0.25 * n()) * std::exp(0.25 * log_det_U_) *
           std::exp(-0.5 * quad);
}

double gaussian_overlap(const GaussianState& g1, const GaussianState& g2) {
    if (g1.n() != g2.n()) throw DimensionError("gaussian_overlap: dimension mismatch");
    const Eigen::Index n = g1.n();
    const Eigen::MatrixXd S = 0.5 * (g1.U() + g2.U());
    const Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) {
        throw MatrixError("gaussian_overlap: U + U' not positive definite");
    }
    double log_det_S = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) log_det_S += std::log(llt.matrixL()(i, i));
    log_det_S *= 2.0;

    const Eigen::VectorXd d = g1.y() - g2.y();
    // d^T U (U+U')^{-1} U' d with (U+U') = 2S
    const Eigen::VectorXd v = llt.solve(g2.U() * d) * 0.5;
    const double quad = d.dot(g1.U() * v);

    const double log_pref =
        0.25 * (g1.log_det_U() + g2.log_det_U()) - 0.5 * log_det_S;
    return std::exp(log_pref - 0.5 * quad);
}

GaussianMixture mixture_normalize(GaussianMixture mix) {
    const Eigen::Index k = static_cast<Eigen::Index>(mix.components.size());
    if (k == 0 || mix.weights.size() != k) {
        throw DimensionError("mixture_normalize: weights/components mismatch");
    }
    if (mix.weights.minCoeff() < 0.0) {
        throw SpecError("mixture_normalize: weights must be non-negative");
    }
    if (mix.weights.maxCoeff() <= 0.0) {
        throw ZeroVectorError("mixture_normalize: all weights vanish");
    }
    double quad = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            quad += mix.weights[i] * mix.weights[j] *
                    gaussian_overlap(mix.components[static_cast<std::size_t>(i)],
                                     mix.components[static_cast<std::size_t>(j)]);
        }
    }
    mix.normalizer = 1.0 / std::sqrt(quad);
    return mix;
}

double mixture_overlap(const GaussianMixture& m1, const GaussianMixture& m2) {
    if (m1.normalizer <= 0.0 || m2.normalizer <= 0.0) {
        throw SpecError("mixture_overlap: mixtures must be normalized first");
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < m1.weights.size(); ++i) {
        for (Eigen::Index j = 0; j < m2.weights.size(); ++j) {
            sum += m1.weights[i] * m2.weights[j] *
                   gaussian_overlap(m1.components[static_cast<std::size_t>(i)],
                                    m2.components[static_cast<std::size_t>(j)]);
        }
    }
    return m1.normalizer * m2.normalizer * sum;
}

GramChart gaussian_chart(const std::vector<Eigen::VectorXd>& ys,
                         const std::vector<Eigen::MatrixXd>& Us) {
    if (ys.empty() || Us.empty()) throw SpecError("gaussian_chart: empty grid");
    std::vector<GaussianState> nodes;
    nodes.reserve(ys.size() * Us.size());
    for (const auto& y : ys) {
        for (const auto& U : Us) nodes.emplace_back(y, U);
    }
    const int n = nodes.front().n();
    GramChart chart;
    chart.shape = {static_cast<Index>(ys.size()), static_cast<Index>(Us.size())};
    if (Us.size() == 1) chart.shape = {static_cast<Index>(ys.size())};
    chart.family_param_count = n + (Us.size() > 1 ? n * (n + 1) / 2 : 0);
    const Index total = static_cast<Index>(nodes.size());
    chart.params.reserve(static_cast<std::size_t>(total));
    for (std::size_t iy = 0; iy < ys.size(); ++iy) {
        for (std::size_t iu = 0; iu < Us.size(); ++iu) {
            if (Us.size() == 1) {
                chart.params.push_back(
                    std::vector<double>(ys[iy].data(), ys[iy].data() + ys[iy].size()));
            } else {
                chart.params.push_back({static_cast<double>(iy), static_cast<double>(iu)});
            }
        }
    }
    chart.gram.resize(total, total);
    for (Index i = 0; i < total; ++i) {
        for (Index j = i; j < total; ++j) {
            const double g = gaussian_overlap(nodes[static_cast<std::size_t>(i)],
                                              nodes[static_cast<std::size_t>(j)]);
            chart.gram(i, j) = chart.gram(j, i) = Complex(g, 0.0);
        }
    }
    return chart;
}

GramChart gaussian_translate_chart(const std::vector<std::vector<double>>& axes) {
    if (axes.empty()) throw SpecError("gaussian_translate_chart: no axes");
    const int n = static_cast<int>(axes.size());
    std::vector<Index> shape;
    Index total = 1;
    for (const auto& ax : axes) {
        if (ax.size() < 1) throw SpecError("gaussian_translate_chart: empty axis");
        shape.push_back(static_cast<Index>(ax.size()));
        total *= shape.back();
    }
    std::vector<Eigen::VectorXd> centers;
    std::vector<std::vector<double>> params;
    centers.reserve(static_cast<std::size_t>(total));
    std::vector<Index> multi(static_cast<std::size_t>(n), 0);
    for (Index flat = 0; flat < total; ++flat) {
        Eigen::VectorXd y(n);
        std::vector<double> p(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            y[k] = axes[static_cast<std::size_t>(k)][static_cast<std::size_t>(multi[static_cast<std::size_t>(k)])];
            p[static_cast<std::size_t>(k)] = y[k];
        }
        centers.push_back(std::move(y));
        params.push_back(std::move(p));
        for (std::size_t k = static_cast<std::size_t>(n); k-- > 0;) {
            if (++multi[k] < shape[k]) break;
            multi[k] = 0;
        }
    }
    GramChart chart;
    chart.shape = std::move(shape);
    chart.params = std::move(params);
    chart.family_param_count = n;
    chart.gram.resize(total, total);
    for (Index i = 0; i < total; ++i) {
        for (Index j = i; j < total; ++j) {
            // translate family: exp(-|y - y'|^2 / 4)
            const double g = std::exp(-0.25 * (centers[static_cast<std::size_t>(i)] -
                                               centers[static_cast<std::size_t>(j)])
                                                  .squaredNorm());
            chart.gram(i, j) = chart.gram(j, i) = Complex(g, 0.0);
        }
    }
    return chart;
}

QuadratureGrid auto_grid(const std::vector<GaussianState>& states, Index points_per_axis) {
    if (states.empty()) throw SpecError("auto_grid: no states");
    double lo = states.front().y().minCoeff();
    double hi = states.front().y().maxCoeff();
    double widest = 0.0;
    for (const auto& g : states) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.U());
        widest = std::max(widest, 1.0 / std::sqrt(es.eigenvalues().minCoeff()));
        lo = std::min(lo, g.y().minCoeff());
        hi = std::max(hi, g.y().maxCoeff());
    }
    return QuadratureGrid{points_per_axis, lo - 8.0 * widest, hi + 8.0 * widest};
}

StateVector embed_gaussian(const GaussianState& g, const QuadratureGrid& grid,
                           const Tolerances& tol) {
    const int n = g.n();
    if (grid.points_per_axis < 2) throw QuadratureError("embed_gaussian: grid too small");
    if (!(grid.lo < grid.hi)) throw QuadratureError("embed_gaussian: empty grid range");
    double total_points = 1.0;
    for (int k = 0; k < n; ++k) total_points *= static_cast<double>(grid.points_per_axis);
    if (total_points > 1e6) {
        throw QuadratureError("embed_gaussian: grid exceeds the 1e6 point budget");
    }
    // Coverage: +/- 8 sigma of the widest direction around the center.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.U());
    const double sigma = 1.0 / std::sqrt(es.eigenvalues().minCoeff());
    if (g.y().minCoeff() - 8.0 * sigma < grid.lo || g.y().maxCoeff() + 8.0 * sigma > grid.hi) {
        throw QuadratureError("embed_gaussian: grid does not cover +/- 8 sigma");
    }

    const Index p = grid.points_per_axis;
    const double h = (grid.hi - grid.lo) / static_cast<double>(p - 1);
    const Index total = static_cast<Index>(std::llround(total_points));
    const double root_weight = std::pow(h, 0.5 * n);

    auto sample = [&](const GaussianState& state) {
        Vector v(total);
        std::vector<Index> multi(static_cast<std::size_t>(n), 0);
        Eigen::VectorXd x(n);
        for (Index flat = 0; flat < total; ++flat) {
            for (int k = 0; k < n; ++k) {
                x[k] = grid.lo + h * static_cast<double>(multi[static_cast<std::size_t>(k)]);
            }
            v[flat] = Complex(state.eval(x) * root_weight, 0.0);
            for (std::size_t k = static_cast<std::size_t>(n); k-- > 0;) {
                if (++multi[k] < static_cast<Index>(p)) break;
                multi[k] = 0;
            }
        }
        return v;
    };

    const Vector main = sample(g);
    // Self-test pair: compare the discrete overlap with a shifted copy
    // against the closed form before trusting the grid.
    Eigen::VectorXd y2 = g.y();
    y2[0] += sigma;
    const GaussianState companion(y2, g.U());
    const Vector probe = sample(companion);
    const double discrete = (main.dot(probe)).real() / (main.norm() * probe.norm());
    const double exact = gaussian_overlap(g, companion);
    if (std::abs(discrete - exact) > 1e-6) {
        throw QuadratureError("embed_gaussian: self-test overlap error " +
                              std::to_string(std::abs(discrete - exact)));
    }
    return normalize(main, tol);
}

}  // namespace raygeo
