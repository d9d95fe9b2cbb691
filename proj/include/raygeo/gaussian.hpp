#pragma once

#include <vector>

#include <Eigen/Dense>

#include "raygeo/manifold.hpp"
#include "raygeo/statespace.hpp"

namespace raygeo {

/// Real Gaussian wavepacket in N spatial dimensions:
///   psi_{y,U}(x) = pi^{-N/4} det(U)^{1/4} exp(-(x-y)^T U (x-y) / 2)
/// with U real symmetric positive definite (identity for plain translates).
class GaussianState {
public:
    GaussianState(Eigen::VectorXd y, Eigen::MatrixXd U);

    static GaussianState translate(Eigen::VectorXd y);

    int n() const { return static_cast<int>(y_.size()); }
    const Eigen::VectorXd& y() const { return y_; }
    const Eigen::MatrixXd& U() const { return U_; }
    double log_det_U() const { return log_det_U_; }

    /// Wavefunction amplitude at a point (real positive).
    double eval(const Eigen::VectorXd& x) const;

private:
    Eigen::VectorXd y_;
    Eigen::MatrixXd U_;
    double log_det_U_;
};

/// Closed-form overlap, real in (0, 1]:
///   (det U det U')^{1/4} det((U+U')/2)^{-1/2}
///     * exp(-(y-y')^T U (U+U')^{-1} U' (y-y') / 2).
double gaussian_overlap(const GaussianState& g1, const GaussianState& g2);

/// Finite non-negative combination of Gaussian components. The normalizer c
/// makes the summed wavefunction unit-norm once mixture_normalize has run.
struct GaussianMixture {
    std::vector<GaussianState> components;
    Eigen::VectorXd weights;
    double normalizer = 0.0;  // 0 marks "not yet normalized"
};

/// Fix the normalizer via the pairwise overlap quadratic form:
/// c = (sum_ij p_i p_j G_ij)^{-1/2}. Idempotent.
GaussianMixture mixture_normalize(GaussianMixture mix);

/// c1 c2 sum_ij p_i q_j G_ij, real positive for valid mixtures.
double mixture_overlap(const GaussianMixture& m1, const GaussianMixture& m2);

/// Gaussian family sampled at the overlap level: one node per (y, U) pair
/// of the two grids, Gram entries from the closed form. Suitable input for
/// is_npm / isotropy_check without discretizing anything.
GramChart gaussian_chart(const std::vector<Eigen::VectorXd>& ys,
                         const std::vector<Eigen::MatrixXd>& Us);

/// Translate-only chart over a tensor grid of centers (U = identity).
GramChart gaussian_translate_chart(const std::vector<std::vector<double>>& axes);

/// Tensor-product quadrature grid for the embedding bridge.
struct QuadratureGrid {
    Index points_per_axis = 2048;
    double lo = -16.0;
    double hi = 16.0;
};

/// Grid covering every component's center by +/- 8 widest standard deviations.
QuadratureGrid auto_grid(const std::vector<GaussianState>& states,
                         Index points_per_axis = 2048);

/// Discretize the wavefunction on the grid (root-weighted, renormalized) so
/// inner products of embedded vectors reproduce gaussian_overlap. An
/// internal self-test rejects grids whose quadrature error exceeds 1e-6.
StateVector embed_gaussian(const GaussianState& g, const QuadratureGrid& grid,
                           const Tolerances& tol = default_tol());

}  // namespace raygeo
