#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "raygeo/curves.hpp"
#include "raygeo/geodesics.hpp"
#include "raygeo/manifold.hpp"

namespace raygeo {

/// How the triple scans sample: exhaustive up to `exhaustive_limit` nodes,
/// otherwise `min_triples` seeded uniform draws.
struct TripleScanOptions {
    std::size_t exhaustive_limit = 200;
    std::size_t min_triples = 10000;
    std::uint64_t seed = 0x7265616c706f73ULL;
};

struct TripleWitness {
    Index i = 0, j = 0, k = 0;
    Complex delta{1.0, 0.0};
    double imag_ratio = 0.0;
    bool positive = true;  // Re(delta) > 0
};

struct NpcReport {
    bool ok = true;
    bool exhaustive = true;
    std::size_t triples_checked = 0;
    double tol = 0.0;
    TripleWitness worst;
    std::optional<std::pair<Index, Index>> orthogonal_pair;
};

/// Null phase curve test: Re(Delta3) > 0 and |Im(Delta3)| <= tol * |Delta3|
/// over node triples of the sample.
NpcReport is_npc(const SampledCurve& curve, double tol = 1e-10,
                 const TripleScanOptions& opts = {},
                 const Tolerances& tols = default_tol());

/// Same triple-positivity scan over the grid points of a chart.
NpcReport is_npm(const ChartedManifold& chart, double tol = 1e-10,
                 const TripleScanOptions& opts = {},
                 const Tolerances& tols = default_tol());

/// Overlap-level variant: triples read off a Gram matrix.
NpcReport is_npm(const GramChart& chart, double tol = 1e-10,
                 const TripleScanOptions& opts = {},
                 const Tolerances& tols = default_tol());

/// Unit-sphere trajectory in R^m whose coordinates drive an NPC generator:
/// pairwise positive dot products, endpoints (1, 0, ...) and
/// (cos theta0, sin theta0, 0, ...), carried over an orthonormal basis of
/// ambient states.
class SphereTrajectory {
public:
    SphereTrajectory(std::vector<double> params,
                     std::vector<Eigen::VectorXd> samples,
                     std::vector<StateVector> basis,
                     const Tolerances& tol = default_tol());

    int m() const { return static_cast<int>(basis_.size()); }
    const std::vector<double>& params() const { return params_; }
    const std::vector<Eigen::VectorXd>& samples() const { return samples_; }
    const std::vector<StateVector>& basis() const { return basis_; }

private:
    std::vector<double> params_;
    std::vector<Eigen::VectorXd> samples_;
    std::vector<StateVector> basis_;
};

/// Arc from (1, 0, ...) to (cos theta0, sin theta0, 0, ...) whose extra
/// coordinates bulge by `bulge * sin(pi t)`; bulge 0 gives the plane arc.
SphereTrajectory bulge_trajectory(int m, double theta0, double bulge,
                                  std::size_t mesh,
                                  std::vector<StateVector> basis,
                                  const Tolerances& tol = default_tol());

/// psi0(s_i) = sum_r x_r(s_i) e_r. The output passes is_npc by construction.
SampledCurve npc_from_sphere_path(const SphereTrajectory& traj,
                                  const Tolerances& tol = default_tol());

/// General NPC data between e1 and cos(theta0) e1 + sin(theta0) e2:
/// radial profile sigma, plane angle theta, and real coefficients of the
/// component in the orthogonal complement, all sampled on one grid.
struct GeneralNPCSpec {
    std::vector<double> params;
    double theta0 = 0.0;
    std::vector<double> sigma;               // (0, 1], equals 1 at both ends
    std::vector<double> theta;               // theta(s1) = 0, theta(s2) = theta0
    std::vector<Eigen::VectorXd> chi_coeffs; // per-node coefficients over H_perp

    void validate(const Tolerances& tol = default_tol()) const;
};

/// Assemble the lift from a validated spec over an orthonormal basis
/// (e1, e2, then one vector per chi coefficient).
SampledCurve npc_general(const GeneralNPCSpec& spec,
                         const std::vector<StateVector>& basis,
                         const Tolerances& tol = default_tol());

/// Non-geodesic NPC between two rays: adapted basis (psi1, complement of
/// psi2, seeded orthonormal extras) driving a bulged sphere path. In
/// dimension 2 there is no room to bulge and the geodesic comes back.
SampledCurve npc_between(const Ray& r1, const Ray& r2, std::size_t mesh,
                         double bulge, std::uint64_t seed, int extra_dims = 1,
                         const Tolerances& tol = default_tol());

/// Ray-space symplectic form on horizontal lifts: 2 Im(u_h, v_h) at psi.
/// Both tangents must be based at psi.
double symplectic_form(const StateVector& psi, const TangentVector& u,
                       const TangentVector& v, const Tolerances& tol = default_tol());

/// Integral of the symplectic form over a d = 2 chart: finite-difference
/// tangents, horizontal correction, trapezoidal weights.
double surface_omega_integral(const ChartedManifold& chart,
                              const Tolerances& tol = default_tol());

struct IsotropyReport {
    bool ok = true;
    double max_abs_omega = 0.0;
    double tol_used = 0.0;
    Index node = 0;
    int axis_u = 0, axis_v = 1;
    std::size_t points_checked = 0;
};

/// Pulled-back symplectic form on all coordinate-tangent pairs at interior
/// grid points; ok iff max |omega| <= tol (default 10 h^2). Vacuous for d = 1.
IsotropyReport isotropy_check(const ChartedManifold& chart, double tol = -1.0,
                              const Tolerances& tols = default_tol());

/// Overlap-level isotropy: the same stencils evaluated through the Gram
/// matrix, for charts known only by their overlap kernel.
IsotropyReport isotropy_check(const GramChart& chart, double tol = -1.0,
                              const Tolerances& tols = default_tol());

using MembershipOracle = std::function<bool(const StateVector&)>;

struct TgFailure {
    Index a = 0, b = 0;      // node pair whose geodesic left the set
    int interior = 0;        // interior sample index
    double s_fraction = 0.0; // fraction of arc length at the failure
};

struct TgReport {
    bool ok = true;
    std::size_t pairs_checked = 0;
    int interior_samples = 0;
    std::optional<TgFailure> failure;
};

/// For seeded random point pairs, samples the connecting geodesic at
/// `interior_samples` interior points and asks the membership oracle at each.
TgReport totally_geodesic_check(const std::vector<StateVector>& points,
                                const MembershipOracle& membership,
                                std::size_t pairs, std::uint64_t seed = 42,
                                int interior_samples = 32,
                                const Tolerances& tol = default_tol());

TgReport totally_geodesic_check(const ChartedManifold& chart,
                                const MembershipOracle& membership,
                                std::size_t pairs, std::uint64_t seed = 42,
                                int interior_samples = 32,
                                const Tolerances& tol = default_tol());

/// Non-negative real linear hull of a globally in-phase anchor set.
/// Membership is decided by NNLS residual against the anchor cone.
class HullModel {
public:
    explicit HullModel(std::vector<StateVector> anchors,
                       double membership_tol = 1e-8,
                       const Tolerances& tol = default_tol());

    const std::vector<StateVector>& anchors() const { return anchors_; }
    const Eigen::MatrixXd& gram() const { return gram_; }
    double membership_tol() const { return membership_tol_; }
    Index dim() const { return anchors_.front().dim(); }

private:
    std::vector<StateVector> anchors_;
    Eigen::MatrixXd gram_;
    double membership_tol_;
};

HullModel hull_extend(const std::vector<StateVector>& anchors,
                      double membership_tol = 1e-8,
                      const Tolerances& tol = default_tol());

struct HullMembershipReport {
    bool member = false;
    Eigen::VectorXd coefficients;
    double residual = 0.0;
    double phase = 0.0;  // optimal global phase applied to the probe
};

/// min_{p >= 0} | sum_j p_j psi_j - e^{i phase} psi | with the phase chosen
/// from the unconstrained anchor-span projection of psi.
HullMembershipReport hull_membership(const HullModel& hull, const StateVector& psi,
                                     double tol = -1.0,
                                     const Tolerances& tols = default_tol());

/// normalize(sum_j p_j anchor_j), p >= 0 and not all zero.
StateVector hull_point(const HullModel& hull, const Eigen::VectorXd& p,
                       const Tolerances& tol = default_tol());

/// Two-parameter box chart inside the hull: bilinear interpolation of four
/// seeded positive weight vectors over the anchors.
ChartedManifold hull_sample_chart(const HullModel& hull, Index nodes_per_axis,
                                  std::uint64_t seed,
                                  const Tolerances& tol = default_tol());

struct CharacterizationOptions {
    double membership_tol = 1e-8;
    std::size_t tg_pairs = 40;
    Index hull_chart_nodes = 7;
    std::uint64_t seed = 2024;
    TripleScanOptions triples;
};

struct CharacterizationReport {
    bool ok = false;
    bool members_ok = false;
    double worst_member_residual = 0.0;
    Index worst_member = 0;
    TgReport tg;
    IsotropyReport isotropy;
    NpcReport npm;
};

/// Constructive characterization: lift the chart grid against a fiducial,
/// extend to the non-negative hull, then require (i) every chart point is a
/// hull member, (ii) the hull is totally geodesic under NNLS membership,
/// (iii) a hull sample chart is isotropic, (iv) it passes the triple scan.
CharacterizationReport verify_npm_characterization(
    const ChartedManifold& chart, const CharacterizationOptions& opts = {},
    const Tolerances& tol = default_tol());

/// Regularity proxy: worst conditioning (extreme singular value ratio) of
/// the real-stacked finite-difference tangent frame over interior nodes.
/// Charts above 1e6 are treated as degenerate by the characterization.
double tangent_condition_scan(const ChartedManifold& chart);

/// Positive-orthant sphere patch: hyperspherical angles in (lo, hi) within
/// (0, pi/2), lifted over an orthonormal basis. d = m - 1 chart.
ChartedManifold sphere_plus_chart(int m, Index nodes_per_axis, double lo,
                                  double hi, std::vector<StateVector> basis,
                                  const Tolerances& tol = default_tol());

/// Standard-basis version in ambient dimension m.
ChartedManifold sphere_plus_chart(int m, Index nodes_per_axis, double lo = 0.2,
                                  double hi = 1.35,
                                  const Tolerances& tol = default_tol());

}  // namespace raygeo
