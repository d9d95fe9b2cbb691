#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "raygeo/bargmann.hpp"
#include "raygeo/manifold.hpp"

namespace raygeo {

/// Sampled lift of a curve in ray space: a strictly increasing parameter
/// grid with one unit vector per node. Adjacent nodes must be resolvable
/// (overlap modulus above ortho_eps); the link moduli are kept around.
class SampledCurve {
public:
    SampledCurve(std::vector<double> params, std::vector<StateVector> states,
                 const Tolerances& tol = default_tol());

    /// Sample a lift callback on a uniform grid over [s1, s2].
    static SampledCurve sample(const std::function<StateVector(double)>& lift,
                               double s1, double s2, std::size_t mesh,
                               const Tolerances& tol = default_tol());

    std::size_t size() const { return states_.size(); }
    double param(std::size_t i) const { return params_[i]; }
    const StateVector& state(std::size_t i) const { return states_[i]; }
    const std::vector<double>& params() const { return params_; }
    const std::vector<StateVector>& states() const { return states_; }
    const std::vector<double>& link_moduli() const { return link_moduli_; }
    Index dim() const { return states_.front().dim(); }

    Ray ray(std::size_t i) const { return Ray(states_[i]); }
    const StateVector& front() const { return states_.front(); }
    const StateVector& back() const { return states_.back(); }

private:
    std::vector<double> params_;
    std::vector<StateVector> states_;
    std::vector<double> link_moduli_;
};

enum class PhaseEstimator { discrete_bargmann, quadrature };

struct PhaseReport {
    double total = 0.0;
    double dynamical = 0.0;  // accumulated, not principal-valued
    double geometric = 0.0;
    PhaseEstimator estimator = PhaseEstimator::discrete_bargmann;
    std::size_t mesh = 0;
};

/// arg(psi(s1), psi(s2)), principal-valued.
double total_phase(const SampledCurve& curve, const Tolerances& tol = default_tol());

/// Default estimator: per-segment principal args, summed without reduction.
/// Exact for pure phase motion; O(h^2) against the integral form.
double dynamical_phase(const SampledCurve& curve);

/// Cross-check estimator: trapezoidal quadrature of Im(psi, psi') with
/// three-point finite differences on the (possibly non-uniform) grid.
double dynamical_phase_quadrature(const SampledCurve& curve);

PhaseReport geometric_phase(const SampledCurve& curve,
                            PhaseEstimator estimator = PhaseEstimator::discrete_bargmann,
                            const Tolerances& tol = default_tol());

/// Fubini-Study length: trapezoidal quadrature of
/// sqrt(|psi'|^2 - |(psi, psi')|^2) on a locally in-phase regauge of the
/// lift, so the value is insensitive to per-node phase noise.
double length(const SampledCurve& curve, const Tolerances& tol = default_tol());

SampledCurve reverse(const SampledCurve& curve, const Tolerances& tol = default_tol());

/// Join two curves whose junction rays agree (tol_fid). The incoming lift
/// is rephased so the junction states coincide; the duplicate node is dropped.
SampledCurve concat(const SampledCurve& c1, const SampledCurve& c2,
                    const Tolerances& tol = default_tol());

SampledCurve concat_chain(const std::vector<SampledCurve>& curves,
                          const Tolerances& tol = default_tol());

/// |phi_g[union] - sum phi_g[segments] + arg Delta_n(vertex lifts)| mod 2pi,
/// reduced to [0, pi]. Vertex lifts are taken in the concatenated gauge.
double nonadditivity_residual(const std::vector<SampledCurve>& curves,
                              const Tolerances& tol = default_tol());

struct SubarcScan {
    double max_abs_phase = 0.0;
    std::size_t i = 0, j = 0;  // endpoints of the worst sub-arc
};

/// Geometric phase of every contiguous sub-arc (i, j), via prefix sums of
/// the link args; returns the largest |phi_g| mod 2pi.
SubarcScan subarc_phase_scan(const SampledCurve& curve,
                             const Tolerances& tol = default_tol());

/// For a closed loop bounded by a surface chart: (phi_g[loop], -integral of
/// omega over the chart). The boundary sampling must match the loop ray-wise
/// (within match_fid; default tol_fid) and run in the same orientation.
std::pair<double, double> loop_phase_vs_area(const SampledCurve& loop,
                                             const SurfaceChart& surface,
                                             double match_fid = -1.0,
                                             const Tolerances& tol = default_tol());

/// Extract the boundary sampling of a surface as a curve (unit param steps).
SampledCurve boundary_loop(const SurfaceChart& surface,
                           const Tolerances& tol = default_tol());

/// Smooth seeded test curve from a to b on [0, 1]: straight-line blend plus
/// a wobble term that vanishes at the endpoints. Shape depends only on the
/// seed, not the mesh, so refinement studies stay consistent.
SampledCurve smooth_curve_between(const StateVector& a, const StateVector& b,
                                  std::size_t mesh, std::uint64_t seed,
                                  double wobble = 0.4,
                                  const Tolerances& tol = default_tol());

/// CSV rows "s,dynamical_partial_sum" for plotting.
void write_phase_csv(const SampledCurve& curve, std::ostream& out);

}  // namespace raygeo
