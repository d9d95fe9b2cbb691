#pragma once

#include <utility>
#include <vector>

#include "raygeo/curves.hpp"

namespace raygeo {

/// In-phase endpoint lifts for a geodesic: psi1 is r1's gauge-fixed
/// representative, psi2 is r2's representative rephased so (psi1, psi2) > 0.
/// Throws OrthogonalityError / DegenerateError outside fidelity (0, 1).
std::pair<StateVector, StateVector> in_phase_endpoints(const Ray& r1, const Ray& r2,
                                                       const Tolerances& tol = default_tol());

/// Point of the closed-form shortest geodesic lift at arc parameter s:
///   psi(s) = psi1 cos s + psi2_perp sin s,  0 <= s <= arccos (psi1, psi2).
/// Requires (psi1, psi2) real positive in (0, 1).
StateVector geodesic_point(const StateVector& psi1, const StateVector& psi2,
                           double s, const Tolerances& tol = default_tol());

/// Arc length arccos (psi1, psi2) of the shortest geodesic, in (0, pi/2).
double geodesic_angle(const StateVector& psi1, const StateVector& psi2,
                      const Tolerances& tol = default_tol());

/// Shortest Fubini-Study geodesic between two distinct non-orthogonal rays,
/// sampled uniformly in arc length with `mesh` nodes.
SampledCurve geodesic(const Ray& r1, const Ray& r2, std::size_t mesh,
                      const Tolerances& tol = default_tol());

/// Geometric phase of the closed loop of three geodesics through the rays.
double geodesic_triangle_phase(const Ray& r1, const Ray& r2, const Ray& r3,
                               std::size_t mesh, const Tolerances& tol = default_tol());

/// |phi_g[n-gon of geodesics] + arg Delta_n(psis)| mod 2pi for n >= 3 lifts.
double bi_connection_residual(const std::vector<StateVector>& psis, std::size_t mesh,
                              const Tolerances& tol = default_tol());

/// Geodesic fan over a ray triangle: chart(u, v) walks the geodesic from r1
/// towards the point at fraction v along the geodesic from r2 to r3. Its box
/// boundary traverses r1 -> r2 -> r3 -> r1.
SurfaceChart geodesic_fan_chart(const Ray& r1, const Ray& r2, const Ray& r3,
                                Index nu, Index nv,
                                const Tolerances& tol = default_tol());

}  // namespace raygeo
