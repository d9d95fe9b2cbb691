#pragma once

#include <array>

#include "raygeo/curves.hpp"
#include "raygeo/manifold.hpp"

namespace raygeo {

/// (cos(theta/2), e^{i phi} sin(theta/2)) in dimension 2.
StateVector bloch_state(double theta, double phi,
                        const Tolerances& tol = default_tol());

/// Octant triangle vertices: |0>, |+>, (|0> + i|1>)/sqrt(2).
std::array<StateVector, 3> octant_vertices(const Tolerances& tol = default_tol());

/// Closed circle of colatitude theta, phi from 0 to 2 pi inclusive.
SampledCurve latitude_circle(double theta, std::size_t mesh,
                             const Tolerances& tol = default_tol());

/// Spherical cap 0 <= theta' <= theta as a (theta', phi) chart; the oriented
/// boundary is the latitude row (seam and pole edges carry no area).
SurfaceChart cap_chart(double theta, Index n_theta, Index n_phi,
                       const Tolerances& tol = default_tol());

/// Full sphere as a (theta, phi) chart; poles degenerate but integrable.
ChartedManifold sphere_chart(Index n_theta, Index n_phi,
                             const Tolerances& tol = default_tol());

/// Open (theta, phi) patch away from the poles; useful as a deliberately
/// non-isotropic control chart.
ChartedManifold bloch_patch_chart(double theta_lo, double theta_hi,
                                  double phi_lo, double phi_hi,
                                  Index n_theta, Index n_phi,
                                  const Tolerances& tol = default_tol());

}  // namespace raygeo
