#pragma once

#include <span>
#include <vector>

#include "raygeo/statespace.hpp"

namespace raygeo {

/// Reduce an angle to the principal branch (-pi, pi].
double wrap_angle(double a);

/// Distance between two angles mod 2*pi, in [0, pi].
double angle_distance(double a, double b);

/// arg(phi, psi) in (-pi, pi]. Throws OrthogonalityError when the overlap
/// modulus is at or below ortho_eps (the phase is meaningless there).
double relative_phase(const StateVector& phi, const StateVector& psi,
                      const Tolerances& tol = default_tol());

/// Pancharatnam criterion: (phi, psi) real positive. `tol` bounds the
/// relative imaginary part; orthogonal pairs are simply not in phase.
bool in_phase(const StateVector& phi, const StateVector& psi, double tol = 1e-8,
              const Tolerances& tols = default_tol());

/// Cyclic product of successive overlaps of n >= 3 states.
struct BargmannResult {
    Complex value;
    int order;
    double min_link_modulus;  // smallest |successive overlap| in the cycle

    double arg() const;
};

BargmannResult delta3(const StateVector& psi1, const StateVector& psi2,
                      const StateVector& psi3,
                      const Tolerances& tol = default_tol());

BargmannResult delta_n(std::span<const StateVector> psis,
                       const Tolerances& tol = default_tol());

/// Lift every ray against a fiducial vector: psi_k = rho_k psi0 / sqrt(Tr rho_k rho_0).
/// Each output projects onto its ray and has real positive overlap with psi0.
/// psi0 must project onto rays[0]; rays orthogonal to the fiducial are rejected.
std::vector<StateVector> pancharatnam_lift(const std::vector<Ray>& rays,
                                           const StateVector& psi0,
                                           const Tolerances& tol = default_tol());

}  // namespace raygeo
