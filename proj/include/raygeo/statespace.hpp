#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "raygeo/errors.hpp"

namespace raygeo {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Numerical tolerances shared across the library. Quadrature, gauge and
/// isotropy logic need these to stay coordinated, so they travel as one
/// record instead of per-call magic numbers.
struct Tolerances {
    double tol_norm = 1e-12;   // unit-norm slack
    double tol_fid = 1e-10;    // ray equality: |1 - fidelity|
    double gauge_eps = 1e-9;   // smallest amplitude usable as gauge pivot
    double ortho_eps = 1e-10;  // smallest usable overlap modulus
    double zero_eps = 1e-14;   // smallest normalizable vector norm
};

const Tolerances& default_tol();

/// Unit-norm vector in an N-dimensional complex Hilbert space, N >= 2.
/// Immutable value type; construction validates the invariants.
class StateVector {
public:
    explicit StateVector(Vector amplitudes, const Tolerances& tol = default_tol());

    static StateVector basis(Index dim, Index k);

    Index dim() const { return amps_.size(); }
    const Vector& amplitudes() const { return amps_; }
    Complex operator[](Index i) const { return amps_[i]; }

private:
    Vector amps_;
};

/// Inner product (phi, psi), antilinear in the first slot.
Complex inner(const StateVector& phi, const StateVector& psi);

/// Scale a raw vector to unit norm. Throws ZeroVectorError below zero_eps.
StateVector normalize(const Vector& v, const Tolerances& tol = default_tol());

/// Rank-1 projector psi psi^dag, stored through a gauge-fixed representative:
/// the first amplitude of modulus > gauge_eps is rotated to the positive real
/// axis. The fix is exactly idempotent.
class Ray {
public:
    explicit Ray(const StateVector& psi, const Tolerances& tol = default_tol());

    const StateVector& representative() const { return rep_; }
    Index dim() const { return rep_.dim(); }

private:
    StateVector rep_;
};

double fidelity(const StateVector& a, const StateVector& b);
double fidelity(const Ray& r1, const Ray& r2);

/// Ray equality: fidelity = 1 within tol_fid.
bool same_ray(const Ray& r1, const Ray& r2, const Tolerances& tol = default_tol());

/// Tangent data at a base point of the unit sphere.
struct TangentVector {
    StateVector base;
    Vector direction;
};

/// Remove the component of u along psi: direction = u - psi (psi, u).
TangentVector horizontal_project(const StateVector& psi, const Vector& u,
                                 const Tolerances& tol = default_tol());

/// One standard normal draw. Hand-rolled Box-Muller over the raw engine
/// output so that streams are reproducible independent of the C++ runtime.
double standard_normal(std::mt19937_64& rng);

/// Haar-distributed unit vector: i.i.d. complex Gaussian entries, normalized.
StateVector random_state(Index dim, std::mt19937_64& rng,
                         const Tolerances& tol = default_tol());
StateVector random_state(Index dim, std::uint64_t seed,
                         const Tolerances& tol = default_tol());

}  // namespace raygeo
