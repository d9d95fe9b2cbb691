#include "raygeo/statespace.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace raygeo {

const Tolerances& default_tol() {
    static const Tolerances tol{};
    return tol;
}

namespace {

void require_same_dim(Index a, Index b, const char* what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" +
                             std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

}  // namespace

StateVector::StateVector(Vector amplitudes, const Tolerances& tol)
    : amps_(std::move(amplitudes)) {
    if (amps_.size() < 2) {
        throw DimensionError("StateVector: dim must be >= 2, got " +
                             std::to_string(amps_.size()));
    }
    const double n = amps_.norm();
    if (std::abs(n - 1.0) > tol.tol_norm) {
        throw InvariantError("StateVector: amplitudes not unit-norm (|v| = " +
                             std::to_string(n) + "); use normalize()");
    }
}

StateVector StateVector::basis(Index dim, Index k) {
    if (dim < 2) throw DimensionError("basis: dim must be >= 2");
    if (k < 0 || k >= dim) throw DimensionError("basis: index out of range");
    Vector v = Vector::Zero(dim);
    v[k] = Complex(1.0, 0.0);
    return StateVector(std::move(v));
}

Complex inner(const StateVector& phi, const StateVector& psi) {
    require_same_dim(phi.dim(), psi.dim(), "inner");
    return phi.amplitudes().dot(psi.amplitudes());  // Eigen dot conjugates the left argument
}

StateVector normalize(const Vector& v, const Tolerances& tol) {
    const double n = v.norm();
    if (n <= tol.zero_eps) {
        throw ZeroVectorError("normalize: vector norm " + std::to_string(n) +
                              " below zero_eps");
    }
    return StateVector(v / n, tol);
}

Ray::Ray(const StateVector& psi, const Tolerances& tol) : rep_(psi) {
    const Vector& a = psi.amplitudes();
    Index pivot = -1;
    for (Index i = 0; i < a.size(); ++i) {
        if (std::abs(a[i]) > tol.gauge_eps) {
            pivot = i;
            break;
        }
    }
    if (pivot < 0) {
        throw ZeroVectorError("Ray: no amplitude above gauge_eps");
    }
    const double phase = std::arg(a[pivot]);
    if (phase == 0.0) return;  // already gauge-fixed; keep bits identical
    Vector fixed = a * std::exp(Complex(0.0, -phase));
    // Pin the pivot exactly onto the real axis so a second fix is a no-op.
    fixed[pivot] = Complex(std::abs(fixed[pivot]), 0.0);
    rep_ = StateVector(std::move(fixed), tol);
}

double fidelity(const StateVector& a, const StateVector& b) {
    const double f = std::norm(inner(a, b));
    return f > 1.0 ? 1.0 : f;  // clamp fp overshoot
}

double fidelity(const Ray& r1, const Ray& r2) {
    return fidelity(r1.representative(), r2.representative());
}

bool same_ray(const Ray& r1, const Ray& r2, const Tolerances& tol) {
    return r1.dim() == r2.dim() &&
           std::abs(1.0 - fidelity(r1, r2)) <= tol.tol_fid;
}

TangentVector horizontal_project(const StateVector& psi, const Vector& u,
                                 const Tolerances& /*tol*/) {
    require_same_dim(psi.dim(), u.size(), "horizontal_project");
    const Complex overlap = psi.amplitudes().dot(u);
    return TangentVector{psi, u - overlap * psi.amplitudes()};
}

double standard_normal(std::mt19937_64& rng) {
    // 53-bit uniforms straight from the engine; u1 in (0, 1].
    const double u1 = 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

StateVector random_state(Index dim, std::mt19937_64& rng, const Tolerances& tol) {
    if (dim < 2) throw DimensionError("random_state: dim must be >= 2");
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) {
        const double re = standard_normal(rng);
        const double im = standard_normal(rng);
        v[i] = Complex(re, im);
    }
    return normalize(v, tol);
}

StateVector random_state(Index dim, std::uint64_t seed, const Tolerances& tol) {
    std::mt19937_64 rng(seed);
    return random_state(dim, rng, tol);
}

}  // namespace raygeo
