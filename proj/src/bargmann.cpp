#include "raygeo/bargmann.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace raygeo {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double wrap_angle(double a) {
    double r = std::remainder(a, kTwoPi);  // (-pi, pi] up to the -pi edge
    if (r <= -kPi) r += kTwoPi;
    return r;
}

double angle_distance(double a, double b) {
    return std::abs(wrap_angle(a - b));
}

double relative_phase(const StateVector& phi, const StateVector& psi,
                      const Tolerances& tol) {
    const Complex ov = inner(phi, psi);
    if (std::abs(ov) <= tol.ortho_eps) {
        throw OrthogonalityError("relative_phase: overlap modulus " +
                                 std::to_string(std::abs(ov)) +
                                 " at or below ortho_eps");
    }
    return wrap_angle(std::arg(ov));
}

bool in_phase(const StateVector& phi, const StateVector& psi, double tol,
              const Tolerances& tols) {
    const Complex ov = inner(phi, psi);
    const double mod = std::abs(ov);
    return ov.real() > tols.ortho_eps && std::abs(ov.imag()) <= tol * mod;
}

double BargmannResult::arg() const { return wrap_angle(std::arg(value)); }

BargmannResult delta_n(std::span<const StateVector> psis, const Tolerances& tol) {
    const std::size_t n = psis.size();
    if (n < 3) {
        throw DimensionError("delta_n: needs at least 3 states, got " +
                             std::to_string(n));
    }
    Complex prod(1.0, 0.0);
    double min_mod = 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const Complex link = inner(psis[i], psis[j]);
        const double mod = std::abs(link);
        if (mod <= tol.ortho_eps) {
            throw OrthogonalityError(
                "delta_n: link (" + std::to_string(i) + ", " + std::to_string(j) +
                    ") has modulus " + std::to_string(mod),
                static_cast<std::ptrdiff_t>(i));
        }
        if (mod < min_mod) min_mod = mod;
        prod *= link;
    }
    return BargmannResult{prod, static_cast<int>(n), min_mod};
}

BargmannResult delta3(const StateVector& psi1, const StateVector& psi2,
                      const StateVector& psi3, const Tolerances& tol) {
    const StateVector psis[3] = {psi1, psi2, psi3};
    return delta_n(std::span<const StateVector>(psis, 3), tol);
}

std::vector<StateVector> pancharatnam_lift(const std::vector<Ray>& rays,
                                           const StateVector& psi0,
                                           const Tolerances& tol) {
    if (rays.empty()) return {};
    if (!same_ray(rays.front(), Ray(psi0, tol), tol)) {
        throw BaseError("pancharatnam_lift: psi0 does not project onto rays[0]");
    }
    std::vector<StateVector> out;
    out.reserve(rays.size());
    for (std::size_t k = 0; k < rays.size(); ++k) {
        const StateVector& rep = rays[k].representative();
        // rho psi0 = rep (rep, psi0); normalizing leaves rep * phase with
        // (psi0, out_k) = |(psi0, rep)| > 0.
        const Complex ov = inner(rep, psi0);
        if (std::norm(ov) <= tol.ortho_eps * tol.ortho_eps) {
            throw OrthogonalityError(
                "pancharatnam_lift: ray " + std::to_string(k) +
                    " is orthogonal to the fiducial",
                static_cast<std::ptrdiff_t>(k));
        }
        out.push_back(StateVector(rep.amplitudes() * (ov / std::abs(ov)), tol));
    }
    return out;
}

}  // namespace raygeo
