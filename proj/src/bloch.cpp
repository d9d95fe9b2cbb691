#include "raygeo/bloch.hpp"

#include <cmath>
#include <numbers>

namespace raygeo {

namespace {
constexpr double kPi = std::numbers::pi;
}

StateVector bloch_state(double theta, double phi, const Tolerances& tol) {
    Vector v(2);
    v[0] = Complex(std::cos(theta / 2.0), 0.0);
    v[1] = std::exp(Complex(0.0, phi)) * std::sin(theta / 2.0);
    return normalize(v, tol);
}

std::array<StateVector, 3> octant_vertices(const Tolerances& tol) {
    return {bloch_state(0.0, 0.0, tol), bloch_state(kPi / 2.0, 0.0, tol),
            bloch_state(kPi / 2.0, kPi / 2.0, tol)};
}

SampledCurve latitude_circle(double theta, std::size_t mesh, const Tolerances& tol) {
    return SampledCurve::sample(
        [theta, &tol](double phi) { return bloch_state(theta, phi, tol); }, 0.0,
        2.0 * kPi, mesh, tol);
}

SurfaceChart cap_chart(double theta, Index n_theta, Index n_phi, const Tolerances& tol) {
    if (n_theta < 3 || n_phi < 3) throw MeshError("cap_chart: grid too coarse");
    std::vector<double> thetas(static_cast<std::size_t>(n_theta));
    std::vector<double> phis(static_cast<std::size_t>(n_phi));
    for (Index i = 0; i < n_theta; ++i) {
        thetas[static_cast<std::size_t>(i)] =
            theta * static_cast<double>(i) / static_cast<double>(n_theta - 1);
    }
    for (Index j = 0; j < n_phi; ++j) {
        phis[static_cast<std::size_t>(j)] =
            2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_phi - 1);
    }
    ChartedManifold chart = ChartedManifold::from_axes(
        {thetas, phis},
        [&tol](std::span<const double> p) { return bloch_state(p[0], p[1], tol); }, tol);
    std::vector<Index> boundary;
    for (Index j = 0; j < n_phi; ++j) {
        const Index multi[2] = {n_theta - 1, j};
        boundary.push_back(chart.flat_index(std::span<const Index>(multi, 2)));
    }
    return SurfaceChart{std::move(chart), std::move(boundary)};
}

ChartedManifold sphere_chart(Index n_theta, Index n_phi, const Tolerances& tol) {
    if (n_theta < 3 || n_phi < 3) throw MeshError("sphere_chart: grid too coarse");
    std::vector<double> thetas(static_cast<std::size_t>(n_theta));
    std::vector<double> phis(static_cast<std::size_t>(n_phi));
    for (Index i = 0; i < n_theta; ++i) {
        thetas[static_cast<std::size_t>(i)] =
            kPi * static_cast<double>(i) / static_cast<double>(n_theta - 1);
    }
    for (Index j = 0; j < n_phi; ++j) {
        phis[static_cast<std::size_t>(j)] =
            2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_phi - 1);
    }
    return ChartedManifold::from_axes(
        {thetas, phis},
        [&tol](std::span<const double> p) { return bloch_state(p[0], p[1], tol); }, tol);
}

ChartedManifold bloch_patch_chart(double theta_lo, double theta_hi, double phi_lo,
                                  double phi_hi, Index n_theta, Index n_phi,
                                  const Tolerances& tol) {
    if (n_theta < 3 || n_phi < 3) throw MeshError("bloch_patch_chart: grid too coarse");
    std::vector<double> thetas(static_cast<std::size_t>(n_theta));
    std::vector<double> phis(static_cast<std::size_t>(n_phi));
    for (Index i = 0; i < n_theta; ++i) {
        thetas[static_cast<std::size_t>(i)] =
            theta_lo + (theta_hi - theta_lo) * static_cast<double>(i) /
                           static_cast<double>(n_theta - 1);
    }
    for (Index j = 0; j < n_phi; ++j) {
        phis[static_cast<std::size_t>(j)] =
            phi_lo + (phi_hi - phi_lo) * static_cast<double>(j) /
                         static_cast<double>(n_phi - 1);
    }
    return ChartedManifold::from_axes(
        {thetas, phis},
        [&tol](std::span<const double> p) { return bloch_state(p[0], p[1], tol); }, tol);
}

}  // namespace raygeo
