#include "raygeo/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace raygeo {

std::pair<StateVector, StateVector> in_phase_endpoints(const Ray& r1, const Ray& r2,
                                                       const Tolerances& tol) {
    if (r1.dim() != r2.dim()) throw DimensionError("in_phase_endpoints: dimension mismatch");
    const StateVector& a = r1.representative();
    const Complex c = inner(a, r2.representative());
    const double mod = std::abs(c);
    if (mod <= tol.ortho_eps) {
        throw OrthogonalityError("in_phase_endpoints: rays are orthogonal (overlap " +
                                 std::to_string(mod) + ")");
    }
    if (mod * mod >= 1.0 - tol.tol_fid) {
        throw DegenerateError("in_phase_endpoints: rays coincide (fidelity " +
                              std::to_string(mod * mod) + ")");
    }
    const StateVector b(r2.representative().amplitudes() * (std::conj(c) / mod), tol);
    return {a, b};
}

double geodesic_angle(const StateVector& psi1, const StateVector& psi2,
                      const Tolerances& tol) {
    const Complex c = inner(psi1, psi2);
    if (std::abs(c.imag()) > 1e-10 * std::max(std::abs(c), 1e-300) || c.real() <= 0.0) {
        throw PhaseError("geodesic_angle: endpoint lifts are not in phase");
    }
    const double cr = std::clamp(c.real(), -1.0, 1.0);
    if (cr <= tol.ortho_eps) throw OrthogonalityError("geodesic_angle: orthogonal endpoints");
    if (cr >= 1.0 - tol.tol_fid) throw DegenerateError("geodesic_angle: coincident endpoints");
    return std::acos(cr);
}

StateVector geodesic_point(const StateVector& psi1, const StateVector& psi2,
                           double s, const Tolerances& tol) {
    const Complex c = inner(psi1, psi2);
    const double cr = c.real();
    if (std::abs(c.imag()) > 1e-10 || cr <= 0.0 || cr >= 1.0) {
        throw PhaseError("geodesic_point: endpoints must have real overlap in (0, 1)");
    }
    const Vector perp =
        (psi2.amplitudes() - cr * psi1.amplitudes()) / std::sqrt(1.0 - cr * cr);
    return normalize(std::cos(s) * psi1.amplitudes() + std::sin(s) * perp, tol);
}

SampledCurve geodesic(const Ray& r1, const Ray& r2, std::size_t mesh,
                      const Tolerances& tol) {
    if (mesh < 2) throw MeshError("geodesic: mesh must be >= 2");
    const auto [psi1, psi2] = in_phase_endpoints(r1, r2, tol);
    const double s_star = geodesic_angle(psi1, psi2, tol);
    std::vector<double> params(mesh);
    std::vector<StateVector> states;
    states.reserve(mesh);
    for (std::size_t i = 0; i < mesh; ++i) {
        const double s =
            s_star * static_cast<double>(i) / static_cast<double>(mesh - 1);
        params[i] = s;
        states.push_back(geodesic_point(psi1, psi2, s, tol));
    }
    return SampledCurve(std::move(params), std::move(states), tol);
}

double geodesic_triangle_phase(const Ray& r1, const Ray& r2, const Ray& r3,
                               std::size_t mesh, const Tolerances& tol) {
    const Ray* rays[4] = {&r1, &r2, &r3, &r1};
    std::vector<SampledCurve> sides;
    for (int k = 0; k < 3; ++k) {
        if (same_ray(*rays[k], *rays[k + 1], tol)) continue;  // zero-length side
        sides.push_back(geodesic(*rays[k], *rays[k + 1], mesh, tol));
    }
    if (sides.empty()) return 0.0;  // all three vertices coincide
    const SampledCurve loop = concat_chain(sides, tol);
    return geometric_phase(loop, PhaseEstimator::discrete_bargmann, tol).geometric;
}

double bi_connection_residual(const std::vector<StateVector>& psis, std::size_t mesh,
                              const Tolerances& tol) {
    const std::size_t n = psis.size();
    if (n < 3) throw DimensionError("bi_connection_residual: needs n >= 3 states");
    std::vector<SampledCurve> sides;
    sides.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        sides.push_back(
            geodesic(Ray(psis[k], tol), Ray(psis[(k + 1) % n], tol), mesh, tol));
    }
    const SampledCurve loop = concat_chain(sides, tol);
    const double phase = geometric_phase(loop, PhaseEstimator::discrete_bargmann, tol).geometric;
    const BargmannResult bi = delta_n(psis, tol);
    return angle_distance(phase + bi.arg(), 0.0);
}

SurfaceChart geodesic_fan_chart(const Ray& r1, const Ray& r2, const Ray& r3,
                                Index nu, Index nv, const Tolerances& tol) {
    if (nu < 3 || nv < 3) throw MeshError("geodesic_fan_chart: grid too coarse");
    const auto [psi2, psi3] = in_phase_endpoints(r2, r3, tol);
    const double s23 = geodesic_angle(psi2, psi3, tol);
    const StateVector& rep1 = r1.representative();

    std::vector<double> axis_u(static_cast<std::size_t>(nu)), axis_v(static_cast<std::size_t>(nv));
    for (Index i = 0; i < nu; ++i) {
        axis_u[static_cast<std::size_t>(i)] = static_cast<double>(i) / static_cast<double>(nu - 1);
    }
    for (Index j = 0; j < nv; ++j) {
        axis_v[static_cast<std::size_t>(j)] = static_cast<double>(j) / static_cast<double>(nv - 1);
    }
    auto lift = [&](std::span<const double> uv) {
        const double u = uv[0], v = uv[1];
        const StateVector q = geodesic_point(psi2, psi3, v * s23, tol);
        const Complex c = inner(rep1, q);
        const double mod = std::abs(c);
        if (mod <= tol.ortho_eps) {
            throw OrthogonalityError("geodesic_fan_chart: base edge crosses the apex polar");
        }
        // apex lift in phase with this column's base point; the apex sits in
        // the first slot, so the aligning phase is c/|c|, not its conjugate
        const StateVector apex(rep1.amplitudes() * (c / mod), tol);
        const double s_col = std::acos(std::clamp(mod, -1.0, 1.0));
        if (s_col <= 1e-8) return apex;  // base point on the apex ray
        return geodesic_point(apex, q, u * s_col, tol);
    };
    ChartedManifold chart = ChartedManifold::from_axes({axis_u, axis_v}, lift, tol);

    // True oriented boundary r1 -> r2 -> r3 -> r1; the u = 0 edge is a
    // single ray and is omitted.
    std::vector<Index> boundary;
    auto at = [&](Index i, Index j) {
        const Index multi[2] = {i, j};
        return chart.flat_index(std::span<const Index>(multi, 2));
    };
    for (Index i = 0; i < nu; ++i) boundary.push_back(at(i, 0));
    for (Index j = 1; j < nv; ++j) boundary.push_back(at(nu - 1, j));
    for (Index i = nu - 2; i >= 0; --i) boundary.push_back(at(i, nv - 1));
    return SurfaceChart{std::move(chart), std::move(boundary)};
}

}  // namespace raygeo
