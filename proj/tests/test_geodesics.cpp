#include <doctest.h>

#include <cmath>
#include <numbers>

#include "raygeo/bloch.hpp"
#include "raygeo/geodesics.hpp"

using namespace raygeo;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("geodesics") {

TEST_CASE("in-phase endpoints and degenerate inputs") {
    std::mt19937_64 rng(31);
    const Ray r1(random_state(4, rng));
    const Ray r2(random_state(4, rng));
    const auto [p1, p2] = in_phase_endpoints(r1, r2);
    const Complex ov = inner(p1, p2);
    CHECK(ov.imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ov.real() > 0.0);

    CHECK_THROWS_AS(in_phase_endpoints(r1, r1), DegenerateError);
    CHECK_THROWS_AS(
        in_phase_endpoints(Ray(StateVector::basis(2, 0)), Ray(StateVector::basis(2, 1))),
        OrthogonalityError);
}

TEST_CASE("geodesic endpoints reproduce the input rays") {
    std::mt19937_64 rng(32);
    const Ray r1(random_state(5, rng));
    const Ray r2(random_state(5, rng));
    const auto curve = geodesic(r1, r2, 41);
    CHECK(curve.size() == 41);
    CHECK(same_ray(curve.ray(0), r1));
    CHECK(same_ray(curve.ray(40), r2));
    CHECK_THROWS_AS(geodesic(r1, r2, 1), MeshError);
}

TEST_CASE("geodesic lift is globally in phase") {
    std::mt19937_64 rng(33);
    const Ray r1(random_state(4, rng));
    const Ray r2(random_state(4, rng));
    const auto curve = geodesic(r1, r2, 25);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        for (std::size_t j = i + 1; j < curve.size(); ++j) {
            const Complex ov = inner(curve.state(i), curve.state(j));
            CHECK(ov.real() > 0.0);
            CHECK(std::abs(ov.imag()) < 1e-13);
        }
    }
}

TEST_CASE("geodesic length equals arccos of the root fidelity") {
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 5; ++trial) {
        const Ray r1(random_state(4, rng));
        const Ray r2(random_state(4, rng));
        const auto curve = geodesic(r1, r2, 1000);
        const double expected = std::acos(std::sqrt(fidelity(r1, r2)));
        CHECK(length(curve) == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("geodesics are symmetric under endpoint swap") {
    std::mt19937_64 rng(35);
    const Ray r1(random_state(3, rng));
    const Ray r2(random_state(3, rng));
    const auto fwd = geodesic(r1, r2, 33);
    const auto bwd = reverse(geodesic(r2, r1, 33));
    for (std::size_t i = 0; i < fwd.size(); ++i) {
        CHECK(fidelity(fwd.state(i), bwd.state(i)) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("sub-arcs of geodesics are geodesics (length restriction)") {
    std::mt19937_64 rng(36);
    const Ray r1(random_state(4, rng));
    const Ray r2(random_state(4, rng));
    const auto curve = geodesic(r1, r2, 1000);
    const std::size_t lo = 150, hi = 800;
    std::vector<double> params(curve.params().begin() + lo, curve.params().begin() + hi);
    std::vector<StateVector> states(curve.states().begin() + lo, curve.states().begin() + hi);
    const SampledCurve sub(std::move(params), std::move(states));
    const double expected = std::acos(std::abs(inner(curve.state(lo), curve.state(hi - 1))));
    CHECK(length(sub) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("geodesic has zero total, dynamical, geometric phase") {
    std::mt19937_64 rng(37);
    const Ray r1(random_state(6, rng));
    const Ray r2(random_state(6, rng));
    const auto curve = geodesic(r1, r2, 1000);
    CHECK(std::abs(total_phase(curve)) < 1e-12);
    CHECK(std::abs(dynamical_phase(curve)) < 1e-11);
    CHECK(std::abs(geometric_phase(curve).geometric) < 1e-9);
    CHECK(std::abs(geometric_phase(curve, PhaseEstimator::quadrature).geometric) < 1e-6);
}

TEST_CASE("octant triangle carries phase -pi/4") {
    const auto v = octant_vertices();
    const double phase =
        geodesic_triangle_phase(Ray(v[0]), Ray(v[1]), Ray(v[2]), 1000);
    CHECK(phase == doctest::Approx(-kPi / 4.0).epsilon(1e-9));
}

TEST_CASE("degenerate triangle retraces itself") {
    std::mt19937_64 rng(38);
    const Ray r1(random_state(3, rng));
    const Ray r2(random_state(3, rng));
    CHECK(std::abs(geodesic_triangle_phase(r1, r2, r1, 301)) < 1e-9);
}

TEST_CASE("triangle phase equals minus the Bargmann argument") {
    std::mt19937_64 rng(39);
    for (int trial = 0; trial < 10; ++trial) {
        const Index dim = 2 + (trial % 4);
        const auto a = random_state(dim, rng);
        const auto b = random_state(dim, rng);
        const auto c = random_state(dim, rng);
        const double phase = geodesic_triangle_phase(Ray(a), Ray(b), Ray(c), 201);
        const double arg = delta3(a, b, c).arg();
        CHECK(angle_distance(phase, -arg) < 1e-6);
    }
}

TEST_CASE("higher-order connection through geodesic polygons") {
    std::mt19937_64 rng(40);
    std::vector<StateVector> psis;
    for (int i = 0; i < 4; ++i) psis.push_back(random_state(3, rng));
    CHECK(bi_connection_residual(psis, 301) < 1e-6);

    // all-real-positive overlaps: both sides vanish separately
    std::vector<StateVector> positive;
    Vector base(4);
    base << 1.0, 0.2, 0.1, 0.05;
    positive.push_back(normalize(base));
    base << 0.8, 0.5, 0.2, 0.1;
    positive.push_back(normalize(base));
    base << 0.9, 0.1, 0.4, 0.2;
    positive.push_back(normalize(base));
    CHECK(std::abs(delta_n(positive).arg()) < 1e-12);
    CHECK(bi_connection_residual(positive, 301) < 1e-9);
}

TEST_CASE("geodesic fan chart boundary walks the triangle") {
    const auto v = octant_vertices();
    const auto fan = geodesic_fan_chart(Ray(v[0]), Ray(v[1]), Ray(v[2]), 21, 21);
    const auto loop = boundary_loop(fan);
    const double phase = geometric_phase(loop).geometric;
    CHECK(angle_distance(phase, -kPi / 4.0) < 1e-9);
}

}  // TEST_SUITE
