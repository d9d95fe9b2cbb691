#include <doctest.h>

#include <cmath>

#include "raygeo/statespace.hpp"

using namespace raygeo;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector make2(Complex a, Complex b) {
    Vector v(2);
    v << a, b;
    return normalize(v);
}
}  // namespace

TEST_SUITE("statespace") {

TEST_CASE("inner products on basis vectors") {
    const auto e1 = StateVector::basis(4, 0);
    const auto e2 = StateVector::basis(4, 1);
    CHECK(inner(e1, e1) == Complex(1.0, 0.0));
    CHECK(inner(e1, e2) == Complex(0.0, 0.0));
}

TEST_CASE("inner is antilinear in the first slot") {
    const auto a = make2(kInvSqrt2, kInvSqrt2);
    const auto b = make2(kInvSqrt2, Complex(0.0, kInvSqrt2));
    const Complex got = inner(a, b);
    CHECK(got.real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(got.imag() == doctest::Approx(0.5).epsilon(1e-14));
    const Complex flipped = inner(b, a);
    CHECK(std::abs(got - std::conj(flipped)) < 1e-15);
}

TEST_CASE("inner rejects mismatched dimensions") {
    CHECK_THROWS_AS(inner(StateVector::basis(2, 0), StateVector::basis(3, 0)),
                    DimensionError);
}

TEST_CASE("normalize scales and rejects near-zero input") {
    Vector v(2);
    v << Complex(2.0, 0.0), Complex(0.0, 0.0);
    const auto psi = normalize(v);
    CHECK(psi[0] == Complex(1.0, 0.0));

    v << Complex(1.0, 0.0), Complex(1.0, 0.0);
    const auto phi = normalize(v);
    CHECK(phi[0].real() == doctest::Approx(kInvSqrt2));

    v << Complex(0.0, 0.0), Complex(0.0, 0.0);
    CHECK_THROWS_AS(normalize(v), ZeroVectorError);
}

TEST_CASE("state vectors insist on unit norm and dim >= 2") {
    Vector v(2);
    v << Complex(0.5, 0.0), Complex(0.0, 0.0);
    CHECK_THROWS_AS(StateVector{v}, InvariantError);
    Vector w(1);
    w << Complex(1.0, 0.0);
    CHECK_THROWS_AS(StateVector{w}, DimensionError);
}

TEST_CASE("fidelity basics") {
    const auto e1 = StateVector::basis(2, 0);
    const auto e2 = StateVector::basis(2, 1);
    const auto plus = make2(kInvSqrt2, kInvSqrt2);
    CHECK(fidelity(Ray(e1), Ray(e1)) == doctest::Approx(1.0));
    CHECK(fidelity(Ray(e1), Ray(e2)) == doctest::Approx(0.0));
    CHECK(fidelity(Ray(e1), Ray(plus)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fidelity is symmetric and gauge invariant") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_state(5, rng);
        const auto b = random_state(5, rng);
        CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-12));
        const double phase = 2.0 * standard_normal(rng);
        const StateVector a_rot(a.amplitudes() * std::exp(Complex(0.0, phase)));
        CHECK(std::abs(fidelity(a_rot, b) - fidelity(a, b)) < 1e-12);
    }
}

TEST_CASE("gauge fix is exactly idempotent") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        const auto psi = random_state(4, rng);
        const Ray once(psi);
        const Ray twice(once.representative());
        CHECK(once.representative().amplitudes() == twice.representative().amplitudes());
        // pivot is real non-negative
        CHECK(once.representative()[0].imag() == 0.0);
        CHECK(once.representative()[0].real() >= 0.0);
    }
}

TEST_CASE("rays compare through fidelity") {
    std::mt19937_64 rng(5);
    const auto psi = random_state(3, rng);
    const StateVector rot(psi.amplitudes() * std::exp(Complex(0.0, 1.234)));
    CHECK(same_ray(Ray(psi), Ray(rot)));
    CHECK_FALSE(same_ray(Ray(psi), Ray(random_state(3, rng))));
}

TEST_CASE("horizontal projection removes the along-state component") {
    const auto e1 = StateVector::basis(3, 0);
    const auto e2 = StateVector::basis(3, 1);

    const auto self = horizontal_project(e1, e1.amplitudes());
    CHECK(self.direction.norm() == doctest::Approx(0.0));

    const auto already = horizontal_project(e1, e2.amplitudes());
    CHECK((already.direction - e2.amplitudes()).norm() == doctest::Approx(0.0));

    const auto mixed = horizontal_project(e1, e1.amplitudes() + e2.amplitudes());
    CHECK((mixed.direction - e2.amplitudes()).norm() == doctest::Approx(0.0));
}

TEST_CASE("horizontal projection is idempotent and orthogonal to the base") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto psi = random_state(6, rng);
        Vector u(6);
        for (int i = 0; i < 6; ++i) u[i] = Complex(standard_normal(rng), standard_normal(rng));
        const auto h = horizontal_project(psi, u);
        CHECK(std::abs(psi.amplitudes().dot(h.direction)) < 1e-12);
        const auto hh = horizontal_project(psi, h.direction);
        CHECK((hh.direction - h.direction).norm() < 1e-12);
    }
}

TEST_CASE("random states are reproducible and unit norm") {
    const auto a = random_state(4, 7);
    const auto b = random_state(4, 7);
    CHECK(a.amplitudes() == b.amplitudes());  // bit-identical
    CHECK(std::abs(a.amplitudes().norm() - 1.0) < 1e-12);
    CHECK_THROWS_AS(random_state(1, 7), DimensionError);
}

TEST_CASE("Haar moment: mean fidelity against e1 in dim 2 is 1/2") {
    // Monte-Carlo oracle: E |<e1|psi>|^2 = 1/N for Haar states.
    std::mt19937_64 rng(1234);
    const auto e1 = StateVector::basis(2, 0);
    double sum = 0.0;
    const int samples = 10000;
    for (int i = 0; i < samples; ++i) sum += fidelity(e1, random_state(2, rng));
    CHECK(sum / samples == doctest::Approx(0.5).epsilon(0.04));
}

}  // TEST_SUITE
