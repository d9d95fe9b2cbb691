#include <doctest.h>

#include <cmath>

#include "raygeo/bloch.hpp"
#include "raygeo/geodesics.hpp"
#include "raygeo/json_io.hpp"
#include "raygeo/nullphase.hpp"

using namespace raygeo;

TEST_SUITE("json_io") {

TEST_CASE("state round trip is exact") {
    std::mt19937_64 rng(81);
    for (int trial = 0; trial < 10; ++trial) {
        const auto psi = random_state(5, rng);
        const auto back = state_from_json(state_to_json(psi));
        CHECK((psi.amplitudes() - back.amplitudes()).norm() < 1e-15);
    }
}

TEST_CASE("state JSON validates shape") {
    Json j{{"dim", 3}, {"re", {1.0, 0.0}}, {"im", {0.0, 0.0, 0.0}}};
    CHECK_THROWS_AS(state_from_json(j), SpecError);
    CHECK_THROWS_AS(state_from_json(Json{{"re", {1.0}}}), SpecError);
}

TEST_CASE("curve round trip preserves phases") {
    std::mt19937_64 rng(82);
    const auto a = random_state(4, rng);
    const auto b = random_state(4, rng);
    const auto curve = smooth_curve_between(a, b, 40, 5);
    const auto back = curve_from_json(curve_to_json(curve));
    CHECK(back.size() == curve.size());
    CHECK(std::abs(geometric_phase(back).geometric -
                   geometric_phase(curve).geometric) < 1e-14);
}

TEST_CASE("chart and surface round trips keep grid structure") {
    const auto chart = sphere_plus_chart(3, 5);
    const auto back = chart_from_json(chart_to_json(chart));
    CHECK(back.d() == 2);
    CHECK(back.shape() == chart.shape());
    CHECK(back.node_count() == chart.node_count());
    for (Index i = 0; i < chart.node_count(); ++i) {
        CHECK(fidelity(back.state(i), chart.state(i)) == doctest::Approx(1.0));
        CHECK(back.param(i) == chart.param(i));
    }

    const auto cap = cap_chart(0.9, 5, 9);
    const auto cap_back = surface_from_json(surface_to_json(cap));
    CHECK(cap_back.boundary == cap.boundary);
}

TEST_CASE("generator output feeds the matching checker") {
    // round-trip contract behind the CLI: emit, parse, verify
    std::mt19937_64 rng(83);
    const auto g = geodesic(Ray(random_state(3, rng)), Ray(random_state(3, rng)), 64);
    CHECK(is_npc(curve_from_json(curve_to_json(g)), 1e-10).ok);
}

TEST_CASE("gaussian and mixture round trips") {
    Eigen::VectorXd y(2);
    y << 0.3, -0.7;
    Eigen::MatrixXd U(2, 2);
    U << 1.5, 0.2, 0.2, 0.9;
    const GaussianState g(y, U);
    const auto back = gaussian_from_json(gaussian_to_json(g));
    CHECK((back.y() - g.y()).norm() == doctest::Approx(0.0));
    CHECK((back.U() - g.U()).norm() == doctest::Approx(0.0));

    GaussianMixture mix{{g, GaussianState::translate(y)}, Eigen::VectorXd(2), 0.0};
    mix.weights << 0.25, 0.75;
    mix = mixture_normalize(mix);
    const auto mix_back = mixture_from_json(mixture_to_json(mix));
    CHECK(mix_back.normalizer == doctest::Approx(mix.normalizer));
    CHECK(mixture_overlap(mix, mix_back) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hull round trip preserves membership decisions") {
    const auto e1 = StateVector::basis(2, 0);
    const auto e2 = StateVector::basis(2, 1);
    const auto hull = hull_extend({e1, e2}, 1e-8);
    const auto back = hull_from_json(hull_to_json(hull));
    CHECK(back.membership_tol() == hull.membership_tol());
    const auto probe = normalize(e1.amplitudes() + 2.0 * e2.amplitudes());
    CHECK(hull_membership(back, probe).member == hull_membership(hull, probe).member);
}

TEST_CASE("reports serialize their witnesses") {
    const auto bad = is_npc(latitude_circle(1.0, 40), 1e-10);
    const Json j = report_to_json(bad);
    CHECK_FALSE(j["ok"].get<bool>());
    CHECK(j["worst"]["imag_ratio"].get<double>() > 0.0);

    const auto iso = isotropy_check(sphere_plus_chart(3, 5));
    const Json ji = report_to_json(iso);
    CHECK(ji["ok"].get<bool>());
    CHECK(ji.contains("max_abs_omega"));
}

}  // TEST_SUITE
