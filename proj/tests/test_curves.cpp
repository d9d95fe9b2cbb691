#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "raygeo/bloch.hpp"
#include "raygeo/curves.hpp"

using namespace raygeo;

namespace {
constexpr double kPi = std::numbers::pi;

SampledCurve constant_curve(const StateVector& psi, std::size_t mesh) {
    return SampledCurve::sample([&psi](double) { return psi; }, 0.0, 1.0, mesh);
}

SampledCurve phase_spiral(const StateVector& psi, double s2, std::size_t mesh) {
    return SampledCurve::sample(
        [&psi](double s) { return StateVector(psi.amplitudes() * std::exp(Complex(0.0, s))); },
        0.0, s2, mesh);
}

SampledCurve rephase_nodes(const SampledCurve& c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<StateVector> states;
    states.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double alpha = 2.0 * kPi * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        states.emplace_back(c.state(i).amplitudes() * std::exp(Complex(0.0, alpha)));
    }
    return SampledCurve(c.params(), std::move(states));
}
}  // namespace

TEST_SUITE("curves") {

TEST_CASE("curve construction validates its invariants") {
    const auto e1 = StateVector::basis(2, 0);
    CHECK_THROWS_AS(SampledCurve({0.0}, {e1}), MeshError);
    CHECK_THROWS_AS(SampledCurve({0.0, 0.0}, {e1, e1}), MeshError);
    CHECK_THROWS_AS(SampledCurve({0.0, 1.0}, {e1, StateVector::basis(2, 1)}),
                    OrthogonalityError);
}

TEST_CASE("phases of the constant curve vanish") {
    const auto curve = constant_curve(random_state(3, 1), 11);
    CHECK(total_phase(curve) == doctest::Approx(0.0));
    CHECK(dynamical_phase(curve) == doctest::Approx(0.0));
    CHECK(geometric_phase(curve).geometric == doctest::Approx(0.0));
    CHECK(length(curve) == doctest::Approx(0.0));
}

TEST_CASE("pure phase motion: total and dynamical agree, geometric vanishes") {
    const auto psi = random_state(4, 2);
    for (std::size_t mesh : {2u, 5u, 40u}) {
        const auto curve = phase_spiral(psi, kPi / 4.0, mesh);
        CHECK(total_phase(curve) == doctest::Approx(kPi / 4.0).epsilon(1e-12));
        CHECK(dynamical_phase(curve) == doctest::Approx(kPi / 4.0).epsilon(1e-10));
        const auto report = geometric_phase(curve);
        CHECK(std::abs(report.geometric) < 1e-10);
        CHECK(report.total - report.dynamical == doctest::Approx(report.geometric));
    }
    CHECK(length(phase_spiral(psi, kPi / 4.0, 64)) < 1e-8);
}

TEST_CASE("dynamical phase accumulates beyond the principal branch") {
    const auto psi = random_state(2, 3);
    const auto curve = phase_spiral(psi, 3.0 * kPi, 400);
    CHECK(dynamical_phase(curve) == doctest::Approx(3.0 * kPi).epsilon(1e-9));
}

TEST_CASE("quadrature estimator handles non-uniform grids") {
    // pure phase motion sampled on a warped grid: dynamical phase = s span
    const auto psi = random_state(3, 19);
    auto warped = [&psi](int intervals) {
        std::vector<double> params;
        std::vector<StateVector> states;
        for (int i = 0; i <= intervals; ++i) {
            const double t = static_cast<double>(i) / intervals;
            const double s = 0.9 * t * t + 0.1 * t;  // strictly increasing, uneven
            params.push_back(s);
            states.emplace_back(psi.amplitudes() * std::exp(Complex(0.0, s)));
        }
        return SampledCurve(params, states);
    };
    CHECK(dynamical_phase_quadrature(warped(240)) == doctest::Approx(1.0).epsilon(2e-5));
    CHECK(dynamical_phase(warped(60)) == doctest::Approx(1.0).epsilon(1e-12));
    const double gap_coarse = std::abs(dynamical_phase_quadrature(warped(60)) - 1.0);
    const double gap_fine = std::abs(dynamical_phase_quadrature(warped(120)) - 1.0);
    CHECK(gap_fine * 3.0 < gap_coarse);  // second order on the warped grid too
}

TEST_CASE("quadrature estimator approaches the arg-sum at O(h^2)") {
    std::mt19937_64 rng(4);
    const auto a = random_state(4, rng);
    const auto b = random_state(4, rng);
    const auto coarse = smooth_curve_between(a, b, 101, 99);
    const auto fine = smooth_curve_between(a, b, 201, 99);
    const double gap_coarse =
        std::abs(geometric_phase(coarse, PhaseEstimator::quadrature).geometric -
                 geometric_phase(coarse, PhaseEstimator::discrete_bargmann).geometric);
    const double gap_fine =
        std::abs(geometric_phase(fine, PhaseEstimator::quadrature).geometric -
                 geometric_phase(fine, PhaseEstimator::discrete_bargmann).geometric);
    CHECK(gap_fine * 3.0 < gap_coarse);  // ~4x shrink for an O(h^2) pair
}

TEST_CASE("geometric phase is gauge invariant under per-node rephasing") {
    std::mt19937_64 rng(5);
    const auto a = random_state(3, rng);
    const auto b = random_state(3, rng);
    const auto curve = smooth_curve_between(a, b, 120, 7);
    const auto noisy = rephase_nodes(curve, 77);
    const double base = geometric_phase(curve).geometric;
    const double rot = geometric_phase(noisy).geometric;
    CHECK(angle_distance(base, rot) < 1e-10);
}

TEST_CASE("length is gauge invariant under per-node rephasing") {
    std::mt19937_64 rng(6);
    const auto a = random_state(3, rng);
    const auto b = random_state(3, rng);
    const auto curve = smooth_curve_between(a, b, 150, 8);
    const auto noisy = rephase_nodes(curve, 78);
    CHECK(std::abs(length(curve) - length(noisy)) < 1e-8);
    CHECK(length(curve) > 0.1);  // real motion, not a phase spiral
}

TEST_CASE("reparametrization leaves the default geometric phase alone") {
    std::mt19937_64 rng(7);
    const auto a = random_state(3, rng);
    const auto b = random_state(3, rng);
    const auto curve = smooth_curve_between(a, b, 90, 9);
    std::vector<double> warped(curve.params());
    for (auto& s : warped) s = std::tan(1.2 * s);  // strictly monotone
    const SampledCurve re(warped, curve.states());
    CHECK(std::abs(geometric_phase(curve).geometric - geometric_phase(re).geometric) < 1e-8);
}

TEST_CASE("reverse flips the geometric phase and is an involution") {
    std::mt19937_64 rng(8);
    const auto a = random_state(4, rng);
    const auto b = random_state(4, rng);
    const auto curve = smooth_curve_between(a, b, 64, 10);
    const auto rev = reverse(curve);
    CHECK(angle_distance(geometric_phase(rev).geometric,
                         -geometric_phase(curve).geometric) < 1e-10);
    const auto twice = reverse(rev);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(same_ray(curve.ray(i), twice.ray(i)));
        CHECK(curve.param(i) == doctest::Approx(twice.param(i)));
    }
}

TEST_CASE("concat validates junctions and preserves segment phases") {
    std::mt19937_64 rng(9);
    const auto a = random_state(3, rng);
    const auto b = random_state(3, rng);
    const auto c = random_state(3, rng);
    const auto c1 = smooth_curve_between(a, b, 50, 11);
    const auto c2 = smooth_curve_between(b, c, 50, 12);
    const auto joined = concat(c1, c2);
    CHECK(joined.size() == c1.size() + c2.size() - 1);
    CHECK(same_ray(joined.ray(0), Ray(a)));
    CHECK(same_ray(joined.ray(joined.size() - 1), Ray(c)));

    const auto mismatched = smooth_curve_between(a, c, 50, 13);
    CHECK_THROWS_AS(concat(c1, mismatched), JunctionError);
}

TEST_CASE("loop closed by the reversed curve has zero geometric phase") {
    std::mt19937_64 rng(10);
    const auto a = random_state(4, rng);
    const auto b = random_state(4, rng);
    const auto curve = smooth_curve_between(a, b, 80, 14);
    const auto loop = concat(curve, reverse(curve));
    CHECK(angle_distance(geometric_phase(loop).geometric, 0.0) < 1e-10);
}

TEST_CASE("two-segment additivity when the chain closes (n = 3, rho3 = rho1)") {
    std::mt19937_64 rng(11);
    const auto a = random_state(4, rng);
    const auto b = random_state(4, rng);
    const auto there = smooth_curve_between(a, b, 70, 15);
    const auto back = smooth_curve_between(b, a, 70, 16);
    const double whole = geometric_phase(concat(there, back)).geometric;
    const double parts =
        geometric_phase(there).geometric + geometric_phase(back).geometric;
    CHECK(angle_distance(whole, parts) < 1e-8);
    CHECK(nonadditivity_residual({there, back}) < 1e-10);
}

TEST_CASE("phase change between curves sharing endpoints") {
    std::mt19937_64 rng(12);
    const auto a = random_state(4, rng);
    const auto b = random_state(4, rng);
    const auto c1 = smooth_curve_between(a, b, 60, 17);
    const auto c2 = smooth_curve_between(a, b, 60, 18, 0.7);
    const double lhs = geometric_phase(c2).geometric - geometric_phase(c1).geometric;
    const double rhs = -geometric_phase(concat(c1, reverse(c2))).geometric;
    CHECK(angle_distance(lhs, rhs) < 1e-8);
}

TEST_CASE("nonadditivity residual vanishes for random chains") {
    std::mt19937_64 rng(13);
    const auto a = random_state(4, rng);
    const auto b = random_state(4, rng);
    const auto c = random_state(4, rng);
    const auto d = random_state(4, rng);
    const std::vector<SampledCurve> chain{smooth_curve_between(a, b, 40, 19),
                                          smooth_curve_between(b, c, 40, 20),
                                          smooth_curve_between(c, d, 40, 21)};
    CHECK(nonadditivity_residual(chain) < 1e-8);
    CHECK_THROWS_AS(nonadditivity_residual({chain[0], chain[2]}), JunctionError);
}

TEST_CASE("closed-loop geometric phase is minus the node Bargmann argument") {
    std::mt19937_64 rng(18);
    const auto a = random_state(3, rng);
    const auto b = random_state(3, rng);
    const auto c = random_state(3, rng);
    const auto loop = concat_chain({smooth_curve_between(a, b, 25, 31),
                                    smooth_curve_between(b, c, 25, 32),
                                    smooth_curve_between(c, a, 25, 33)});
    const double phase = geometric_phase(loop).geometric;
    const auto bi = delta_n(loop.states());
    CHECK(angle_distance(phase, -bi.arg()) < 1e-11);
}

TEST_CASE("subarc scan sees no phase on gauge motion") {
    const auto psi = random_state(3, 14);
    const auto curve = phase_spiral(psi, 1.0, 30);
    const auto scan = subarc_phase_scan(curve);
    CHECK(scan.max_abs_phase < 1e-12);
}

TEST_CASE("degenerate loop and zero-area chart agree at (0, 0)") {
    std::mt19937_64 rng(15);
    const auto a = random_state(3, rng);
    const auto b = random_state(3, rng);
    const auto arc = smooth_curve_between(a, b, 21, 22);

    std::vector<double> axis;
    for (int i = 0; i < 21; ++i) axis.push_back(i / 20.0);
    const auto chart = ChartedManifold::from_axes(
        {axis, axis},
        [&arc](std::span<const double> uv) {
            const auto idx = static_cast<std::size_t>(std::lround(uv[0] * 20.0));
            return arc.state(idx);
        });
    const auto surface = SurfaceChart::with_box_boundary(chart);
    const auto loop = boundary_loop(surface);
    const auto [phase, area] = loop_phase_vs_area(loop, surface);
    CHECK(std::abs(phase) < 1e-10);
    CHECK(std::abs(area) < 1e-10);
}

TEST_CASE("latitude circle phase equals minus the cap area") {
    const double theta = 1.0;
    const Index n_phi = 4001;
    const auto circle = latitude_circle(theta, static_cast<std::size_t>(n_phi));
    const auto cap = cap_chart(theta, 301, n_phi);
    const auto [phase, minus_area] = loop_phase_vs_area(circle, cap);
    const double expected = -kPi * (1.0 - std::cos(theta));
    CHECK(phase == doctest::Approx(expected).epsilon(1e-6));
    CHECK(minus_area == doctest::Approx(expected).epsilon(1e-5));
    CHECK(angle_distance(phase, minus_area) < 1e-5);
}

TEST_CASE("open loops are rejected") {
    std::mt19937_64 rng(16);
    const auto a = random_state(2, rng);
    const auto b = random_state(2, rng);
    const auto arc = smooth_curve_between(a, b, 15, 23);
    const auto cap = cap_chart(0.8, 31, 31);
    CHECK_THROWS_AS(loop_phase_vs_area(arc, cap), BoundaryError);
}

TEST_CASE("csv export walks the partial dynamical sums") {
    const auto psi = random_state(2, 17);
    const auto curve = phase_spiral(psi, 0.5, 6);
    std::ostringstream out;
    write_phase_csv(curve, out);
    const std::string text = out.str();
    CHECK(text.find("s,dynamical_partial_sum") == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 7);  // header + 6 nodes
}

}  // TEST_SUITE
