#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "raygeo/gaussian.hpp"
#include "raygeo/nullphase.hpp"

using namespace raygeo;

namespace {

// Quadrature oracle: composite Simpson integration of the product
// wavefunction, independent of the closed form under test.
double simpson_1d(const std::function<double(double)>& f, double lo, double hi, int n) {
    // n intervals, n even
    const double h = (hi - lo) / n;
    double sum = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

double overlap_oracle_1d(const GaussianState& a, const GaussianState& b) {
    const double width = 1.0 / std::sqrt(std::min(a.U()(0, 0), b.U()(0, 0)));
    const double lo = std::min(a.y()[0], b.y()[0]) - 12.0 * width;
    const double hi = std::max(a.y()[0], b.y()[0]) + 12.0 * width;
    return simpson_1d(
        [&](double x) {
            Eigen::VectorXd p(1);
            p << x;
            return a.eval(p) * b.eval(p);
        },
        lo, hi, 4000);
}

double overlap_oracle_2d(const GaussianState& a, const GaussianState& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(a.U()), eb(b.U());
    const double width =
        1.0 / std::sqrt(std::min(ea.eigenvalues().minCoeff(), eb.eigenvalues().minCoeff()));
    const double lo0 = std::min(a.y()[0], b.y()[0]) - 10.0 * width;
    const double hi0 = std::max(a.y()[0], b.y()[0]) + 10.0 * width;
    const double lo1 = std::min(a.y()[1], b.y()[1]) - 10.0 * width;
    const double hi1 = std::max(a.y()[1], b.y()[1]) + 10.0 * width;
    return simpson_1d(
        [&](double x0) {
            return simpson_1d(
                [&](double x1) {
                    Eigen::VectorXd p(2);
                    p << x0, x1;
                    return a.eval(p) * b.eval(p);
                },
                lo1, hi1, 400);
        },
        lo0, hi0, 400);
}

GaussianState g1d(double y, double u) {
    Eigen::VectorXd yv(1);
    yv << y;
    Eigen::MatrixXd U(1, 1);
    U << u;
    return GaussianState(yv, U);
}

Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng) {
    Eigen::MatrixXd M(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) M(r, c) = standard_normal(rng);
    }
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(M).householderQ();
    Eigen::VectorXd ev(n);
    for (int i = 0; i < n; ++i) {
        ev[i] = 0.3 + 2.7 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    }
    return Q * ev.asDiagonal() * Q.transpose();
}

}  // namespace

TEST_SUITE("gaussian") {

TEST_CASE("states validate their covariance") {
    Eigen::VectorXd y(2);
    y << 0.0, 1.0;
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 0.2, 0.3, 1.0;  // not symmetric
    CHECK_THROWS_AS(GaussianState(y, bad), MatrixError);
    bad << 1.0, 2.0, 2.0, 1.0;  // indefinite
    CHECK_THROWS_AS(GaussianState(y, bad), MatrixError);
    CHECK_THROWS_AS(gaussian_overlap(g1d(0.0, 1.0), GaussianState::translate(y)),
                    DimensionError);
}

TEST_CASE("unit separation overlap in one dimension") {
    CHECK(gaussian_overlap(g1d(0.0, 1.0), g1d(0.0, 1.0)) == doctest::Approx(1.0));
    const double got = gaussian_overlap(g1d(0.0, 1.0), g1d(2.0, 1.0));
    CHECK(got == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    CHECK(got == doctest::Approx(overlap_oracle_1d(g1d(0.0, 1.0), g1d(2.0, 1.0)))
                     .epsilon(1e-10));
}

TEST_CASE("width mismatch overlap in one dimension") {
    const double got = gaussian_overlap(g1d(0.5, 1.0), g1d(0.5, 4.0));
    const double expected = std::sqrt(2.0 * std::sqrt(4.0) / 5.0);
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    CHECK(got == doctest::Approx(0.894427190999916).epsilon(1e-10));
    CHECK(got ==
          doctest::Approx(overlap_oracle_1d(g1d(0.5, 1.0), g1d(0.5, 4.0))).epsilon(1e-10));
}

TEST_CASE("closed form matches the quadrature oracle on random cases") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 8; ++trial) {
        const auto a = g1d(2.0 * standard_normal(rng), 0.4 + std::abs(standard_normal(rng)));
        const auto b = g1d(2.0 * standard_normal(rng), 0.4 + std::abs(standard_normal(rng)));
        CHECK(gaussian_overlap(a, b) ==
              doctest::Approx(overlap_oracle_1d(a, b)).epsilon(1e-9));
        CHECK(gaussian_overlap(a, b) == doctest::Approx(gaussian_overlap(b, a)));
    }
    for (int trial = 0; trial < 3; ++trial) {
        Eigen::VectorXd ya(2), yb(2);
        ya << standard_normal(rng), standard_normal(rng);
        yb << standard_normal(rng), standard_normal(rng);
        const GaussianState a(ya, random_spd(2, rng));
        const GaussianState b(yb, random_spd(2, rng));
        CHECK(gaussian_overlap(a, b) ==
              doctest::Approx(overlap_oracle_2d(a, b)).epsilon(1e-8));
    }
}

TEST_CASE("translate chart carries the squared-distance kernel") {
    const auto chart = gaussian_translate_chart({{-1.0, 0.0, 1.5}, {0.0, 2.0}});
    CHECK(chart.shape == std::vector<Index>{3, 2});
    CHECK(chart.family_param_count == 2);
    for (Index i = 0; i < chart.node_count(); ++i) {
        for (Index j = 0; j < chart.node_count(); ++j) {
            Eigen::Vector2d yi(chart.params[i][0], chart.params[i][1]);
            Eigen::Vector2d yj(chart.params[j][0], chart.params[j][1]);
            const double expected = std::exp(-0.25 * (yi - yj).squaredNorm());
            CHECK(chart.gram(i, j).real() == doctest::Approx(expected).epsilon(1e-10));
            CHECK(chart.gram(i, j).imag() == 0.0);
        }
    }
}

TEST_CASE("gaussian family charts pass the NPM and isotropy checks") {
    const auto translates = gaussian_translate_chart({{-1.0, -0.5, 0.0, 0.5, 1.0},
                                                      {-1.0, -0.5, 0.0, 0.5, 1.0}});
    CHECK(is_npm(translates, 1e-10).ok);
    const auto iso = isotropy_check(translates);
    CHECK(iso.ok);
    CHECK(iso.max_abs_omega < 1e-14);

    // full (y, U) family for N = 2: 2 + 3 parameters
    std::vector<Eigen::VectorXd> ys;
    for (double y0 : {-0.5, 0.5}) {
        Eigen::VectorXd y(2);
        y << y0, 0.3;
        ys.push_back(y);
    }
    std::mt19937_64 rng(72);
    std::vector<Eigen::MatrixXd> Us{random_spd(2, rng), random_spd(2, rng)};
    const auto family = gaussian_chart(ys, Us);
    CHECK(family.family_param_count == 5);
    CHECK(is_npm(family, 1e-10).ok);
}

TEST_CASE("single-node chart is trivial") {
    Eigen::VectorXd y(1);
    y << 0.7;
    const auto chart = gaussian_chart({y}, {Eigen::MatrixXd::Identity(1, 1)});
    CHECK(chart.node_count() == 1);
    CHECK(chart.gram(0, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("mixture normalization fixes the quadratic form") {
    GaussianMixture single{{g1d(0.3, 1.0)}, Eigen::VectorXd::Ones(1), 0.0};
    single = mixture_normalize(single);
    CHECK(single.normalizer == doctest::Approx(1.0));

    GaussianMixture twin{{g1d(0.3, 1.0), g1d(0.3, 1.0)}, Eigen::VectorXd::Ones(2) * 0.5, 0.0};
    twin = mixture_normalize(twin);
    CHECK(twin.normalizer == doctest::Approx(1.0).epsilon(1e-12));

    GaussianMixture pair{{g1d(0.0, 1.0), g1d(2.0, 1.0)}, Eigen::VectorXd::Ones(2) * 0.5, 0.0};
    pair = mixture_normalize(pair);
    const double expected = 1.0 / std::sqrt(0.5 * (1.0 + std::exp(-1.0)));
    CHECK(pair.normalizer == doctest::Approx(expected).epsilon(1e-12));

    // idempotent
    const double again = mixture_normalize(pair).normalizer;
    CHECK(again == doctest::Approx(pair.normalizer));

    GaussianMixture zero{{g1d(0.0, 1.0)}, Eigen::VectorXd::Zero(1), 0.0};
    CHECK_THROWS_AS(mixture_normalize(zero), ZeroVectorError);
}

TEST_CASE("mixture overlaps stay positive and normalized") {
    GaussianMixture a{{g1d(0.0, 1.0), g1d(1.0, 1.0)}, Eigen::VectorXd::Ones(2), 0.0};
    a = mixture_normalize(a);
    CHECK(mixture_overlap(a, a) == doctest::Approx(1.0).epsilon(1e-12));

    GaussianMixture far1{{g1d(0.0, 1.0)}, Eigen::VectorXd::Ones(1), 0.0};
    GaussianMixture far2{{g1d(20.0, 1.0)}, Eigen::VectorXd::Ones(1), 0.0};
    far1 = mixture_normalize(far1);
    far2 = mixture_normalize(far2);
    const double tiny = mixture_overlap(far1, far2);
    CHECK(tiny > 0.0);
    CHECK(tiny < 1e-40);
}

TEST_CASE("geodesic midpoints of translates are mixtures with positive overlaps") {
    const double c = std::exp(-1.0);  // overlap of translates at distance 2
    const double s_star = std::acos(c);
    const double b = std::sin(s_star / 2.0) / std::sqrt(1.0 - c * c);
    const double a = std::cos(s_star / 2.0) - c * b;
    REQUIRE(a > 0.0);
    REQUIRE(b > 0.0);
    GaussianMixture mid{{g1d(0.0, 1.0), g1d(2.0, 1.0)}, Eigen::VectorXd(2), 0.0};
    mid.weights << a, b;
    mid = mixture_normalize(mid);

    GaussianMixture left{{g1d(0.0, 1.0)}, Eigen::VectorXd::Ones(1), 0.0};
    GaussianMixture right{{g1d(2.0, 1.0)}, Eigen::VectorXd::Ones(1), 0.0};
    left = mixture_normalize(left);
    right = mixture_normalize(right);
    const double to_left = mixture_overlap(mid, left);
    const double to_right = mixture_overlap(mid, right);
    CHECK(to_left == doctest::Approx(std::cos(s_star / 2.0)).epsilon(1e-12));
    CHECK(to_right == doctest::Approx(std::cos(s_star / 2.0)).epsilon(1e-12));
}

TEST_CASE("translate family alone is not totally geodesic") {
    // best single translate against the geodesic midpoint of two translates
    const double c = std::exp(-1.0);
    const double s_star = std::acos(c);
    const double b = std::sin(s_star / 2.0) / std::sqrt(1.0 - c * c);
    const double a = std::cos(s_star / 2.0) - c * b;
    GaussianMixture mid{{g1d(0.0, 1.0), g1d(2.0, 1.0)}, Eigen::VectorXd(2), 0.0};
    mid.weights << a, b;
    mid = mixture_normalize(mid);

    double best = 0.0;
    for (int k = 0; k <= 400; ++k) {
        const double y = -1.0 + 4.0 * k / 400.0;
        GaussianMixture probe{{g1d(y, 1.0)}, Eigen::VectorXd::Ones(1), 0.0};
        probe = mixture_normalize(probe);
        best = std::max(best, mixture_overlap(mid, probe));
    }
    const double residual = std::sqrt(std::max(0.0, 2.0 - 2.0 * best));
    CHECK(residual > 0.1);
}

TEST_CASE("embedding reproduces closed-form overlaps") {
    const auto a = g1d(0.0, 1.0);
    const auto b = g1d(2.0, 1.0);
    const auto grid = auto_grid({a, b}, 2048);
    const auto ea = embed_gaussian(a, grid);
    const auto eb = embed_gaussian(b, grid);
    CHECK(fidelity(ea, ea) == doctest::Approx(1.0));
    const Complex ov = inner(ea, eb);
    CHECK(std::abs(ov.imag()) < 1e-15);
    CHECK(ov.real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));

    const auto wide = g1d(0.5, 1.0);
    const auto tight = g1d(0.5, 4.0);
    const auto grid2 = auto_grid({wide, tight}, 2048);
    const double got = inner(embed_gaussian(wide, grid2), embed_gaussian(tight, grid2)).real();
    CHECK(got == doctest::Approx(0.894427190999916).epsilon(1e-8));
}

TEST_CASE("embedding agrees with the closed form across random families") {
    std::mt19937_64 rng(73);
    double worst = 0.0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto a = g1d(2.0 * standard_normal(rng), 0.4 + std::abs(standard_normal(rng)));
        const auto b = g1d(2.0 * standard_normal(rng), 0.4 + std::abs(standard_normal(rng)));
        const auto grid = auto_grid({a, b}, 2048);
        const double got = inner(embed_gaussian(a, grid), embed_gaussian(b, grid)).real();
        worst = std::max(worst, std::abs(got - gaussian_overlap(a, b)));
    }
    for (int trial = 0; trial < 40; ++trial) {
        Eigen::VectorXd ya(2), yb(2);
        ya << standard_normal(rng), standard_normal(rng);
        yb << standard_normal(rng), standard_normal(rng);
        const GaussianState a(ya, random_spd(2, rng));
        const GaussianState b(yb, random_spd(2, rng));
        const auto grid = auto_grid({a, b}, 256);
        const double got = inner(embed_gaussian(a, grid), embed_gaussian(b, grid)).real();
        worst = std::max(worst, std::abs(got - gaussian_overlap(a, b)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("coarse grids are rejected by the embedding self-test") {
    const auto a = g1d(0.0, 1.0);
    QuadratureGrid grid{12, -9.0, 9.0};
    CHECK_THROWS_AS(embed_gaussian(a, grid), QuadratureError);
    QuadratureGrid small{2048, -4.0, 4.0};  // misses +/- 8 sigma
    CHECK_THROWS_AS(embed_gaussian(a, small), QuadratureError);
}

TEST_CASE("embedded translate chart is isotropic and null-phase") {
    std::vector<GaussianState> family;
    for (int k = 0; k < 5; ++k) family.push_back(g1d(-1.0 + 0.5 * k, 1.0));
    const auto grid = auto_grid(family, 512);
    std::vector<double> axis;
    std::vector<StateVector> states;
    for (int k = 0; k < 5; ++k) {
        axis.push_back(-1.0 + 0.5 * k);
        states.push_back(embed_gaussian(family[static_cast<std::size_t>(k)], grid));
    }
    std::vector<std::vector<double>> params;
    for (double y : axis) params.push_back({y});
    const ChartedManifold chart({5}, params, states);
    CHECK(is_npm(chart, 1e-10).ok);
    const auto scan = subarc_phase_scan(SampledCurve(axis, chart.states()));
    CHECK(scan.max_abs_phase < 1e-10);
}

}  // TEST_SUITE
