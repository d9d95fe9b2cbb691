// npm-tool: generate curves and manifolds on quantum ray spaces, compute
// geometric phases and Bargmann invariants, and run the null-phase
// verification checks. JSON in, JSON reports out.
//
// Exit codes: 0 all checks passed, 1 a check failed (witness in the
// report), 2 usage or input errors.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "raygeo/bloch.hpp"
#include "raygeo/gaussian.hpp"
#include "raygeo/geodesics.hpp"
#include "raygeo/json_io.hpp"
#include "raygeo/nullphase.hpp"
#include "raygeo/suite.hpp"

namespace {

using namespace raygeo;

constexpr double kPi = std::numbers::pi;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open input file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void emit(const Json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << std::endl;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw UsageError("cannot open output file: " + out_path);
    out << j.dump(2) << "\n";
}

Json envelope(const std::string& command, bool ok, Json witness, Json values,
              Json config) {
    return Json{{"command", command},
                {"ok", ok},
                {"witness", std::move(witness)},
                {"values", std::move(values)},
                {"config", std::move(config)}};
}

int finish(const std::string& command, bool ok, const Json& witness,
           const Json& values, const Json& config, const std::string& out) {
    emit(envelope(command, ok, witness, values, config), out);
    return ok ? 0 : 1;
}

std::vector<StateVector> seeded_states(Index dim, std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<StateVector> out;
    for (int i = 0; i < count; ++i) out.push_back(random_state(dim, rng));
    return out;
}

std::vector<StateVector> orthonormal_basis(Index dim, int m, std::uint64_t seed) {
    if (m > dim) throw UsageError("basis size m exceeds the ambient dimension");
    std::vector<StateVector> basis;
    if (seed == 0) {
        for (int i = 0; i < m; ++i) basis.push_back(StateVector::basis(dim, i));
        return basis;
    }
    std::mt19937_64 rng(seed);
    while (static_cast<int>(basis.size()) < m) {
        Vector v(dim);
        for (Index i = 0; i < dim; ++i) v[i] = Complex(standard_normal(rng), standard_normal(rng));
        for (const auto& e : basis) v -= e.amplitudes().dot(v) * e.amplitudes();
        if (v.norm() < 1e-6) continue;
        basis.push_back(normalize(v));
    }
    return basis;
}

MembershipOracle positive_coeff_oracle(double tol) {
    return [tol](const StateVector& psi) {
        Index pivot = 0;
        double best = 0.0;
        for (Index i = 0; i < psi.dim(); ++i) {
            if (std::abs(psi[i]) > best) {
                best = std::abs(psi[i]);
                pivot = i;
            }
        }
        if (best <= 0.0) return false;
        const Complex rot = std::conj(psi[pivot]) / std::abs(psi[pivot]);
        for (Index i = 0; i < psi.dim(); ++i) {
            const Complex c = rot * psi[i];
            if (std::abs(c.imag()) > tol || c.real() < -tol) return false;
        }
        return true;
    };
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"null phase curves and manifolds on quantum ray spaces"};
    app.require_subcommand(1);
    std::function<int()> action;

    // ---- rand-state ----
    {
        auto* cmd = app.add_subcommand("rand-state", "write a Haar-random state");
        auto dim = std::make_shared<Index>(4);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--dim", *dim, "Hilbert space dimension")->check(CLI::Range(2, 1 << 20));
        cmd->add_option("--seed", *seed, "RNG seed");
        cmd->add_option("--out", *out, "output path (stdout when omitted)");
        cmd->callback([=, &action]() {
            action = [=]() {
                emit(state_to_json(random_state(*dim, *seed)), *out);
                return 0;
            };
        });
    }

    // ---- geodesic ----
    {
        auto* cmd = app.add_subcommand("geodesic",
                                       "geodesic between two seeded random rays");
        auto dim = std::make_shared<Index>(4);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto mesh = std::make_shared<std::size_t>(1000);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--dim", *dim)->check(CLI::Range(2, 4096));
        cmd->add_option("--seed", *seed);
        cmd->add_option("--mesh", *mesh)->check(CLI::Range(2, 2000000));
        cmd->add_option("--out", *out);
        cmd->callback([=, &action]() {
            action = [=]() {
                const auto pair = seeded_states(*dim, *seed, 2);
                emit(curve_to_json(geodesic(Ray(pair[0]), Ray(pair[1]), *mesh)), *out);
                return 0;
            };
        });
    }

    // ---- phase ----
    {
        auto* cmd = app.add_subcommand("phase", "phases of a sampled curve");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto csv = std::make_shared<std::string>();
        auto estimator = std::make_shared<std::string>("arg");
        cmd->add_option("--in", *in, "curve JSON")->required();
        cmd->add_option("--out", *out);
        cmd->add_option("--csv", *csv, "write s vs partial dynamical phase");
        cmd->add_option("--estimator", *estimator)
            ->check(CLI::IsMember({"arg", "quadrature"}));
        cmd->callback([=, &action]() {
            action = [=]() {
                const auto curve = curve_from_json(load_json(*in));
                const auto est = (*estimator == "quadrature")
                                     ? PhaseEstimator::quadrature
                                     : PhaseEstimator::discrete_bargmann;
                const auto report = geometric_phase(curve, est);
                if (!csv->empty()) {
                    std::ofstream cout_file(*csv);
                    if (!cout_file) throw UsageError("cannot open csv path: " + *csv);
                    write_phase_csv(curve, cout_file);
                }
                return finish("phase", true, nullptr, report_to_json(report),
                              Json{{"in", *in}, {"estimator", *estimator}}, *out);
            };
        });
    }

    // ---- bargmann ----
    {
        auto* cmd = app.add_subcommand("bargmann", "Bargmann invariant of a state list");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--in", *in, "states JSON")->required();
        cmd->add_option("--out", *out);
        cmd->callback([=, &action]() {
            action = [=]() {
                const auto psis = states_from_json(load_json(*in));
                const auto result = delta_n(psis);
                return finish("bargmann", true, nullptr, report_to_json(result),
                              Json{{"in", *in}}, *out);
            };
        });
    }

    // ---- triangle-check ----
    {
        auto* cmd = app.add_subcommand(
            "triangle-check", "geodesic triangle phase against the Bargmann argument");
        auto dim = std::make_shared<Index>(3);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto mesh = std::make_shared<std::size_t>(1000);
        auto tol = std::make_shared<double>(1e-6);
        auto preset = std::make_shared<std::string>("random");
        auto out = std::make_shared<std::string>();
        cmd->add_option("--dim", *dim)->check(CLI::Range(2, 4096));
        cmd->add_option("--seed", *seed);
        cmd->add_option("--mesh", *mesh)->check(CLI::Range(2, 2000000));
        cmd->add_option("--tol", *tol);
        cmd->add_option("--preset", *preset)->check(CLI::IsMember({"random", "octant"}));
        cmd->add_option("--out", *out);
        cmd->callback([=, &action]() {
            action = [=]() {
                std::vector<StateVector> v;
                if (*preset == "octant") {
                    const auto oct = octant_vertices();
                    v.assign(oct.begin(), oct.end());
                } else {
                    v = seeded_states(*dim, *seed, 3);
                }
                const double phase =
                    geodesic_triangle_phase(Ray(v[0]), Ray(v[1]), Ray(v[2]), *mesh);
                const double arg = delta3(v[0], v[1], v[2]).arg();
                const double residual = angle_distance(phase, -arg);
                const bool ok = residual < *tol;
                return finish(
                    "triangle-check", ok,
                    ok ? Json(nullptr) : Json{{"residual", residual}},
                    Json{{"phase", phase}, {"bargmann_arg", arg}, {"residual", residual}},
                    Json{{"dim", *dim},
                         {"seed", *seed},
                         {"mesh", *mesh},
                         {"tol", *tol},
                         {"preset", *preset}},
                    *out);
            };
        });
    }

    // ---- npc-gen ----
    {
        auto* cmd = app.add_subcommand("npc-gen", "generate a null phase curve");
        auto type = std::make_shared<std::string>("sphere");
        auto dim = std::make_shared<Index>(4);
        auto m = std::make_shared<int>(3);
        auto theta0 = std::make_shared<double>(1.0);
        auto bulge = std::make_shared<double>(0.5);
        auto mesh = std::make_shared<std::size_t>(200);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--type", *type)->check(CLI::IsMember({"sphere", "general"}));
        cmd->add_option("--dim", *dim)->check(CLI::Range(2, 4096));
        cmd->add_option("--m", *m, "sphere dimension (sphere type)")->check(CLI::Range(2, 64));
        cmd->add_option("--theta0", *theta0, "endpoint angle in (0, pi)");
        cmd->add_option("--bulge", *bulge);
        cmd->add_option("--mesh", *mesh)->check(CLI::Range(2, 2000000));
        cmd->add_option("--seed", *seed, "0 keeps the standard basis");
        cmd->add_option("--out", *out);
        cmd->callback([=, &action]() {
            action = [=]() {
                if (*type == "sphere") {
                    const auto basis = orthonormal_basis(*dim, *m, *seed);
                    emit(curve_to_json(npc_from_sphere_path(
                             bulge_trajectory(*m, *theta0, *bulge, *mesh, basis))),
                         *out);
                    return 0;
                }
                GeneralNPCSpec spec;
                spec.theta0 = *theta0;
                const double dip = std::min(0.5, *bulge);
                for (std::size_t i = 0; i < *mesh; ++i) {
                    const double t =
                        static_cast<double>(i) / static_cast<double>(*mesh - 1);
                    const double sigma = 1.0 - 0.35 * std::sin(kPi * t) * std::sin(kPi * t);
                    spec.params.push_back(t);
                    spec.sigma.push_back(sigma);
                    spec.theta.push_back(*theta0 * t - dip * std::sin(kPi * t));
                    Eigen::VectorXd chi(1);
                    chi[0] = std::sqrt(std::max(0.0, 1.0 - sigma * sigma));
                    spec.chi_coeffs.push_back(chi);
                }
                const auto basis = orthonormal_basis(*dim, 3, *seed);
                emit(curve_to_json(npc_general(spec, basis)), *out);
                return 0;
            };
        });
    }

    // ---- npc-check ----
    {
        auto* cmd = app.add_subcommand("npc-check", "triple positivity scan of a curve");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto tol = std::make_shared<double>(1e-10);
        auto triples = std::make_shared<std::size_t>(10000);
        auto seed = std::make_shared<std::uint64_t>(0x7265616c706f73ULL);
        cmd->add_option("--in", *in, "curve JSON")->required();
        cmd->add_option("--out", *out);
        cmd->add_option("--tol", *tol);
        cmd->add_option("--triples", *triples);
        cmd->add_option("--seed", *seed);
        cmd->callback([=, &action]() {
            action = [=]() {
                const auto curve = curve_from_json(load_json(*in));
                TripleScanOptions opts;
                opts.min_triples = *triples;
                opts.seed = *seed;
                const auto report = is_npc(curve, *tol, opts);
                return finish("npc-check", report.ok,
                              report.ok ? Json(nullptr) : report_to_json(report)["worst"],
                              report_to_json(report),
                              Json{{"in", *in}, {"tol", *tol}, {"triples", *triples}},
                              *out);
            };
        });
    }

    // ---- npm-check ----
    {
        auto* cmd = app.add_subcommand("npm-check", "triple positivity scan of a chart");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto tol = std::make_shared<double>(1e-10);
        auto triples = std::make_shared<std::size_t>(10000);
        cmd->add_option("--in", *in, "chart JSON")->required();
        cmd->add_option("--out", *out);
        cmd->add_option("--tol", *tol);
        cmd->add_option("--triples", *triples);
        cmd->callback([=, &action]() {
            action = [=]() {
                const auto chart = chart_from_json(load_json(*in));
                TripleScanOptions opts;
                opts.min_triples = *triples;
                const auto report = is_npm(chart, *tol, opts);
                return finish("npm-check", report.ok,
                              report.ok ? Json(nullptr) : report_to_json(report)["worst"],
                              report_to_json(report),
                              Json{{"in", *in}, {"tol", *tol}, {"triples", *triples}},
                              *out);
            };
        });
    }

    // ---- isotropy ----
    {
        auto* cmd = app.add_subcommand("isotropy", "pulled-back symplectic form on a chart");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto tol = std::make_shared<double>(-1.0);
        cmd->add_option("--in", *in, "chart JSON")->required();
        cmd->add_option("--out", *out);
        cmd->add_option("--tol", *tol, "absolute bound; negative picks 10 h^2");
        cmd->callback([=, &action]() {
            action = [=]() {
                const auto chart = chart_from_json(load_json(*in));
                const auto report = isotropy_check(chart, *tol);
                return finish("isotropy", report.ok,
                              report.ok ? Json(nullptr) : report_to_json(report),
                              report_to_json(report), Json{{"in", *in}, {"tol", *tol}},
                              *out);
            };
        });
    }

    // ---- tg-check ----
    {
        auto* cmd = app.add_subcommand("tg-check", "totally geodesic check of a chart");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto membership = std::make_shared<std::string>("hull");
        auto pairs = std::make_shared<std::size_t>(25);
        auto seed = std::make_shared<std::uint64_t>(42);
        auto tol = std::make_shared<double>(1e-8);
        cmd->add_option("--in", *in, "chart JSON")->required();
        cmd->add_option("--out", *out);
        cmd->add_option("--membership", *membership)
            ->check(CLI::IsMember({"hull", "positive-coeffs"}));
        cmd->add_option("--pairs", *pairs);
        cmd->add_option("--seed", *seed);
        cmd->add_option("--tol", *tol);
        cmd->callback([=, &action]() {
            action = [=]() {
                const auto chart = chart_from_json(load_json(*in));
                MembershipOracle oracle;
                std::shared_ptr<HullModel> hull;
                if (*membership == "hull") {
                    std::vector<Ray> rays;
                    for (Index i = 0; i < chart.node_count(); ++i) {
                        rays.emplace_back(chart.state(i));
                    }
                    hull = std::make_shared<HullModel>(
                        pancharatnam_lift(rays, chart.state(0)), *tol);
                    oracle = [hull](const StateVector& psi) {
                        return hull_membership(*hull, psi).member;
                    };
                } else {
                    oracle = positive_coeff_oracle(1e-8);
                }
                const auto report = totally_geodesic_check(chart, oracle, *pairs, *seed);
                return finish("tg-check", report.ok,
                              report.ok ? Json(nullptr) : report_to_json(report),
                              report_to_json(report),
                              Json{{"in", *in},
                                   {"membership", *membership},
                                   {"pairs", *pairs},
                                   {"seed", *seed}},
                              *out);
            };
        });
    }

    // ---- hull-extend ----
    {
        auto* cmd = app.add_subcommand("hull-extend",
                                       "non-negative hull of in-phase anchors");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto tol = std::make_shared<double>(1e-8);
        auto lift = std::make_shared<bool>(false);
        cmd->add_option("--in", *in, "states JSON")->required();
        cmd->add_option("--out", *out);
        cmd->add_option("--tol", *tol, "membership tolerance stored in the hull");
        cmd->add_flag("--lift", *lift, "pancharatnam-lift the states first");
        cmd->callback([=, &action]() {
            action = [=]() {
                auto anchors = states_from_json(load_json(*in));
                if (*lift) {
                    std::vector<Ray> rays;
                    for (const auto& s : anchors) rays.emplace_back(s);
                    anchors = pancharatnam_lift(rays, anchors.front());
                }
                emit(hull_to_json(hull_extend(anchors, *tol)), *out);
                return 0;
            };
        });
    }

    // ---- hull-member ----
    {
        auto* cmd = app.add_subcommand("hull-member", "NNLS membership in a hull");
        auto hull_path = std::make_shared<std::string>();
        auto state_path = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto tol = std::make_shared<double>(-1.0);
        cmd->add_option("--hull", *hull_path, "hull JSON")->required();
        cmd->add_option("--state", *state_path, "state JSON")->required();
        cmd->add_option("--out", *out);
        cmd->add_option("--tol", *tol);
        cmd->callback([=, &action]() {
            action = [=]() {
                const auto hull = hull_from_json(load_json(*hull_path));
                const auto psi = state_from_json(load_json(*state_path));
                const auto report = hull_membership(hull, psi, *tol);
                return finish("hull-member", report.member,
                              report.member ? Json(nullptr)
                                            : Json{{"residual", report.residual}},
                              report_to_json(report),
                              Json{{"hull", *hull_path}, {"state", *state_path}},
                              *out);
            };
        });
    }

    // ---- characterize ----
    {
        auto* cmd = app.add_subcommand(
            "characterize", "hull construction proof obligations for a chart");
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto pairs = std::make_shared<std::size_t>(40);
        auto seed = std::make_shared<std::uint64_t>(2024);
        cmd->add_option("--in", *in, "chart JSON")->required();
        cmd->add_option("--out", *out);
        cmd->add_option("--pairs", *pairs);
        cmd->add_option("--seed", *seed);
        cmd->callback([=, &action]() {
            action = [=]() {
                const auto chart = chart_from_json(load_json(*in));
                CharacterizationOptions opts;
                opts.tg_pairs = *pairs;
                opts.seed = *seed;
                const auto report = verify_npm_characterization(chart, opts);
                return finish("characterize", report.ok,
                              report.ok ? Json(nullptr) : report_to_json(report),
                              report_to_json(report),
                              Json{{"in", *in}, {"pairs", *pairs}, {"seed", *seed}},
                              *out);
            };
        });
    }

    // ---- gaussian-overlap ----
    {
        auto* cmd = app.add_subcommand("gaussian-overlap",
                                       "closed-form overlap of two Gaussian states");
        auto in = std::make_shared<std::string>();
        auto y1 = std::make_shared<std::vector<double>>();
        auto y2 = std::make_shared<std::vector<double>>();
        auto u1 = std::make_shared<double>(1.0);
        auto u2 = std::make_shared<double>(1.0);
        auto embed_check = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--in", *in, "JSON with fields g1, g2");
        cmd->add_option("--y1", *y1, "center of the first state");
        cmd->add_option("--y2", *y2, "center of the second state");
        cmd->add_option("--u1", *u1, "isotropic precision of the first state");
        cmd->add_option("--u2", *u2, "isotropic precision of the second state");
        cmd->add_flag("--embed-check", *embed_check,
                      "cross-check against the quadrature embedding");
        cmd->add_option("--out", *out);
        cmd->callback([=, &action]() {
            action = [=]() {
                GaussianState g1 = GaussianState::translate(Eigen::VectorXd::Zero(1));
                GaussianState g2 = g1;
                if (!in->empty()) {
                    const auto j = load_json(*in);
                    if (!j.contains("g1") || !j.contains("g2")) {
                        throw UsageError("expected fields g1 and g2 in " + *in);
                    }
                    g1 = gaussian_from_json(j["g1"]);
                    g2 = gaussian_from_json(j["g2"]);
                } else {
                    if (y1->empty() || y2->empty() || y1->size() != y2->size()) {
                        throw UsageError("provide --in or matching --y1/--y2 lists");
                    }
                    const int n = static_cast<int>(y1->size());
                    Eigen::VectorXd v1(n), v2(n);
                    for (int i = 0; i < n; ++i) {
                        v1[i] = (*y1)[static_cast<std::size_t>(i)];
                        v2[i] = (*y2)[static_cast<std::size_t>(i)];
                    }
                    g1 = GaussianState(v1, *u1 * Eigen::MatrixXd::Identity(n, n));
                    g2 = GaussianState(v2, *u2 * Eigen::MatrixXd::Identity(n, n));
                }
                const double overlap = gaussian_overlap(g1, g2);
                Json values{{"overlap", overlap}};
                bool ok = true;
                if (*embed_check) {
                    if (g1.n() > 2) throw UsageError("--embed-check supports N <= 2");
                    const auto grid = auto_grid({g1, g2}, g1.n() == 1 ? 2048 : 512);
                    const double embedded =
                        inner(embed_gaussian(g1, grid), embed_gaussian(g2, grid)).real();
                    const double gap = std::abs(embedded - overlap);
                    values["embedded"] = embedded;
                    values["gap"] = gap;
                    ok = gap <= 1e-8;
                }
                return finish("gaussian-overlap", ok,
                              ok ? Json(nullptr) : values, values,
                              Json{{"in", *in}, {"embed_check", *embed_check}}, *out);
            };
        });
    }

    // ---- gaussian-npm ----
    {
        auto* cmd = app.add_subcommand(
            "gaussian-npm", "null-phase and isotropy checks of a Gaussian family");
        auto n = std::make_shared<int>(1);
        auto points = std::make_shared<int>(5);
        auto spacing = std::make_shared<double>(0.5);
        auto general = std::make_shared<bool>(false);
        auto tol = std::make_shared<double>(1e-10);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--n", *n, "spatial dimension")->check(CLI::Range(1, 3));
        cmd->add_option("--points", *points, "grid points per axis")->check(CLI::Range(2, 21));
        cmd->add_option("--spacing", *spacing);
        cmd->add_flag("--general", *general, "vary the covariance as well (N = 1)");
        cmd->add_option("--tol", *tol);
        cmd->add_option("--out", *out);
        cmd->callback([=, &action]() {
            action = [=]() {
                GramChart chart;
                if (*general) {
                    if (*n != 1) throw UsageError("--general supports --n 1");
                    std::vector<Eigen::VectorXd> ys;
                    std::vector<Eigen::MatrixXd> Us;
                    for (int i = 0; i < *points; ++i) {
                        Eigen::VectorXd y(1);
                        y << *spacing * (i - (*points - 1) / 2.0);
                        ys.push_back(y);
                        Eigen::MatrixXd U(1, 1);
                        U << 0.6 + 0.4 * i;
                        Us.push_back(U);
                    }
                    chart = gaussian_chart(ys, Us);
                } else {
                    std::vector<double> axis;
                    for (int i = 0; i < *points; ++i) {
                        axis.push_back(*spacing * (i - (*points - 1) / 2.0));
                    }
                    chart = gaussian_translate_chart(
                        std::vector<std::vector<double>>(static_cast<std::size_t>(*n), axis));
                }
                const auto npm = is_npm(chart, *tol);
                const auto iso = isotropy_check(chart);
                const bool ok = npm.ok && iso.ok;
                return finish(
                    "gaussian-npm", ok,
                    ok ? Json(nullptr)
                       : Json{{"npm", report_to_json(npm)}, {"isotropy", report_to_json(iso)}},
                    Json{{"npm", report_to_json(npm)},
                         {"isotropy", report_to_json(iso)},
                         {"family_param_count", chart.family_param_count}},
                    Json{{"n", *n},
                         {"points", *points},
                         {"spacing", *spacing},
                         {"general", *general}},
                    *out);
            };
        });
    }

    // ---- suite ----
    {
        auto* cmd = app.add_subcommand("suite", "run the full verification suite");
        auto out = std::make_shared<std::string>();
        auto quiet = std::make_shared<bool>(false);
        cmd->add_option("--out", *out, "write the JSON summary here");
        cmd->add_flag("--quiet", *quiet, "suppress per-criterion progress lines");
        cmd->callback([=, &action]() {
            action = [=]() {
                const auto results = run_suite(*quiet ? nullptr : &std::cout);
                Json arr = Json::array();
                for (const auto& r : results) {
                    arr.push_back(Json{{"id", r.id},
                                       {"name", r.name},
                                       {"ok", r.ok},
                                       {"detail", r.detail},
                                       {"seconds", r.seconds}});
                }
                const bool ok = suite_ok(results);
                if (!out->empty()) {
                    emit(envelope("suite", ok, nullptr, Json{{"criteria", arr}}, Json{}),
                         *out);
                }
                return ok ? 0 : 1;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return action();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const Error& e) {
        // domain-level check failure: report with the witness message
        emit(envelope(app.get_subcommands().front()->get_name(), false,
                      Json{{"error", e.what()}}, Json{}, Json{}),
             "");
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << std::endl;
        return 2;
    }
}
