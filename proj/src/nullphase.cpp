#include "raygeo/nullphase.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "raygeo/nnls.hpp"

namespace raygeo {

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Triple positivity scan shared by is_npc / is_npm.

struct OverlapSource {
    std::function<Complex(Index, Index)> at;
    Index n;
};

double triple_score(const Complex& d) {
    const double mod = std::abs(d);
    return mod > 0.0 ? std::abs(d.imag()) / mod : 1.0;
}

NpcReport triple_scan(const OverlapSource& src, double tol,
                      const TripleScanOptions& opts, const Tolerances& tols) {
    NpcReport report;
    report.tol = tol;
    const Index n = src.n;
    if (n < 3) {
        // Fewer than three nodes cannot violate triple positivity.
        report.exhaustive = true;
        return report;
    }

    auto check_triple = [&](Index i, Index j, Index k) {
        const Complex gij = src.at(i, j);
        const Complex gjk = src.at(j, k);
        const Complex gki = src.at(k, i);
        const Index pairs[3][2] = {{i, j}, {j, k}, {k, i}};
        const Complex links[3] = {gij, gjk, gki};
        for (int t = 0; t < 3; ++t) {
            if (std::abs(links[t]) <= tols.ortho_eps) {
                report.ok = false;
                if (!report.orthogonal_pair) {
                    report.orthogonal_pair = std::make_pair(pairs[t][0], pairs[t][1]);
                }
                return;
            }
        }
        const Complex d = gij * gjk * gki;
        const double ratio = triple_score(d);
        const bool positive = d.real() > 0.0;
        const bool bad = !positive || ratio > tol;
        const bool worse = (!positive && report.worst.positive) ||
                           (positive == report.worst.positive && ratio > report.worst.imag_ratio);
        if (worse) {
            report.worst = TripleWitness{i, j, k, d, ratio, positive};
        }
        if (bad) report.ok = false;
        ++report.triples_checked;
    };

    if (static_cast<std::size_t>(n) <= opts.exhaustive_limit) {
        report.exhaustive = true;
        for (Index i = 0; i < n && !report.orthogonal_pair; ++i) {
            for (Index j = i + 1; j < n && !report.orthogonal_pair; ++j) {
                for (Index k = j + 1; k < n && !report.orthogonal_pair; ++k) {
                    check_triple(i, j, k);
                }
            }
        }
    } else {
        report.exhaustive = false;
        std::mt19937_64 rng(opts.seed);
        std::uniform_int_distribution<Index> pick(0, n - 1);
        std::size_t drawn = 0;
        while (drawn < opts.min_triples && !report.orthogonal_pair) {
            Index i = pick(rng), j = pick(rng), k = pick(rng);
            if (i == j || j == k || i == k) continue;
            check_triple(i, j, k);
            ++drawn;
        }
    }
    return report;
}

// Three-point finite-difference stencil along one axis of a chart.
// Returns the node offsets (in multi-index space) and weights.
struct Stencil {
    Index offsets[3];  // relative steps along the axis (-1/0/+1 style)
    double weights[3];
};

Stencil fd3(Index pos, Index extent, double h_lo, double h_hi) {
    // h_lo: step from pos-1 to pos, h_hi: step from pos to pos+1 (when present)
    if (pos == 0) {
        const double h1 = h_hi, h2 = h_lo;  // h_lo reused as next step for edge
        return Stencil{{0, 1, 2},
                       {-(2.0 * h1 + h2) / (h1 * (h1 + h2)),
                        (h1 + h2) / (h1 * h2),
                        -h1 / (h2 * (h1 + h2))}};
    }
    if (pos == extent - 1) {
        const double h1 = h_lo, h2 = h_hi;
        return Stencil{{-2, -1, 0},
                       {h2 / (h1 * (h1 + h2)),
                        -(h1 + h2) / (h1 * h2),
                        (h1 + 2.0 * h2) / (h2 * (h1 + h2))}};
    }
    const double h1 = h_lo, h2 = h_hi;
    return Stencil{{-1, 0, 1},
                   {-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2),
                    h1 / (h2 * (h1 + h2))}};
}

// Axis steps around a node, as needed by fd3.
void axis_spacing(const ChartedManifold& m, const std::vector<Index>& multi,
                  int axis, double* h_lo, double* h_hi) {
    const Index extent = m.shape()[static_cast<std::size_t>(axis)];
    const Index pos = multi[static_cast<std::size_t>(axis)];
    auto param_at = [&](Index p) {
        std::vector<Index> mm = multi;
        mm[static_cast<std::size_t>(axis)] = p;
        return m.param(m.flat_index(mm))[static_cast<std::size_t>(axis)];
    };
    if (pos == 0) {
        *h_lo = param_at(2) - param_at(1);  // reused as the far step
        *h_hi = param_at(1) - param_at(0);
    } else if (pos == extent - 1) {
        *h_lo = param_at(pos - 1) - param_at(pos - 2);
        *h_hi = param_at(pos) - param_at(pos - 1);
    } else {
        *h_lo = param_at(pos) - param_at(pos - 1);
        *h_hi = param_at(pos + 1) - param_at(pos);
    }
}

Vector chart_tangent(const ChartedManifold& m, const std::vector<Index>& multi,
                     int axis) {
    const Index extent = m.shape()[static_cast<std::size_t>(axis)];
    if (extent < 3) throw SpecError("chart tangent: axis needs >= 3 nodes");
    double h_lo, h_hi;
    axis_spacing(m, multi, axis, &h_lo, &h_hi);
    const Stencil st = fd3(multi[static_cast<std::size_t>(axis)], extent, h_lo, h_hi);
    Vector t = Vector::Zero(m.state(0).dim());
    for (int p = 0; p < 3; ++p) {
        std::vector<Index> mm = multi;
        mm[static_cast<std::size_t>(axis)] += st.offsets[p];
        t += st.weights[p] * m.state(m.flat_index(mm)).amplitudes();
    }
    return t;
}

// Horizontal-corrected Im(u, v) at psi: Im[(u, v) - conj((psi,u)) (psi,v)].
double omega_value(const Vector& psi, const Vector& u, const Vector& v) {
    const Complex uv = u.dot(v);
    const Complex pu = psi.dot(u);
    const Complex pv = psi.dot(v);
    return 2.0 * (uv - std::conj(pu) * pv).imag();
}

bool is_interior(const std::vector<Index>& multi, const std::vector<Index>& shape) {
    for (std::size_t k = 0; k < multi.size(); ++k) {
        if (multi[k] == 0 || multi[k] == shape[k] - 1) return false;
    }
    return true;
}

}  // namespace

NpcReport is_npc(const SampledCurve& curve, double tol,
                 const TripleScanOptions& opts, const Tolerances& tols) {
    // Precompute the Gram matrix when it fits comfortably.
    const Index n = static_cast<Index>(curve.size());
    if (n <= 1500) {
        Eigen::MatrixXcd g(n, n);
        for (Index i = 0; i < n; ++i) {
            g(i, i) = Complex(1.0, 0.0);
            for (Index j = i + 1; j < n; ++j) {
                g(i, j) = inner(curve.state(static_cast<std::size_t>(i)),
                                curve.state(static_cast<std::size_t>(j)));
                g(j, i) = std::conj(g(i, j));
            }
        }
        return triple_scan({[g](Index i, Index j) { return g(i, j); }, n}, tol, opts, tols);
    }
    return triple_scan({[&curve](Index i, Index j) {
                            return inner(curve.state(static_cast<std::size_t>(i)),
                                         curve.state(static_cast<std::size_t>(j)));
                        },
                        n},
                       tol, opts, tols);
}

NpcReport is_npm(const ChartedManifold& chart, double tol,
                 const TripleScanOptions& opts, const Tolerances& tols) {
    const Index n = chart.node_count();
    if (n <= 1500) {
        const Eigen::MatrixXcd g = chart_gram(chart);
        return triple_scan({[g](Index i, Index j) { return g(i, j); }, n}, tol, opts, tols);
    }
    return triple_scan({[&chart](Index i, Index j) {
                            return inner(chart.state(i), chart.state(j));
                        },
                        n},
                       tol, opts, tols);
}

NpcReport is_npm(const GramChart& chart, double tol, const TripleScanOptions& opts,
                 const Tolerances& tols) {
    return triple_scan({[&chart](Index i, Index j) { return chart.gram(i, j); },
                        chart.node_count()},
                       tol, opts, tols);
}

// ---------------------------------------------------------------------------
// NPC generators.

SphereTrajectory::SphereTrajectory(std::vector<double> params,
                                   std::vector<Eigen::VectorXd> samples,
                                   std::vector<StateVector> basis,
                                   const Tolerances& tol)
    : params_(std::move(params)), samples_(std::move(samples)), basis_(std::move(basis)) {
    (void)tol;
    const std::size_t n = samples_.size();
    if (n < 2) throw MeshError("SphereTrajectory: needs at least 2 samples");
    if (params_.size() != n) throw MeshError("SphereTrajectory: params/samples mismatch");
    const int m = static_cast<int>(basis_.size());
    if (m < 2) throw DimensionError("SphereTrajectory: basis needs m >= 2 vectors");
    for (const auto& x : samples_) {
        if (x.size() != m) throw DimensionError("SphereTrajectory: sample arity != m");
        if (std::abs(x.norm() - 1.0) > 1e-12) {
            throw InvariantError("SphereTrajectory: sample not unit-norm");
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(params_[i] < params_[i + 1])) {
            throw MeshError("SphereTrajectory: params not strictly increasing");
        }
    }
    // Orthonormal basis of ambient states.
    for (std::size_t a = 0; a < basis_.size(); ++a) {
        for (std::size_t b = a; b < basis_.size(); ++b) {
            const Complex g = inner(basis_[a], basis_[b]);
            const Complex want = (a == b) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
            if (std::abs(g - want) > 1e-10) {
                throw SpecError("SphereTrajectory: basis not orthonormal");
            }
        }
    }
    // Pairwise positivity of the real samples (the NPC condition itself).
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (samples_[i].dot(samples_[j]) <= 0.0) {
                throw PositivityError(
                    "SphereTrajectory: samples " + std::to_string(i) + " and " +
                        std::to_string(j) + " meet at angle >= pi/2",
                    static_cast<std::ptrdiff_t>(i), static_cast<std::ptrdiff_t>(j));
            }
        }
    }
}

SphereTrajectory bulge_trajectory(int m, double theta0, double bulge,
                                  std::size_t mesh, std::vector<StateVector> basis,
                                  const Tolerances& tol) {
    if (m < 2) throw DimensionError("bulge_trajectory: m >= 2 required");
    if (!(theta0 > 0.0 && theta0 < kPi)) throw SpecError("bulge_trajectory: theta0 outside (0, pi)");
    if (mesh < 2) throw MeshError("bulge_trajectory: mesh >= 2 required");
    if (m == 2 && bulge != 0.0) bulge = 0.0;  // nothing to bulge into
    std::vector<double> params(mesh);
    std::vector<Eigen::VectorXd> samples;
    samples.reserve(mesh);
    const double spread = (m > 2) ? bulge / std::sqrt(static_cast<double>(m - 2)) : 0.0;
    for (std::size_t i = 0; i < mesh; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(mesh - 1);
        params[i] = t;
        Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
        y[0] = std::cos(theta0 * t);
        y[1] = std::sin(theta0 * t);
        const double lift = spread * std::sin(kPi * t);
        for (int r = 2; r < m; ++r) y[r] = lift;
        if (i == 0 || i + 1 == mesh) {
            // pin the endpoints exactly
            for (int r = 2; r < m; ++r) y[r] = 0.0;
        }
        samples.push_back(y / y.norm());
    }
    return SphereTrajectory(std::move(params), std::move(samples), std::move(basis), tol);
}

SampledCurve npc_from_sphere_path(const SphereTrajectory& traj, const Tolerances& tol) {
    const auto& xs = traj.samples();
    const int m = traj.m();
    // Endpoint form checks: x(s1) = e1, x(s2) in the 1-2 plane with x2 > 0.
    const Eigen::VectorXd& x1 = xs.front();
    const Eigen::VectorXd& x2 = xs.back();
    if (std::abs(x1[0] - 1.0) > 1e-9 || x1.tail(m - 1).norm() > 1e-9) {
        throw SpecError("npc_from_sphere_path: start must be (1, 0, ...)");
    }
    if (x2[1] <= 1e-12 || (m > 2 && x2.tail(m - 2).norm() > 1e-9)) {
        throw SpecError("npc_from_sphere_path: end must be (cos t0, sin t0, 0, ...)");
    }
    const Index dim = traj.basis().front().dim();
    std::vector<StateVector> states;
    states.reserve(xs.size());
    for (const auto& x : xs) {
        Vector v = Vector::Zero(dim);
        for (int r = 0; r < m; ++r) {
            v += x[r] * traj.basis()[static_cast<std::size_t>(r)].amplitudes();
        }
        states.push_back(normalize(v, tol));
    }
    return SampledCurve(traj.params(), std::move(states), tol);
}

void GeneralNPCSpec::validate(const Tolerances& tol) const {
    (void)tol;
    const std::size_t n = params.size();
    if (n < 2) throw MeshError("GeneralNPCSpec: needs at least 2 samples");
    if (sigma.size() != n || theta.size() != n || chi_coeffs.size() != n) {
        throw MeshError("GeneralNPCSpec: field lengths disagree");
    }
    if (!(theta0 > 0.0 && theta0 < kPi)) throw SpecError("GeneralNPCSpec: theta0 outside (0, pi)");
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(params[i] < params[i + 1])) throw MeshError("GeneralNPCSpec: params not increasing");
    }
    const double slack = 1e-10;
    if (std::abs(sigma.front() - 1.0) > slack || std::abs(sigma.back() - 1.0) > slack) {
        throw SpecError("GeneralNPCSpec: sigma must equal 1 at both endpoints");
    }
    if (std::abs(theta.front()) > slack || std::abs(theta.back() - theta0) > slack) {
        throw SpecError("GeneralNPCSpec: theta must run from 0 to theta0");
    }
    const Eigen::Index q = chi_coeffs.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        if (chi_coeffs[i].size() != q) throw MeshError("GeneralNPCSpec: chi arity varies");
        if (!(sigma[i] > 0.0 && sigma[i] <= 1.0 + slack)) {
            throw SpecError("GeneralNPCSpec: sigma outside (0, 1] at node " + std::to_string(i));
        }
        if (!(theta[i] > -kPi / 2.0 + theta0 - slack && theta[i] < kPi / 2.0 + slack)) {
            throw SpecError("GeneralNPCSpec: theta outside range at node " + std::to_string(i));
        }
        const double want = 1.0 - sigma[i] * sigma[i];
        if (std::abs(chi_coeffs[i].squaredNorm() - want) > slack) {
            throw SpecError("GeneralNPCSpec: |chi|^2 != 1 - sigma^2 at node " + std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double overlap = sigma[i] * sigma[j] * std::cos(theta[j] - theta[i]) +
                                   chi_coeffs[i].dot(chi_coeffs[j]);
            if (overlap <= 0.0) {
                throw PositivityError(
                    "GeneralNPCSpec: pairwise positivity fails at (" + std::to_string(i) +
                        ", " + std::to_string(j) + ")",
                    static_cast<std::ptrdiff_t>(i), static_cast<std::ptrdiff_t>(j));
            }
        }
    }
}

SampledCurve npc_general(const GeneralNPCSpec& spec,
                         const std::vector<StateVector>& basis, const Tolerances& tol) {
    spec.validate(tol);
    const Eigen::Index q = spec.chi_coeffs.front().size();
    if (static_cast<Eigen::Index>(basis.size()) != 2 + q) {
        throw DimensionError("npc_general: basis must supply 2 + " + std::to_string(q) +
                             " vectors");
    }
    for (std::size_t a = 0; a < basis.size(); ++a) {
        for (std::size_t b = a; b < basis.size(); ++b) {
            const Complex g = inner(basis[a], basis[b]);
            const Complex want = (a == b) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
            if (std::abs(g - want) > 1e-10) throw SpecError("npc_general: basis not orthonormal");
        }
    }
    const Index dim = basis.front().dim();
    std::vector<StateVector> states;
    states.reserve(spec.params.size());
    for (std::size_t i = 0; i < spec.params.size(); ++i) {
        Vector v = spec.sigma[i] * std::cos(spec.theta[i]) * basis[0].amplitudes() +
                   spec.sigma[i] * std::sin(spec.theta[i]) * basis[1].amplitudes();
        for (Eigen::Index r = 0; r < q; ++r) {
            v += spec.chi_coeffs[i][r] * basis[static_cast<std::size_t>(2 + r)].amplitudes();
        }
        if (v.size() != dim) throw DimensionError("npc_general: dim drift");
        states.push_back(normalize(v, tol));
    }
    return SampledCurve(spec.params, std::move(states), tol);
}

SampledCurve npc_between(const Ray& r1, const Ray& r2, std::size_t mesh, double bulge,
                         std::uint64_t seed, int extra_dims, const Tolerances& tol) {
    const auto [psi1, psi2] = in_phase_endpoints(r1, r2, tol);
    const double c = inner(psi1, psi2).real();
    const double theta0 = std::acos(std::clamp(c, -1.0, 1.0));
    const Index dim = psi1.dim();

    std::vector<StateVector> basis;
    basis.push_back(psi1);
    basis.push_back(normalize(psi2.amplitudes() - c * psi1.amplitudes(), tol));
    const int extras = std::min<int>(extra_dims, static_cast<int>(dim) - 2);
    std::mt19937_64 rng(seed);
    int built = 0;
    int attempts = 0;
    while (built < extras && attempts++ < 64) {
        Vector v(dim);
        for (Index i = 0; i < dim; ++i) {
            v[i] = Complex(standard_normal(rng), standard_normal(rng));
        }
        for (const auto& e : basis) {
            v -= e.amplitudes().dot(v) * e.amplitudes();
        }
        if (v.norm() < 1e-6) continue;
        basis.push_back(normalize(v, tol));
        ++built;
    }
    return npc_from_sphere_path(
        bulge_trajectory(static_cast<int>(basis.size()), theta0, bulge, mesh, basis, tol),
        tol);
}

// ---------------------------------------------------------------------------
// Symplectic structure.

double symplectic_form(const StateVector& psi, const TangentVector& u,
                       const TangentVector& v, const Tolerances& /*tol*/) {
    if (u.base.dim() != psi.dim() || v.base.dim() != psi.dim()) {
        throw BaseError("symplectic_form: dimension mismatch");
    }
    if ((u.base.amplitudes() - psi.amplitudes()).norm() > 1e-12 ||
        (v.base.amplitudes() - psi.amplitudes()).norm() > 1e-12) {
        throw BaseError("symplectic_form: tangents not based at psi");
    }
    return omega_value(psi.amplitudes(), u.direction, v.direction);
}

double surface_omega_integral(const ChartedManifold& chart, const Tolerances& /*tol*/) {
    if (chart.d() != 2) throw SpecError("surface_omega_integral: chart must have d = 2");
    const Index nu = chart.shape()[0], nv = chart.shape()[1];
    if (nu < 3 || nv < 3) throw SpecError("surface_omega_integral: grid too coarse");

    // Trapezoid weights along one axis read off the node params.
    auto axis_weight = [&](const std::vector<Index>& multi, int axis) {
        const Index pos = multi[static_cast<std::size_t>(axis)];
        const Index extent = chart.shape()[static_cast<std::size_t>(axis)];
        auto param_at = [&](Index p) {
            std::vector<Index> mm = multi;
            mm[static_cast<std::size_t>(axis)] = p;
            return chart.param(chart.flat_index(mm))[static_cast<std::size_t>(axis)];
        };
        if (pos == 0) return 0.5 * (param_at(1) - param_at(0));
        if (pos == extent - 1) return 0.5 * (param_at(pos) - param_at(pos - 1));
        return 0.5 * (param_at(pos + 1) - param_at(pos - 1));
    };

    double integral = 0.0;
    for (Index flat = 0; flat < chart.node_count(); ++flat) {
        const auto multi = chart.multi_index(flat);
        const Vector tu = chart_tangent(chart, multi, 0);
        const Vector tv = chart_tangent(chart, multi, 1);
        const double w = axis_weight(multi, 0) * axis_weight(multi, 1);
        integral += w * omega_value(chart.state(flat).amplitudes(), tu, tv);
    }
    return integral;
}

namespace {

IsotropyReport isotropy_core(
    const std::vector<Index>& shape, int d,
    const std::function<double(const std::vector<Index>&, int, int)>& omega_at,
    const std::function<double(const std::vector<Index>&, int)>& step_at,
    double tol) {
    IsotropyReport report;
    if (d < 2) {
        report.ok = true;
        report.tol_used = tol;
        return report;
    }
    Index total = 1;
    for (Index n : shape) total *= n;

    double hmax = 0.0;
    std::vector<Index> multi(static_cast<std::size_t>(d), 0);
    for (Index flat = 0; flat < total; ++flat) {
        if (is_interior(multi, shape)) {
            for (int a = 0; a < d; ++a) hmax = std::max(hmax, std::abs(step_at(multi, a)));
        }
        for (std::size_t k = static_cast<std::size_t>(d); k-- > 0;) {
            if (++multi[k] < shape[k]) break;
            multi[k] = 0;
        }
    }
    if (tol < 0.0) tol = 10.0 * hmax * hmax;
    report.tol_used = tol;

    std::fill(multi.begin(), multi.end(), 0);
    for (Index flat = 0; flat < total; ++flat) {
        if (is_interior(multi, shape)) {
            ++report.points_checked;
            for (int a = 0; a < d; ++a) {
                for (int b = a + 1; b < d; ++b) {
                    const double w = std::abs(omega_at(multi, a, b));
                    if (w > report.max_abs_omega) {
                        report.max_abs_omega = w;
                        report.node = flat;
                        report.axis_u = a;
                        report.axis_v = b;
                    }
                }
            }
        }
        for (std::size_t k = static_cast<std::size_t>(d); k-- > 0;) {
            if (++multi[k] < shape[k]) break;
            multi[k] = 0;
        }
    }
    report.ok = report.max_abs_omega <= tol;
    return report;
}

}  // namespace

IsotropyReport isotropy_check(const ChartedManifold& chart, double tol,
                              const Tolerances& /*tols*/) {
    if (chart.d() >= 2) {
        for (Index n : chart.shape()) {
            if (n < 3) throw SpecError("isotropy_check: every axis needs >= 3 nodes");
        }
    }
    auto omega_at = [&](const std::vector<Index>& multi, int a, int b) {
        const Vector tu = chart_tangent(chart, multi, a);
        const Vector tv = chart_tangent(chart, multi, b);
        return omega_value(chart.state(chart.flat_index(multi)).amplitudes(), tu, tv);
    };
    auto step_at = [&](const std::vector<Index>& multi, int a) {
        return chart.axis_step(multi, a);
    };
    return isotropy_core(chart.shape(), chart.d(), omega_at, step_at, tol);
}

IsotropyReport isotropy_check(const GramChart& chart, double tol,
                              const Tolerances& /*tols*/) {
    const int d = static_cast<int>(chart.shape.size());
    if (d >= 2) {
        for (Index n : chart.shape) {
            if (n < 3) throw SpecError("isotropy_check: every axis needs >= 3 nodes");
        }
    }
    // Flat index helpers over the gram chart's grid.
    auto flat_index = [&](const std::vector<Index>& multi) {
        Index flat = 0;
        for (std::size_t k = 0; k < chart.shape.size(); ++k) flat = flat * chart.shape[k] + multi[k];
        return flat;
    };
    auto param_axis = [&](const std::vector<Index>& multi, int axis, Index p) {
        std::vector<Index> mm = multi;
        mm[static_cast<std::size_t>(axis)] = p;
        return chart.params[static_cast<std::size_t>(flat_index(mm))][static_cast<std::size_t>(axis)];
    };
    auto stencil_for = [&](const std::vector<Index>& multi, int axis) {
        const Index extent = chart.shape[static_cast<std::size_t>(axis)];
        const Index pos = multi[static_cast<std::size_t>(axis)];
        double h_lo, h_hi;
        if (pos == 0) {
            h_lo = param_axis(multi, axis, 2) - param_axis(multi, axis, 1);
            h_hi = param_axis(multi, axis, 1) - param_axis(multi, axis, 0);
        } else if (pos == extent - 1) {
            h_lo = param_axis(multi, axis, pos - 1) - param_axis(multi, axis, pos - 2);
            h_hi = param_axis(multi, axis, pos) - param_axis(multi, axis, pos - 1);
        } else {
            h_lo = param_axis(multi, axis, pos) - param_axis(multi, axis, pos - 1);
            h_hi = param_axis(multi, axis, pos + 1) - param_axis(multi, axis, pos);
        }
        return fd3(pos, extent, h_lo, h_hi);
    };
    auto omega_at = [&](const std::vector<Index>& multi, int a, int b) {
        const Stencil sa = stencil_for(multi, a);
        const Stencil sb = stencil_for(multi, b);
        const Index center = flat_index(multi);
        Index ia[3], ib[3];
        for (int p = 0; p < 3; ++p) {
            std::vector<Index> mm = multi;
            mm[static_cast<std::size_t>(a)] += sa.offsets[p];
            ia[p] = flat_index(mm);
            mm = multi;
            mm[static_cast<std::size_t>(b)] += sb.offsets[p];
            ib[p] = flat_index(mm);
        }
        Complex uv(0, 0), pu(0, 0), pv(0, 0);
        for (int p = 0; p < 3; ++p) {
            pu += sa.weights[p] * chart.gram(center, ia[p]);
            pv += sb.weights[p] * chart.gram(center, ib[p]);
            for (int q = 0; q < 3; ++q) {
                uv += sa.weights[p] * sb.weights[q] * chart.gram(ia[p], ib[q]);
            }
        }
        return 2.0 * (uv - std::conj(pu) * pv).imag();
    };
    auto step_at = [&](const std::vector<Index>& multi, int a) {
        const Index pos = multi[static_cast<std::size_t>(a)];
        if (pos + 1 < chart.shape[static_cast<std::size_t>(a)]) {
            return param_axis(multi, a, pos + 1) - param_axis(multi, a, pos);
        }
        return param_axis(multi, a, pos) - param_axis(multi, a, pos - 1);
    };
    return isotropy_core(chart.shape, d, omega_at, step_at, tol);
}

// ---------------------------------------------------------------------------
// Totally geodesic checks and hulls.

TgReport totally_geodesic_check(const std::vector<StateVector>& points,
                                const MembershipOracle& membership,
                                std::size_t pairs, std::uint64_t seed,
                                int interior_samples, const Tolerances& tol) {
    if (points.size() < 2) throw MeshError("totally_geodesic_check: needs >= 2 points");
    if (pairs < 1) throw MeshError("totally_geodesic_check: pairs >= 1 required");
    TgReport report;
    report.interior_samples = interior_samples;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    std::size_t done = 0;
    std::size_t attempts = 0;
    while (done < pairs && attempts++ < pairs * 64) {
        const std::size_t a = pick(rng), b = pick(rng);
        if (a == b) continue;
        const Ray ra(points[a], tol), rb(points[b], tol);
        const double fid = fidelity(ra, rb);
        if (fid <= tol.ortho_eps * tol.ortho_eps || fid >= 1.0 - tol.tol_fid) continue;
        const auto [p1, p2] = in_phase_endpoints(ra, rb, tol);
        const double s_star = geodesic_angle(p1, p2, tol);
        for (int k = 1; k <= interior_samples; ++k) {
            const double f = static_cast<double>(k) / static_cast<double>(interior_samples + 1);
            const StateVector point = geodesic_point(p1, p2, f * s_star, tol);
            if (!membership(point)) {
                report.ok = false;
                report.failure = TgFailure{static_cast<Index>(a), static_cast<Index>(b), k, f};
                report.pairs_checked = done + 1;
                return report;
            }
        }
        ++done;
    }
    report.pairs_checked = done;
    return report;
}

TgReport totally_geodesic_check(const ChartedManifold& chart,
                                const MembershipOracle& membership,
                                std::size_t pairs, std::uint64_t seed,
                                int interior_samples, const Tolerances& tol) {
    return totally_geodesic_check(chart.states(), membership, pairs, seed,
                                  interior_samples, tol);
}

HullModel::HullModel(std::vector<StateVector> anchors, double membership_tol,
                     const Tolerances& tol)
    : anchors_(std::move(anchors)), membership_tol_(membership_tol) {
    if (anchors_.empty()) throw MeshError("HullModel: no anchors");
    const Index k = static_cast<Index>(anchors_.size());
    const Index dim = anchors_.front().dim();
    gram_.resize(k, k);
    for (Index a = 0; a < k; ++a) {
        if (anchors_[static_cast<std::size_t>(a)].dim() != dim) {
            throw DimensionError("HullModel: mixed anchor dims");
        }
        for (Index b = a; b < k; ++b) {
            const Complex g = inner(anchors_[static_cast<std::size_t>(a)],
                                    anchors_[static_cast<std::size_t>(b)]);
            if (std::abs(g.imag()) > 1e-10 || g.real() < -1e-10) {
                throw PhaseError("HullModel: anchors (" + std::to_string(a) + ", " +
                                 std::to_string(b) + ") are not in phase: overlap " +
                                 std::to_string(g.real()) + " + " +
                                 std::to_string(g.imag()) + "i");
            }
            gram_(a, b) = gram_(b, a) = g.real();
        }
    }
    (void)tol;
}

HullModel hull_extend(const std::vector<StateVector>& anchors, double membership_tol,
                      const Tolerances& tol) {
    return HullModel(anchors, membership_tol, tol);
}

HullMembershipReport hull_membership(const HullModel& hull, const StateVector& psi,
                                     double tol, const Tolerances& tols) {
    if (psi.dim() != hull.dim()) throw DimensionError("hull_membership: dimension mismatch");
    if (tol < 0.0) tol = hull.membership_tol();
    const Index k = static_cast<Index>(hull.anchors().size());
    const Index dim = hull.dim();

    Eigen::VectorXcd overlaps(k);  // (anchor_j, psi)
    for (Index j = 0; j < k; ++j) {
        overlaps[j] = inner(hull.anchors()[static_cast<std::size_t>(j)], psi);
    }
    // Optimal global phase from the unconstrained anchor-span projection:
    // for a cone member e^{ia} sum_j p_j psi_j the projection coefficients
    // are c = e^{ia} p, so their weighted sum carries the phase to undo.
    // The raw overlap (psi, P) is identically real and carries none.
    const Eigen::VectorXcd coeff =
        hull.gram().cast<Complex>().colPivHouseholderQr().solve(overlaps);
    const Complex coeff_sum = coeff.sum();
    double phase = (std::abs(coeff_sum) > tols.zero_eps) ? -std::arg(coeff_sum) : 0.0;

    Eigen::MatrixXd A(2 * dim, k);
    for (Index j = 0; j < k; ++j) {
        const Vector& a = hull.anchors()[static_cast<std::size_t>(j)].amplitudes();
        A.col(j).head(dim) = a.real();
        A.col(j).tail(dim) = a.imag();
    }
    auto solve_at = [&](double phi) {
        Eigen::VectorXd rhs(2 * dim);
        const Vector target = std::exp(Complex(0.0, phi)) * psi.amplitudes();
        rhs.head(dim) = target.real();
        rhs.tail(dim) = target.imag();
        Eigen::VectorXd p = nnls(A, rhs);
        const double r = (A * p - rhs).norm();
        return std::make_pair(std::move(p), r);
    };
    auto [p, residual] = solve_at(phase);
    // One re-alignment pass: given p >= 0 the best phase closes the angle
    // to the cone point sum_j p_j psi_j.
    Complex along(0.0, 0.0);
    for (Index j = 0; j < k; ++j) along += overlaps[j] * p[j];
    if (std::abs(along) > tols.zero_eps) {
        const double refined = -std::arg(along);
        auto [p2, r2] = solve_at(refined);
        if (r2 < residual) {
            p = std::move(p2);
            residual = r2;
            phase = refined;
        }
    }

    HullMembershipReport report;
    report.phase = phase;
    report.coefficients = std::move(p);
    report.residual = residual;
    report.member = report.residual <= tol;
    return report;
}

StateVector hull_point(const HullModel& hull, const Eigen::VectorXd& p,
                       const Tolerances& tol) {
    if (p.size() != static_cast<Index>(hull.anchors().size())) {
        throw DimensionError("hull_point: coefficient arity mismatch");
    }
    if (p.minCoeff() < 0.0) throw SpecError("hull_point: coefficients must be >= 0");
    Vector v = Vector::Zero(hull.dim());
    for (Index j = 0; j < p.size(); ++j) {
        v += p[j] * hull.anchors()[static_cast<std::size_t>(j)].amplitudes();
    }
    return normalize(v, tol);  // throws ZeroVectorError when all coefficients vanish
}

ChartedManifold hull_sample_chart(const HullModel& hull, Index nodes_per_axis,
                                  std::uint64_t seed, const Tolerances& tol) {
    if (nodes_per_axis < 3) throw MeshError("hull_sample_chart: needs >= 3 nodes per axis");
    const Index k = static_cast<Index>(hull.anchors().size());
    std::mt19937_64 rng(seed);
    auto corner = [&]() {
        Eigen::VectorXd w(k);
        for (Index j = 0; j < k; ++j) {
            w[j] = 0.2 + 0.8 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        }
        return w;
    };
    const Eigen::VectorXd w00 = corner(), w01 = corner(), w10 = corner(), w11 = corner();
    std::vector<double> axis(static_cast<std::size_t>(nodes_per_axis));
    for (Index i = 0; i < nodes_per_axis; ++i) {
        axis[static_cast<std::size_t>(i)] =
            static_cast<double>(i) / static_cast<double>(nodes_per_axis - 1);
    }
    auto lift = [&](std::span<const double> uv) {
        const double u = uv[0], v = uv[1];
        const Eigen::VectorXd w = (1.0 - u) * (1.0 - v) * w00 + (1.0 - u) * v * w01 +
                                  u * (1.0 - v) * w10 + u * v * w11;
        return hull_point(hull, w, tol);
    };
    return ChartedManifold::from_axes({axis, axis}, lift, tol);
}

double tangent_condition_scan(const ChartedManifold& chart) {
    for (Index n : chart.shape()) {
        if (n < 3) throw SpecError("tangent_condition_scan: every axis needs >= 3 nodes");
    }
    const int d = chart.d();
    const Index dim = chart.state(0).dim();
    double worst = 1.0;
    for (Index flat = 0; flat < chart.node_count(); ++flat) {
        const auto multi = chart.multi_index(flat);
        if (!is_interior(multi, chart.shape())) continue;
        Eigen::MatrixXd frame(2 * dim, d);
        for (int a = 0; a < d; ++a) {
            const Vector t = chart_tangent(chart, multi, a);
            const Vector h =
                t - chart.state(flat).amplitudes().dot(t) * chart.state(flat).amplitudes();
            frame.col(a).head(dim) = h.real();
            frame.col(a).tail(dim) = h.imag();
        }
        const auto sv = frame.jacobiSvd().singularValues();
        const double smin = sv[d - 1];
        if (smin <= 0.0) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, sv[0] / smin);
    }
    return worst;
}

CharacterizationReport verify_npm_characterization(const ChartedManifold& chart,
                                                   const CharacterizationOptions& opts,
                                                   const Tolerances& tol) {
    const double condition = tangent_condition_scan(chart);
    if (condition > 1e6) {
        throw SpecError("verify_npm_characterization: chart tangents are degenerate "
                        "(condition " + std::to_string(condition) + ")");
    }
    CharacterizationReport report;

    // Global in-phase lift of the grid against the first node as fiducial.
    std::vector<Ray> rays;
    rays.reserve(static_cast<std::size_t>(chart.node_count()));
    for (Index i = 0; i < chart.node_count(); ++i) rays.emplace_back(chart.state(i), tol);
    const std::vector<StateVector> anchors = pancharatnam_lift(rays, chart.state(0), tol);
    const HullModel hull = hull_extend(anchors, opts.membership_tol, tol);

    // (i) every chart point belongs to the hull
    report.members_ok = true;
    for (Index i = 0; i < chart.node_count(); ++i) {
        const auto mem = hull_membership(hull, chart.state(i), opts.membership_tol, tol);
        if (mem.residual > report.worst_member_residual) {
            report.worst_member_residual = mem.residual;
            report.worst_member = i;
        }
        if (!mem.member) report.members_ok = false;
    }

    // (ii) hull is totally geodesic under NNLS membership
    const MembershipOracle oracle = [&hull, &opts, &tol](const StateVector& psi) {
        return hull_membership(hull, psi, opts.membership_tol, tol).member;
    };
    const ChartedManifold sample = hull_sample_chart(hull, opts.hull_chart_nodes, opts.seed, tol);
    report.tg = totally_geodesic_check(sample.states(), oracle, opts.tg_pairs, opts.seed + 1,
                                       32, tol);

    // (iii) + (iv) the hull sample chart is isotropic and passes the triple scan
    report.isotropy = isotropy_check(sample, -1.0, tol);
    report.npm = is_npm(sample, 1e-10, opts.triples, tol);

    report.ok = report.members_ok && report.tg.ok && report.isotropy.ok && report.npm.ok;
    return report;
}

ChartedManifold sphere_plus_chart(int m, Index nodes_per_axis, double lo, double hi,
                                  std::vector<StateVector> basis, const Tolerances& tol) {
    if (m < 2) throw DimensionError("sphere_plus_chart: m >= 2 required");
    if (static_cast<int>(basis.size()) != m) {
        throw DimensionError("sphere_plus_chart: basis must supply m vectors");
    }
    if (!(0.0 < lo && lo < hi && hi < kPi / 2.0)) {
        throw SpecError("sphere_plus_chart: angle range must sit inside (0, pi/2)");
    }
    std::vector<double> axis(static_cast<std::size_t>(nodes_per_axis));
    for (Index i = 0; i < nodes_per_axis; ++i) {
        axis[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(nodes_per_axis - 1);
    }
    std::vector<std::vector<double>> axes(static_cast<std::size_t>(m - 1), axis);
    const Index dim = basis.front().dim();
    auto lift = [m, dim, &basis, &tol](std::span<const double> angles) {
        // Hyperspherical coordinates keep every component strictly positive.
        Vector v = Vector::Zero(dim);
        double sines = 1.0;
        for (int r = 0; r < m - 1; ++r) {
            v += sines * std::cos(angles[static_cast<std::size_t>(r)]) *
                 basis[static_cast<std::size_t>(r)].amplitudes();
            sines *= std::sin(angles[static_cast<std::size_t>(r)]);
        }
        v += sines * basis[static_cast<std::size_t>(m - 1)].amplitudes();
        return normalize(v, tol);
    };
    return ChartedManifold::from_axes(axes, lift, tol);
}

ChartedManifold sphere_plus_chart(int m, Index nodes_per_axis, double lo, double hi,
                                  const Tolerances& tol) {
    std::vector<StateVector> basis;
    basis.reserve(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) basis.push_back(StateVector::basis(m, r));
    return sphere_plus_chart(m, nodes_per_axis, lo, hi, std::move(basis), tol);
}

}  // namespace raygeo
