#include "raygeo/curves.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "raygeo/nullphase.hpp"

namespace raygeo {

SampledCurve::SampledCurve(std::vector<double> params, std::vector<StateVector> states,
                           const Tolerances& tol)
    : params_(std::move(params)), states_(std::move(states)) {
    const std::size_t n = states_.size();
    if (n < 2) throw MeshError("SampledCurve: needs at least 2 nodes");
    if (params_.size() != n) {
        throw MeshError("SampledCurve: " + std::to_string(params_.size()) +
                        " params for " + std::to_string(n) + " states");
    }
    const Index dim = states_.front().dim();
    for (const auto& s : states_) {
        if (s.dim() != dim) throw DimensionError("SampledCurve: mixed state dims");
    }
    link_moduli_.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(params_[i] < params_[i + 1])) {
            throw MeshError("SampledCurve: params not strictly increasing at " +
                            std::to_string(i));
        }
        link_moduli_[i] = std::abs(inner(states_[i], states_[i + 1]));
        if (link_moduli_[i] <= tol.ortho_eps) {
            throw OrthogonalityError(
                "SampledCurve: unresolvable adjacent pair at " + std::to_string(i),
                static_cast<std::ptrdiff_t>(i));
        }
    }
}

SampledCurve SampledCurve::sample(const std::function<StateVector(double)>& lift,
                                  double s1, double s2, std::size_t mesh,
                                  const Tolerances& tol) {
    if (mesh < 2) throw MeshError("sample: mesh must be >= 2");
    if (!(s1 < s2)) throw MeshError("sample: need s1 < s2");
    std::vector<double> params(mesh);
    std::vector<StateVector> states;
    states.reserve(mesh);
    for (std::size_t i = 0; i < mesh; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(mesh - 1);
        params[i] = s1 + t * (s2 - s1);
        states.push_back(lift(params[i]));
    }
    return SampledCurve(std::move(params), std::move(states), tol);
}

double total_phase(const SampledCurve& curve, const Tolerances& tol) {
    return relative_phase(curve.front(), curve.back(), tol);
}

double dynamical_phase(const SampledCurve& curve) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        sum += std::arg(inner(curve.state(i), curve.state(i + 1)));
    }
    return sum;
}

namespace {

// Three-point derivative weights on a non-uniform grid.
Vector derivative_at(const SampledCurve& c, std::size_t i) {
    const std::size_t n = c.size();
    if (n == 2) {
        const double h = c.param(1) - c.param(0);
        return (c.state(1).amplitudes() - c.state(0).amplitudes()) / h;
    }
    if (i == 0) {
        const double h1 = c.param(1) - c.param(0);
        const double h2 = c.param(2) - c.param(1);
        const double w0 = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
        const double w1 = (h1 + h2) / (h1 * h2);
        const double w2 = -h1 / (h2 * (h1 + h2));
        return w0 * c.state(0).amplitudes() + w1 * c.state(1).amplitudes() +
               w2 * c.state(2).amplitudes();
    }
    if (i == n - 1) {
        const double h1 = c.param(n - 2) - c.param(n - 3);
        const double h2 = c.param(n - 1) - c.param(n - 2);
        const double w0 = h2 / (h1 * (h1 + h2));
        const double w1 = -(h1 + h2) / (h1 * h2);
        const double w2 = (h1 + 2.0 * h2) / (h2 * (h1 + h2));
        return w0 * c.state(n - 3).amplitudes() + w1 * c.state(n - 2).amplitudes() +
               w2 * c.state(n - 1).amplitudes();
    }
    const double h1 = c.param(i) - c.param(i - 1);
    const double h2 = c.param(i + 1) - c.param(i);
    const double w0 = -h2 / (h1 * (h1 + h2));
    const double w1 = (h2 - h1) / (h1 * h2);
    const double w2 = h1 / (h2 * (h1 + h2));
    return w0 * c.state(i - 1).amplitudes() + w1 * c.state(i).amplitudes() +
           w2 * c.state(i + 1).amplitudes();
}

double trapezoid(const SampledCurve& c, const std::vector<double>& f) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        sum += 0.5 * (f[i] + f[i + 1]) * (c.param(i + 1) - c.param(i));
    }
    return sum;
}

// Rephase node by node so every adjacent overlap is real positive.
std::vector<Vector> in_phase_regauge(const SampledCurve& c) {
    std::vector<Vector> v;
    v.reserve(c.size());
    v.push_back(c.state(0).amplitudes());
    for (std::size_t i = 1; i < c.size(); ++i) {
        const Complex link = v.back().dot(c.state(i).amplitudes());
        v.push_back(c.state(i).amplitudes() * (std::conj(link) / std::abs(link)));
    }
    return v;
}

}  // namespace

double dynamical_phase_quadrature(const SampledCurve& curve) {
    std::vector<double> f(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        f[i] = curve.state(i).amplitudes().dot(derivative_at(curve, i)).imag();
    }
    return trapezoid(curve, f);
}

PhaseReport geometric_phase(const SampledCurve& curve, PhaseEstimator estimator,
                            const Tolerances& tol) {
    PhaseReport r;
    r.estimator = estimator;
    r.mesh = curve.size();
    r.total = total_phase(curve, tol);
    r.dynamical = (estimator == PhaseEstimator::discrete_bargmann)
                      ? dynamical_phase(curve)
                      : dynamical_phase_quadrature(curve);
    r.geometric = r.total - r.dynamical;
    return r;
}

double length(const SampledCurve& curve, const Tolerances& /*tol*/) {
    const std::size_t n = curve.size();
    if (n < 3) throw MeshError("length: mesh too coarse, need n >= 3");
    const std::vector<Vector> v = in_phase_regauge(curve);

    std::vector<double> params(curve.params());
    std::vector<StateVector> states;
    states.reserve(n);
    for (const auto& amps : v) states.emplace_back(amps);
    const SampledCurve regauged(std::move(params), std::move(states));

    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector d = derivative_at(regauged, i);
        const double speed2 = d.squaredNorm();
        const double along = std::norm(v[i].dot(d));
        f[i] = std::sqrt(std::max(0.0, speed2 - along));
    }
    return trapezoid(regauged, f);
}

SampledCurve reverse(const SampledCurve& curve, const Tolerances& tol) {
    const std::size_t n = curve.size();
    std::vector<double> params(n);
    std::vector<StateVector> states;
    states.reserve(n);
    const double lo = curve.param(0), hi = curve.param(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        params[i] = lo + (hi - curve.param(n - 1 - i));
        states.push_back(curve.state(n - 1 - i));
    }
    return SampledCurve(std::move(params), std::move(states), tol);
}

SampledCurve concat(const SampledCurve& c1, const SampledCurve& c2,
                    const Tolerances& tol) {
    if (c1.dim() != c2.dim()) throw DimensionError("concat: dimension mismatch");
    if (!same_ray(Ray(c1.back(), tol), Ray(c2.front(), tol), tol)) {
        throw JunctionError("concat: junction rays differ beyond tol_fid");
    }
    const Complex link = inner(c2.front(), c1.back());
    const Complex phase = link / std::abs(link);

    std::vector<double> params(c1.params());
    std::vector<StateVector> states(c1.states());
    const double shift = c1.param(c1.size() - 1) - c2.param(0);
    for (std::size_t i = 1; i < c2.size(); ++i) {
        params.push_back(c2.param(i) + shift);
        states.push_back(StateVector(c2.state(i).amplitudes() * phase, tol));
    }
    return SampledCurve(std::move(params), std::move(states), tol);
}

SampledCurve concat_chain(const std::vector<SampledCurve>& curves,
                          const Tolerances& tol) {
    if (curves.empty()) throw MeshError("concat_chain: no curves");
    SampledCurve out = curves.front();
    for (std::size_t k = 1; k < curves.size(); ++k) out = concat(out, curves[k], tol);
    return out;
}

double nonadditivity_residual(const std::vector<SampledCurve>& curves,
                              const Tolerances& tol) {
    if (curves.size() < 2) throw MeshError("nonadditivity_residual: need >= 2 segments");
    const SampledCurve whole = concat_chain(curves, tol);

    double sum_segments = 0.0;
    for (const auto& c : curves) sum_segments += geometric_phase(c, PhaseEstimator::discrete_bargmann, tol).geometric;

    // Vertex lifts in the concatenated gauge sit at the junction node offsets.
    std::vector<StateVector> vertices;
    vertices.reserve(curves.size() + 1);
    std::size_t offset = 0;
    vertices.push_back(whole.state(0));
    for (const auto& c : curves) {
        offset += c.size() - 1;
        vertices.push_back(whole.state(offset));
    }
    const BargmannResult bi = delta_n(vertices, tol);

    const double whole_phase = geometric_phase(whole, PhaseEstimator::discrete_bargmann, tol).geometric;
    return angle_distance(whole_phase - sum_segments + bi.arg(), 0.0);
}

SubarcScan subarc_phase_scan(const SampledCurve& curve, const Tolerances& tol) {
    const std::size_t n = curve.size();
    std::vector<double> prefix(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        prefix[i + 1] = prefix[i] + std::arg(inner(curve.state(i), curve.state(i + 1)));
    }
    SubarcScan scan;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex ov = inner(curve.state(i), curve.state(j));
            if (std::abs(ov) <= tol.ortho_eps) {
                throw OrthogonalityError("subarc_phase_scan: orthogonal sub-arc endpoints (" +
                                             std::to_string(i) + ", " + std::to_string(j) + ")",
                                         static_cast<std::ptrdiff_t>(i));
            }
            const double phi = std::abs(wrap_angle(std::arg(ov) - (prefix[j] - prefix[i])));
            if (phi > scan.max_abs_phase) {
                scan.max_abs_phase = phi;
                scan.i = i;
                scan.j = j;
            }
        }
    }
    return scan;
}

SampledCurve boundary_loop(const SurfaceChart& surface, const Tolerances& tol) {
    std::vector<double> params;
    std::vector<StateVector> states;
    params.reserve(surface.boundary.size() + 1);
    states.reserve(surface.boundary.size() + 1);
    for (std::size_t i = 0; i < surface.boundary.size(); ++i) {
        params.push_back(static_cast<double>(i));
        states.push_back(surface.chart.state(surface.boundary[i]));
    }
    // close the loop on the starting node
    params.push_back(static_cast<double>(surface.boundary.size()));
    states.push_back(surface.chart.state(surface.boundary.front()));
    return SampledCurve(std::move(params), std::move(states), tol);
}

std::pair<double, double> loop_phase_vs_area(const SampledCurve& loop,
                                             const SurfaceChart& surface,
                                             double match_fid,
                                             const Tolerances& tol) {
    if (match_fid < 0.0) match_fid = tol.tol_fid;
    if (!same_ray(Ray(loop.front(), tol), Ray(loop.back(), tol), tol)) {
        throw BoundaryError("loop_phase_vs_area: loop is not closed");
    }
    // Every sampled boundary node must sit on the loop. Orientation is the
    // caller's contract; a flipped boundary shows up as a sign mismatch.
    const std::size_t nloop = loop.size();
    for (std::size_t b = 0; b < surface.boundary.size(); ++b) {
        const StateVector& node = surface.chart.state(surface.boundary[b]);
        double best = 2.0;
        for (std::size_t i = 0; i < nloop; ++i) {
            best = std::min(best, 1.0 - fidelity(node, loop.state(i)));
        }
        if (best > match_fid) {
            throw BoundaryError("loop_phase_vs_area: boundary node " + std::to_string(b) +
                                " misses the loop (1 - fidelity = " + std::to_string(best) + ")");
        }
    }
    const double phase = geometric_phase(loop, PhaseEstimator::discrete_bargmann, tol).geometric;
    const double area = surface_omega_integral(surface.chart, tol);
    return {phase, -area};
}

SampledCurve smooth_curve_between(const StateVector& a, const StateVector& b,
                                  std::size_t mesh, std::uint64_t seed,
                                  double wobble, const Tolerances& tol) {
    if (a.dim() != b.dim()) throw DimensionError("smooth_curve_between: dimension mismatch");
    std::mt19937_64 rng(seed);
    const Index dim = a.dim();
    Vector w1(dim), w2(dim);
    for (Index i = 0; i < dim; ++i) {
        w1[i] = Complex(standard_normal(rng), standard_normal(rng));
        w2[i] = Complex(standard_normal(rng), standard_normal(rng));
    }
    w1 /= std::sqrt(static_cast<double>(dim));
    w2 /= std::sqrt(static_cast<double>(dim));
    const double pi = 3.14159265358979323846;
    auto lift = [&](double s) {
        Vector v = (1.0 - s) * a.amplitudes() + s * b.amplitudes() +
                   wobble * std::sin(pi * s) * (std::cos(pi * s) * w1 + std::sin(pi * s) * w2);
        return normalize(v, tol);
    };
    return SampledCurve::sample(lift, 0.0, 1.0, mesh, tol);
}

void write_phase_csv(const SampledCurve& curve, std::ostream& out) {
    out << "s,dynamical_partial_sum\n";
    double acc = 0.0;
    out << curve.param(0) << "," << acc << "\n";
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        acc += std::arg(inner(curve.state(i), curve.state(i + 1)));
        out << curve.param(i + 1) << "," << acc << "\n";
    }
}

}  // namespace raygeo
