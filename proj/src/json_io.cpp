#include "raygeo/json_io.hpp"

#include <string>

namespace raygeo {

namespace {

const Json& require_field(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw SpecError("json: missing field \"" + std::string(key) + "\"");
    }
    return *it;
}

std::vector<double> double_list(const Json& j, const char* key) {
    const Json& field = require_field(j, key);
    if (!field.is_array()) {
        throw SpecError("json: field \"" + std::string(key) + "\" must be an array");
    }
    return field.get<std::vector<double>>();
}

}  // namespace

Json state_to_json(const StateVector& psi) {
    std::vector<double> re(static_cast<std::size_t>(psi.dim()));
    std::vector<double> im(static_cast<std::size_t>(psi.dim()));
    for (Index i = 0; i < psi.dim(); ++i) {
        re[static_cast<std::size_t>(i)] = psi[i].real();
        im[static_cast<std::size_t>(i)] = psi[i].imag();
    }
    return Json{{"dim", psi.dim()}, {"re", re}, {"im", im}};
}

StateVector state_from_json(const Json& j, const Tolerances& tol) {
    const Index dim = require_field(j, "dim").get<Index>();
    const auto re = double_list(j, "re");
    const auto im = double_list(j, "im");
    if (static_cast<Index>(re.size()) != dim || static_cast<Index>(im.size()) != dim) {
        throw SpecError("json state: re/im length disagrees with dim");
    }
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) {
        v[i] = Complex(re[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(i)]);
    }
    return normalize(v, tol);
}

Json states_to_json(const std::vector<StateVector>& psis) {
    Json arr = Json::array();
    for (const auto& psi : psis) arr.push_back(state_to_json(psi));
    return Json{{"states", arr}};
}

std::vector<StateVector> states_from_json(const Json& j, const Tolerances& tol) {
    const Json& arr = require_field(j, "states");
    std::vector<StateVector> out;
    out.reserve(arr.size());
    for (const auto& item : arr) out.push_back(state_from_json(item, tol));
    return out;
}

Json curve_to_json(const SampledCurve& curve) {
    Json arr = Json::array();
    for (const auto& s : curve.states()) arr.push_back(state_to_json(s));
    return Json{{"params", curve.params()}, {"states", arr}};
}

SampledCurve curve_from_json(const Json& j, const Tolerances& tol) {
    const auto params = double_list(j, "params");
    const Json& arr = require_field(j, "states");
    std::vector<StateVector> states;
    states.reserve(arr.size());
    for (const auto& item : arr) states.push_back(state_from_json(item, tol));
    return SampledCurve(params, std::move(states), tol);
}

Json chart_to_json(const ChartedManifold& chart) {
    Json params = Json::array();
    Json states = Json::array();
    for (Index i = 0; i < chart.node_count(); ++i) {
        params.push_back(chart.param(i));
        states.push_back(state_to_json(chart.state(i)));
    }
    return Json{{"d", chart.d()},
                {"shape", chart.shape()},
                {"params", params},
                {"states", states}};
}

ChartedManifold chart_from_json(const Json& j, const Tolerances& tol) {
    const auto shape = require_field(j, "shape").get<std::vector<Index>>();
    const Json& jparams = require_field(j, "params");
    const Json& jstates = require_field(j, "states");
    std::vector<std::vector<double>> params;
    params.reserve(jparams.size());
    for (const auto& p : jparams) params.push_back(p.get<std::vector<double>>());
    std::vector<StateVector> states;
    states.reserve(jstates.size());
    for (const auto& s : jstates) states.push_back(state_from_json(s, tol));
    const ChartedManifold chart(shape, std::move(params), std::move(states), tol);
    if (j.contains("d") && require_field(j, "d").get<int>() != chart.d()) {
        throw SpecError("json chart: d disagrees with shape");
    }
    return chart;
}

Json surface_to_json(const SurfaceChart& surface) {
    Json j = chart_to_json(surface.chart);
    j["boundary"] = surface.boundary;
    return j;
}

SurfaceChart surface_from_json(const Json& j, const Tolerances& tol) {
    ChartedManifold chart = chart_from_json(j, tol);
    if (chart.d() != 2) throw SpecError("json surface: d must be 2");
    auto boundary = require_field(j, "boundary").get<std::vector<Index>>();
    for (Index b : boundary) {
        if (b < 0 || b >= chart.node_count()) {
            throw SpecError("json surface: boundary index out of range");
        }
    }
    return SurfaceChart{std::move(chart), std::move(boundary)};
}

Json gaussian_to_json(const GaussianState& g) {
    Json U = Json::array();
    for (Eigen::Index r = 0; r < g.U().rows(); ++r) {
        std::vector<double> row(static_cast<std::size_t>(g.U().cols()));
        for (Eigen::Index c = 0; c < g.U().cols(); ++c) row[static_cast<std::size_t>(c)] = g.U()(r, c);
        U.push_back(row);
    }
    std::vector<double> y(g.y().data(), g.y().data() + g.y().size());
    return Json{{"N", g.n()}, {"y", y}, {"U", U}};
}

GaussianState gaussian_from_json(const Json& j) {
    const int n = require_field(j, "N").get<int>();
    const auto y = double_list(j, "y");
    if (static_cast<int>(y.size()) != n) throw SpecError("json gaussian: y length != N");
    const Json& jU = require_field(j, "U");
    Eigen::MatrixXd U(n, n);
    if (static_cast<int>(jU.size()) != n) throw SpecError("json gaussian: U must be N x N");
    for (int r = 0; r < n; ++r) {
        const auto row = jU[static_cast<std::size_t>(r)].get<std::vector<double>>();
        if (static_cast<int>(row.size()) != n) throw SpecError("json gaussian: U must be N x N");
        for (int c = 0; c < n; ++c) U(r, c) = row[static_cast<std::size_t>(c)];
    }
    Eigen::VectorXd yv(n);
    for (int i = 0; i < n; ++i) yv[i] = y[static_cast<std::size_t>(i)];
    return GaussianState(yv, U);
}

Json mixture_to_json(const GaussianMixture& mix) {
    Json comps = Json::array();
    for (const auto& g : mix.components) comps.push_back(gaussian_to_json(g));
    std::vector<double> w(mix.weights.data(), mix.weights.data() + mix.weights.size());
    return Json{{"components", comps}, {"weights", w}, {"normalizer", mix.normalizer}};
}

GaussianMixture mixture_from_json(const Json& j) {
    GaussianMixture mix;
    const Json& comps = require_field(j, "components");
    for (const auto& c : comps) mix.components.push_back(gaussian_from_json(c));
    const auto w = double_list(j, "weights");
    if (w.size() != mix.components.size()) {
        throw SpecError("json mixture: weights/components length mismatch");
    }
    mix.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Index>(w.size()));
    if (j.contains("normalizer")) mix.normalizer = j["normalizer"].get<double>();
    return mix;
}

Json hull_to_json(const HullModel& hull) {
    Json anchors = Json::array();
    for (const auto& a : hull.anchors()) anchors.push_back(state_to_json(a));
    return Json{{"anchors", anchors}, {"tol", hull.membership_tol()}};
}

HullModel hull_from_json(const Json& j, const Tolerances& tol) {
    const Json& arr = require_field(j, "anchors");
    std::vector<StateVector> anchors;
    anchors.reserve(arr.size());
    for (const auto& a : arr) anchors.push_back(state_from_json(a, tol));
    const double mtol = j.contains("tol") ? j["tol"].get<double>() : 1e-8;
    return HullModel(std::move(anchors), mtol, tol);
}

Json report_to_json(const NpcReport& r) {
    Json j{{"ok", r.ok},
           {"exhaustive", r.exhaustive},
           {"triples_checked", r.triples_checked},
           {"tol", r.tol},
           {"worst",
            {{"i", r.worst.i},
             {"j", r.worst.j},
             {"k", r.worst.k},
             {"delta_re", r.worst.delta.real()},
             {"delta_im", r.worst.delta.imag()},
             {"imag_ratio", r.worst.imag_ratio},
             {"positive", r.worst.positive}}}};
    if (r.orthogonal_pair) {
        j["orthogonal_pair"] = {r.orthogonal_pair->first, r.orthogonal_pair->second};
    }
    return j;
}

Json report_to_json(const IsotropyReport& r) {
    return Json{{"ok", r.ok},
                {"max_abs_omega", r.max_abs_omega},
                {"tol_used", r.tol_used},
                {"node", r.node},
                {"axis_u", r.axis_u},
                {"axis_v", r.axis_v},
                {"points_checked", r.points_checked}};
}

Json report_to_json(const TgReport& r) {
    Json j{{"ok", r.ok},
           {"pairs_checked", r.pairs_checked},
           {"interior_samples", r.interior_samples}};
    if (r.failure) {
        j["failure"] = {{"a", r.failure->a},
                        {"b", r.failure->b},
                        {"interior", r.failure->interior},
                        {"s_fraction", r.failure->s_fraction}};
    }
    return j;
}

Json report_to_json(const PhaseReport& r) {
    return Json{{"total", r.total},
                {"dynamical", r.dynamical},
                {"geometric", r.geometric},
                {"estimator", r.estimator == PhaseEstimator::discrete_bargmann
                                  ? "discrete_bargmann"
                                  : "quadrature"},
                {"mesh", r.mesh}};
}

Json report_to_json(const HullMembershipReport& r) {
    std::vector<double> p(r.coefficients.data(),
                          r.coefficients.data() + r.coefficients.size());
    return Json{{"member", r.member},
                {"coefficients", p},
                {"residual", r.residual},
                {"phase", r.phase}};
}

Json report_to_json(const CharacterizationReport& r) {
    return Json{{"ok", r.ok},
                {"members_ok", r.members_ok},
                {"worst_member_residual", r.worst_member_residual},
                {"worst_member", r.worst_member},
                {"totally_geodesic", report_to_json(r.tg)},
                {"isotropy", report_to_json(r.isotropy)},
                {"npm", report_to_json(r.npm)}};
}

Json report_to_json(const BargmannResult& r) {
    return Json{{"re", r.value.real()},
                {"im", r.value.imag()},
                {"arg", r.arg()},
                {"abs", std::abs(r.value)},
                {"order", r.order},
                {"min_link_modulus", r.min_link_modulus}};
}

}  // namespace raygeo
