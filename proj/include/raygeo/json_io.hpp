#pragma once

#include <json.hpp>

#include "raygeo/bargmann.hpp"
#include "raygeo/curves.hpp"
#include "raygeo/gaussian.hpp"
#include "raygeo/manifold.hpp"
#include "raygeo/nullphase.hpp"

namespace raygeo {

using Json = nlohmann::json;

// StateVector <-> {"dim": N, "re": [...], "im": [...]}
Json state_to_json(const StateVector& psi);
StateVector state_from_json(const Json& j, const Tolerances& tol = default_tol());

// {"states": [...]}
Json states_to_json(const std::vector<StateVector>& psis);
std::vector<StateVector> states_from_json(const Json& j,
                                          const Tolerances& tol = default_tol());

// SampledCurve <-> {"params": [...], "states": [...]}
Json curve_to_json(const SampledCurve& curve);
SampledCurve curve_from_json(const Json& j, const Tolerances& tol = default_tol());

// ChartedManifold <-> {"d": d, "shape": [...], "params": [[...], ...], "states": [...]}
// row-major grid order; SurfaceChart adds "boundary": [...].
Json chart_to_json(const ChartedManifold& chart);
ChartedManifold chart_from_json(const Json& j, const Tolerances& tol = default_tol());
Json surface_to_json(const SurfaceChart& surface);
SurfaceChart surface_from_json(const Json& j, const Tolerances& tol = default_tol());

// GaussianState <-> {"N": n, "y": [...], "U": [[...], ...]};
// the mixture form adds "weights" and wraps components.
Json gaussian_to_json(const GaussianState& g);
GaussianState gaussian_from_json(const Json& j);
Json mixture_to_json(const GaussianMixture& mix);
GaussianMixture mixture_from_json(const Json& j);

// HullModel <-> {"anchors": [...], "tol": t}
Json hull_to_json(const HullModel& hull);
HullModel hull_from_json(const Json& j, const Tolerances& tol = default_tol());

// Check reports (one-way; consumed by the CLI's report envelope).
Json report_to_json(const NpcReport& r);
Json report_to_json(const IsotropyReport& r);
Json report_to_json(const TgReport& r);
Json report_to_json(const PhaseReport& r);
Json report_to_json(const HullMembershipReport& r);
Json report_to_json(const CharacterizationReport& r);
Json report_to_json(const BargmannResult& r);

}  // namespace raygeo
