#pragma once

// JSON forms of the library types. Doubles round-trip exactly.
//
//   operator     {dim, re[][], im[][]}
//   assemblage   {n_settings, n_outcomes, dim, members[{a, x, operator}]}
//   witness      assemblage layout plus local_bound
//   correlations {dims[A, B, X, Y], lossless, values[a][b][x][y]}
//   inputs       [operator, ...]

#include <string>

#include "json.hpp"
#include "mdisteer/experiment.hpp"
#include "mdisteer/mdi.hpp"
#include "mdisteer/sdp.hpp"
#include "mdisteer/steering.hpp"

namespace mdisteer {

using Json = nlohmann::json;

Json load_json(const std::string& path);
void save_json(const Json& j, const std::string& path);

/// Reads a sweep configuration:
/// {v_grid, shots, seed, resamples, workers, noise: {eta, xi}, outputs: {csv, plot}}.
SweepConfig sweep_config_from_json(const Json& j);

}  // namespace mdisteer

namespace nlohmann {

#define MDISTEER_JSON_SERIALIZER(T)            \
  template <>                                  \
  struct adl_serializer<T> {                   \
    static void to_json(json& j, const T& v);  \
    static T from_json(const json& j);         \
  };

MDISTEER_JSON_SERIALIZER(mdisteer::HermitianOperator)
MDISTEER_JSON_SERIALIZER(mdisteer::State)
MDISTEER_JSON_SERIALIZER(mdisteer::Assemblage)
MDISTEER_JSON_SERIALIZER(mdisteer::SteeringWitness)
MDISTEER_JSON_SERIALIZER(mdisteer::CorrelationTensor)
MDISTEER_JSON_SERIALIZER(mdisteer::QuantumInputs)
MDISTEER_JSON_SERIALIZER(mdisteer::SdpProblem)
MDISTEER_JSON_SERIALIZER(mdisteer::SdpSolution)

#undef MDISTEER_JSON_SERIALIZER

}  // namespace nlohmann
