#pragma once

#include <json.hpp>
#include <string>

#include "graphon/core.hpp"
#include "graphon/coupling.hpp"
#include "graphon/measures.hpp"
#include "graphon/metrics.hpp"
#include "graphon/multiway.hpp"
#include "graphon/order.hpp"

namespace graphon::io {

using Json = nlohmann::json;

Json to_json(const StepGraphon& w);
Json to_json(const SignedStepKernel& y);
Json to_json(const StepFunction1D& f);
Json to_json(const PartitionSpec& p);
Json to_json(const Coupling& c);
Json to_json(const DiscreteMeasure& m);
Json to_json(const EnvelopeSample& s);
Json to_json(const MultiwayMatrixSet& s);
Json to_json(const OptimizerConfig& c);
Json to_json(const CutNormResult& r);
Json to_json(const CutDistanceResult& r);
Json to_json(const FlatnessWitness& w);
Json to_json(const ConvexOrderReport& r);
Json to_json(const OrderVerdict& v);

/// Readers re-validate every invariant; malformed input throws ParseError.
StepGraphon graphon_from_json(const Json& j);
/// Accepts a signed kernel or a plain graphon.
SignedStepKernel kernel_from_json(const Json& j);
StepFunction1D step_function_from_json(const Json& j);
PartitionSpec partition_from_json(const Json& j);
Coupling coupling_from_json(const Json& j);
DiscreteMeasure measure_from_json(const Json& j);
/// Entries may be numbers or "p/q" strings.
RationalMeasure rational_measure_from_json(const Json& j);
EnvelopeSample envelope_from_json(const Json& j);
MultiwayMatrixSet multiway_from_json(const Json& j);
/// Missing fields keep their defaults.
OptimizerConfig optimizer_from_json(const Json& j);

Json parse(const std::string& text);

}  // namespace graphon::io
