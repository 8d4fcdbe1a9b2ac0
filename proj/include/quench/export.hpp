#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "quench/correlation_graph.hpp"
#include "quench/engine.hpp"

namespace quench {

// Graphviz rendering: real alerts as circles, hypothesized alerts as dashed
// circles, security conditions as boxes. Node/edge order follows insertion
// order, so identical graphs render byte-identically.
std::string to_dot(const CorrelationGraph& graph);

nlohmann::ordered_json correlation_to_json(const CorrelationGraph& graph);
CorrelationGraph correlation_from_json(const nlohmann::json& doc);

nlohmann::ordered_json stats_to_json(const EngineStats& stats);

} // namespace quench
