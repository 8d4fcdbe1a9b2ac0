#pragma once

#include <functional>
#include <istream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quench/alert.hpp"
#include "quench/engine.hpp"

namespace quench::ndjson {

// Reads newline-delimited alert records {ts, sig, src, dst, attrs?}, assigning
// ids 1..n in stream order. Blank lines are skipped. Malformed lines throw
// ParseError naming the line number.
std::vector<Alert> read_alerts(std::istream& in);
void for_each_alert(std::istream& in, const std::function<void(Alert&&)>& fn);

std::string alert_line(const Alert& alert);
std::string event_line(const OutputEvent& ev);

nlohmann::ordered_json node_to_json(const CorrNode& node);
CorrNode node_from_json(const nlohmann::json& j);

} // namespace quench::ndjson
