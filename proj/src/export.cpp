#include "quench/export.hpp"

#include "quench/ndjson.hpp"

namespace quench {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string dot_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string to_dot(const CorrelationGraph& graph) {
    std::string out = "digraph correlation {\n  rankdir=LR;\n";
    for (const auto& n : graph.nodes()) {
        out += "  \"" + dot_escape(n.id) + "\" [";
        switch (n.kind) {
        case CorrNode::Kind::real:
            out += "shape=circle, label=\"" + dot_escape(n.vertex) + "\\n" + dot_escape(n.id);
            if (!n.signature.empty())
                out += " " + dot_escape(n.signature);
            out += "\"";
            break;
        case CorrNode::Kind::hypothesized:
            out += "shape=circle, style=dashed, label=\"" + dot_escape(n.vertex) + "\\n?" +
                   dot_escape(n.id) + "\"";
            break;
        case CorrNode::Kind::condition:
            out += "shape=box, label=\"" + dot_escape(n.vertex) + "\"";
            break;
        }
        out += "];\n";
    }
    for (const auto& e : graph.edges())
        out += "  \"" + dot_escape(e.from) + "\" -> \"" + dot_escape(e.to) + "\";\n";
    out += "}\n";
    return out;
}

ordered_json correlation_to_json(const CorrelationGraph& graph) {
    ordered_json doc;
    doc["nodes"] = ordered_json::array();
    for (const auto& n : graph.nodes())
        doc["nodes"].push_back(ndjson::node_to_json(n));
    doc["edges"] = ordered_json::array();
    for (const auto& e : graph.edges())
        doc["edges"].push_back({{"from", e.from}, {"to", e.to}});
    return doc;
}

CorrelationGraph correlation_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges"))
        throw ParseError("correlation graph: expected object with 'nodes' and 'edges'");
    CorrelationGraph g;
    for (const auto& n : doc.at("nodes"))
        g.add_node(ndjson::node_from_json(n));
    for (const auto& e : doc.at("edges")) {
        if (!e.is_object() || !e.contains("from") || !e.contains("to"))
            throw ParseError("correlation graph: edges must be {from, to} objects");
        g.add_edge(e.at("from").get<std::string>(), e.at("to").get<std::string>());
    }
    return g;
}

ordered_json stats_to_json(const EngineStats& stats) {
    ordered_json j;
    j["total_in"] = stats.total_in;
    j["mapped"] = stats.mapped;
    j["unmapped"] = stats.unmapped;
    j["passed_vertex"] = stats.passed_vertex;
    j["passed_signature"] = stats.passed_signature;
    j["suppressed_vertex"] = stats.suppressed_vertex;
    j["suppressed_signature"] = stats.suppressed_signature;
    j["dropped"] = stats.dropped;
    j["rejected"] = stats.rejected;
    j["hypothesized"] = stats.hypothesized;
    j["bytes_out"] = stats.bytes_out;
    j["reduction_ratio"] = stats.reduction_ratio();
    return j;
}

} // namespace quench
