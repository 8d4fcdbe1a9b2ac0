#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "quench/time.hpp"

namespace quench {

// Node of the output graph: a real alert pinned to an exploit vertex, a
// hypothesized (missed) alert at an exploit vertex, or a security condition.
struct CorrNode {
    enum class Kind { real, hypothesized, condition };

    std::string id; // "a<alert-id>", "h<n>", "c:<condition-id>"
    Kind kind = Kind::real;
    std::string vertex;            // exploit vertex id (real/hypothesized) or condition id
    std::int64_t alert_id = -1;    // real only
    Micros ts = 0;                 // real only
    std::string signature;         // real only
};

struct CorrEdge {
    std::string from;
    std::string to; // "from prepares for to"
};

// Accumulated correlation output. Insertion-ordered (deterministic exports),
// idempotent node/edge insertion.
class CorrelationGraph {
public:
    // Returns true when the node was new.
    bool add_node(CorrNode node);
    // Returns true when the edge was new.
    bool add_edge(std::string from, std::string to);

    const std::vector<CorrNode>& nodes() const noexcept { return nodes_; }
    const std::vector<CorrEdge>& edges() const noexcept { return edges_; }
    const CorrNode* find(std::string_view id) const;
    bool has_edge(std::string_view from, std::string_view to) const;

private:
    std::vector<CorrNode> nodes_;
    std::vector<CorrEdge> edges_;
    std::unordered_map<std::string, std::size_t> node_index_;
    std::unordered_set<std::string> edge_keys_;
};

} // namespace quench
