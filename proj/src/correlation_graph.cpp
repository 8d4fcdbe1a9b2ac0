#include "quench/correlation_graph.hpp"

namespace quench {

bool CorrelationGraph::add_node(CorrNode node) {
    auto [it, inserted] = node_index_.emplace(node.id, nodes_.size());
    if (!inserted)
        return false;
    nodes_.push_back(std::move(node));
    return true;
}

bool CorrelationGraph::add_edge(std::string from, std::string to) {
    std::string key = from + "\x1f" + to;
    if (!edge_keys_.insert(std::move(key)).second)
        return false;
    edges_.push_back({std::move(from), std::move(to)});
    return true;
}

const CorrNode* CorrelationGraph::find(std::string_view id) const {
    auto it = node_index_.find(std::string(id));
    if (it == node_index_.end())
        return nullptr;
    return &nodes_[it->second];
}

bool CorrelationGraph::has_edge(std::string_view from, std::string_view to) const {
    return edge_keys_.count(std::string(from) + "\x1f" + std::string(to)) > 0;
}

} // namespace quench
