#include "quench/queue_graph.hpp"

#include <deque>

namespace quench {

QueueGraph::QueueGraph(const AttackGraph& graph) : graph_(graph) {
    const std::size_t n = graph.exploits().size();
    backward_.reserve(n);
    forward_.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
        backward_.push_back(build_layers(graph, v, /*backward=*/true));
        forward_.push_back(build_layers(graph, v, /*backward=*/false));
    }
    slots_.assign(n, std::nullopt);
    satisfied_.assign(graph.conditions().size(), 0);
    for (std::size_t c = 0; c < graph.conditions().size(); ++c)
        if (graph.conditions()[c].initial)
            satisfied_[c] = 1;
}

QueueGraph::Layers QueueGraph::build_layers(const AttackGraph& g, std::size_t root, bool backward) {
    Layers layers;
    std::unordered_map<std::size_t, std::size_t> entry_of; // exploit index -> entry index
    layers.entries.push_back({root, {}});
    entry_of.emplace(root, 0);
    std::deque<std::size_t> pending{0};
    while (!pending.empty()) {
        const std::size_t ei = pending.front();
        pending.pop_front();
        const std::size_t vertex = layers.entries[ei].exploit;
        const auto& adjacent = backward ? g.exploit_preds(vertex) : g.exploit_succs(vertex);
        for (std::size_t other : adjacent) {
            auto [it, inserted] = entry_of.emplace(other, layers.entries.size());
            if (inserted) {
                layers.entries.push_back({other, {}});
                pending.push_back(it->second);
            }
            layers.entries[ei].next.push_back(it->second);
        }
    }
    return layers;
}

EnqueueResult QueueGraph::enqueue(const std::string& vertex_id, const Alert& alert, bool hypothesize) {
    const auto v_opt = graph_.exploit_index(vertex_id);
    if (!v_opt)
        throw UnknownVertexError(vertex_id);
    const std::size_t v = *v_opt;

    if (any_enqueued_ && alert.ts < max_ts_ - kRegressionTolerance)
        throw TimeRegressionError("alert " + std::to_string(alert.id) + " at t=" + format_ts(alert.ts) +
                                  " is more than " + format_ts(kRegressionTolerance) +
                                  "s behind stream maximum t=" + format_ts(max_ts_));
    any_enqueued_ = true;
    if (alert.ts > max_ts_)
        max_ts_ = alert.ts;

    EnqueueResult result;

    CorrNode real;
    real.id = "a" + std::to_string(alert.id);
    real.kind = CorrNode::Kind::real;
    real.vertex = vertex_id;
    real.alert_id = alert.id;
    real.ts = alert.ts;
    real.signature = alert.signature;
    const std::string real_id = real.id;
    if (corr_.add_node(real))
        result.new_nodes.push_back(corr_.nodes().back());

    if (!slots_[v]) {
        ++occupied_;
        if (occupied_ > max_occupied_)
            max_occupied_ = occupied_;
    }
    slots_[v] = alert;

    // Backward walk over the pointer layers. Each entry is visited at most
    // once; `attach` carries the nearest downstream node (the new alert or the
    // closest hypothesized step) that a discovered predecessor should point to.
    const Layers& layers = backward_[v];
    std::vector<char> visited(layers.entries.size(), 0);
    std::deque<std::pair<std::size_t, std::string>> worklist;
    visited[0] = 1;
    for (std::size_t ni : layers.entries[0].next) {
        if (!visited[ni]) {
            visited[ni] = 1;
            worklist.emplace_back(ni, real_id);
        }
    }
    std::size_t visit_count = 0;
    while (!worklist.empty()) {
        const auto [ei, attach] = worklist.front();
        worklist.pop_front();
        ++visit_count;
        const std::size_t pv = layers.entries[ei].exploit;
        const std::optional<Alert>& occupant = slots_[pv];
        if (occupant) {
            // First occupied vertex on this branch: correlate if strictly
            // earlier, and stop either way (deeper correlation stays implicit).
            if (occupant->ts < alert.ts) {
                const std::string pred_id = "a" + std::to_string(occupant->id);
                if (corr_.add_edge(pred_id, attach))
                    result.new_edges.push_back(corr_.edges().back());
            }
            continue;
        }
        if (!hypothesize)
            continue;
        // Missing step: synthesize it (reusing the node for a repeated gap
        // toward the same downstream neighbor) and keep walking.
        const std::string& pv_id = graph_.exploits()[pv].id;
        auto key = std::make_pair(pv, attach);
        auto it = hyp_nodes_.find(key);
        std::string hyp_id;
        if (it != hyp_nodes_.end()) {
            hyp_id = it->second;
        } else {
            hyp_id = "h" + std::to_string(++hyp_seq_);
            hyp_nodes_.emplace(key, hyp_id);
            CorrNode hyp;
            hyp.id = hyp_id;
            hyp.kind = CorrNode::Kind::hypothesized;
            hyp.vertex = pv_id;
            if (corr_.add_node(hyp))
                result.new_nodes.push_back(corr_.nodes().back());
        }
        if (corr_.add_edge(hyp_id, attach))
            result.new_edges.push_back(corr_.edges().back());
        for (std::size_t ni : layers.entries[ei].next) {
            if (!visited[ni]) {
                visited[ni] = 1;
                worklist.emplace_back(ni, hyp_id);
            }
        }
    }
    last_visited_ = visit_count;

    for (std::size_t c : graph_.consequence_conditions(v))
        satisfied_[c] = 1;

    return result;
}

std::set<std::string> QueueGraph::predict(const std::string& vertex_id) const {
    const auto v_opt = graph_.exploit_index(vertex_id);
    if (!v_opt)
        throw UnknownVertexError(vertex_id);
    std::set<std::string> out;
    const Layers& layers = forward_[*v_opt];
    for (std::size_t i = 1; i < layers.entries.size(); ++i)
        out.insert(graph_.exploits()[layers.entries[i].exploit].id);
    return out;
}

bool QueueGraph::condition_satisfied(const std::string& condition_id) const {
    const auto c = graph_.condition_index(condition_id);
    if (!c)
        throw UnknownVertexError(condition_id);
    return satisfied_[*c] != 0;
}

const std::optional<Alert>& QueueGraph::slot(const std::string& vertex_id) const {
    const auto v = graph_.exploit_index(vertex_id);
    if (!v)
        throw UnknownVertexError(vertex_id);
    return slots_[*v];
}

std::size_t QueueGraph::backward_reach_size(const std::string& vertex_id) const {
    const auto v = graph_.exploit_index(vertex_id);
    if (!v)
        throw UnknownVertexError(vertex_id);
    return backward_[*v].entries.size();
}

} // namespace quench
