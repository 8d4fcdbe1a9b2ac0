#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "quench/alert.hpp"
#include "quench/attack_graph.hpp"
#include "quench/correlation_graph.hpp"
#include "quench/errors.hpp"

namespace quench {

// New nodes and edges produced by one enqueue.
struct EnqueueResult {
    std::vector<CorrNode> new_nodes;
    std::vector<CorrEdge> new_edges;
};

// Runtime correlation structure over a validated attack graph: one latest-alert
// slot per exploit vertex plus per-vertex breadth-first pointer layers computed
// once at construction. Memory for stored alerts is bounded by the number of
// exploit vertices no matter how long the stream runs.
//
// Single writer: enqueue calls must be externally serialized in stream order.
class QueueGraph {
public:
    explicit QueueGraph(const AttackGraph& graph);

    // Stores the alert in its vertex slot (replacing any previous occupant) and
    // walks the vertex's backward pointer layers. An occupied predecessor slot
    // with a strictly earlier alert contributes one edge toward the nearest
    // downstream node and terminates that branch; an empty slot either stops
    // the branch (hypothesize = false) or contributes a hypothesized-alert node
    // and keeps descending. Consequence conditions of the vertex become
    // satisfied. Throws UnknownVertexError / TimeRegressionError.
    EnqueueResult enqueue(const std::string& vertex_id, const Alert& alert, bool hypothesize);

    // Exploit vertices reachable forward in time from `vertex_id` (potential
    // next steps), root excluded. Throws UnknownVertexError.
    std::set<std::string> predict(const std::string& vertex_id) const;

    // The correlation graph accumulated by every enqueue since construction.
    const CorrelationGraph& snapshot() const noexcept { return corr_; }

    bool condition_satisfied(const std::string& condition_id) const;

    const std::optional<Alert>& slot(const std::string& vertex_id) const;

    // Instrumentation for the space/work bounds.
    std::size_t occupied_slots() const noexcept { return occupied_; }
    std::size_t max_occupied_slots() const noexcept { return max_occupied_; }
    std::size_t last_enqueue_visited() const noexcept { return last_visited_; }
    std::size_t backward_reach_size(const std::string& vertex_id) const;

    static constexpr Micros kRegressionTolerance = kMicrosPerSecond;

private:
    // Per-root pointer layers: vertices backward- (or forward-) reachable from
    // the root, in breadth-first discovery order, each entry keeping pointers to
    // every next-hop entry. All parents are retained (the reachable sub-DAG, not
    // just a spanning tree) so branch pruning at occupied vertices still reaches
    // vertices whose alternative paths stay empty.
    struct Layers {
        struct Entry {
            std::size_t exploit;            // index into graph.exploits()
            std::vector<std::size_t> next;  // entry indices one hop further out
        };
        std::vector<Entry> entries; // entries[0] is the root
    };

    static Layers build_layers(const AttackGraph& g, std::size_t root, bool backward);

    const AttackGraph& graph_;
    std::vector<Layers> backward_;
    std::vector<Layers> forward_;
    std::vector<std::optional<Alert>> slots_;
    std::vector<char> satisfied_;
    CorrelationGraph corr_;

    // (vertex index, downstream attach node) -> hypothesized node id
    std::map<std::pair<std::size_t, std::string>, std::string> hyp_nodes_;
    std::int64_t hyp_seq_ = 0;

    Micros max_ts_ = 0;
    bool any_enqueued_ = false;
    std::size_t occupied_ = 0;
    std::size_t max_occupied_ = 0;
    std::size_t last_visited_ = 0;
};

} // namespace quench
