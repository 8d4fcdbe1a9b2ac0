#pragma once

#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "quench/alert.hpp"
#include "quench/attack_graph.hpp"
#include "quench/queue_graph.hpp"
#include "quench/rational.hpp"
#include "quench/throttle.hpp"

namespace quench {

struct EngineConfig {
    Rational vertex_rate{2, 1};
    std::int64_t vertex_burst = 20;
    Rational sig_rate{2, 1};
    std::int64_t sig_burst = 20;
    bool hypothesize = true;
    bool drop_unmapped = false;
    bool throttle = true;
    // Lazily created per-signature filters are capped; least recently used
    // sites are evicted (their counters flushed) past this many signatures.
    std::size_t sig_filter_cap = 65536;
    Micros regression_tolerance = kMicrosPerSecond;

    void validate() const; // throws std::invalid_argument
};

struct EngineStats {
    std::int64_t total_in = 0;
    std::int64_t mapped = 0;
    std::int64_t unmapped = 0;
    std::int64_t passed_vertex = 0;
    std::int64_t passed_signature = 0;
    std::int64_t suppressed_vertex = 0;
    std::int64_t suppressed_signature = 0;
    std::int64_t dropped = 0;
    std::int64_t rejected = 0; // beyond-tolerance time regressions, not part of total_in
    std::int64_t hypothesized = 0;
    std::int64_t bytes_out = 0;

    std::int64_t passed_total() const noexcept { return passed_vertex + passed_signature; }
    std::int64_t suppressed_total() const noexcept { return suppressed_vertex + suppressed_signature; }
    double reduction_ratio() const noexcept {
        if (total_in == 0)
            return 0.0;
        return 1.0 - static_cast<double>(passed_total()) / static_cast<double>(total_in);
    }
};

// --- Output events -----------------------------------------------------------

struct PassedAlertEvent {
    Alert alert;
    std::string site; // "vertex:<id>" or "sig:<signature>"
};

struct SuppressedEvent {
    std::string site;
    std::int64_t count = 0;
    Micros first_ts = 0;
    Micros last_ts = 0;
    Micros ts = 0; // emission time
};

struct CorrelationDeltaEvent {
    std::vector<CorrNode> nodes;
    std::vector<CorrEdge> edges;
    Micros ts = 0;
};

struct ErrorEvent {
    std::string kind;
    std::string detail;
    Micros ts = 0;
};

using OutputEvent = std::variant<PassedAlertEvent, SuppressedEvent, CorrelationDeltaEvent, ErrorEvent>;

Micros event_ts(const OutputEvent& ev);

// Receives each event exactly once, already serialized to its NDJSON line
// (without the trailing newline).
class EventSink {
public:
    virtual ~EventSink() = default;
    virtual void on_event(const OutputEvent& ev, std::string_view line) = 0;
};

// --- Engine ------------------------------------------------------------------

// The map -> throttle -> correlate -> emit pipeline. Alerts mapping to an
// exploit vertex contend for that vertex's token bucket and, on pass, enter the
// queue graph; unmapped alerts contend for a lazily created per-signature
// bucket and pass straight through to the log. Overlimit alerts increment the
// site's run-length counter, which is flushed as a suppression summary just
// before the site's next pass and at end of stream.
//
// One engine instance processes one stream strictly sequentially.
class Engine {
public:
    Engine(const AttackGraph& graph, EngineConfig config);

    void process_alert(const Alert& alert, EventSink& sink);

    // End-of-stream: flushes every non-empty counter as trailing summaries.
    void finish(EventSink& sink);

    const EngineStats& stats() const noexcept { return stats_; }
    const CorrelationGraph& correlation() const noexcept { return qg_.snapshot(); }
    const QueueGraph& queue_graph() const noexcept { return qg_; }
    std::int64_t open_suppressed() const; // sum over all counters not yet flushed

private:
    struct Site {
        TokenBucket bucket;
        RleCounter counter;
    };

    void emit(OutputEvent ev, EventSink& sink);
    void flush_site(Site& site, const std::string& site_id, Micros emit_ts, EventSink& sink);
    Site& signature_site(const std::string& signature, Micros emit_ts, EventSink& sink);

    const AttackGraph& graph_;
    EngineConfig config_;
    QueueGraph qg_;
    EngineStats stats_;
    std::vector<Site> vertex_sites_; // parallel to graph.exploits()

    // Per-signature sites with LRU eviction; list front = most recent.
    std::list<std::string> sig_lru_;
    struct SigEntry {
        std::unique_ptr<Site> site;
        std::list<std::string>::iterator lru_pos;
    };
    std::unordered_map<std::string, SigEntry> sig_sites_;

    Micros stream_max_ts_ = 0;
    bool any_seen_ = false;
};

// Convenience wrapper for replays over in-memory streams: processes every alert
// in order, finishes, and returns stats, the final correlation graph, and the
// full event log with serialized lines.
struct RunResult {
    EngineStats stats;
    CorrelationGraph graph;
    std::vector<OutputEvent> log;
    std::vector<std::string> lines;
};

RunResult run_stream(const AttackGraph& graph, const EngineConfig& config,
                     std::span<const Alert> alerts);

} // namespace quench
