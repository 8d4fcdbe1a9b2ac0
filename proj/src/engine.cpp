#include "quench/engine.hpp"

#include <stdexcept>

#include "quench/ndjson.hpp"

namespace quench {

void EngineConfig::validate() const {
    if (!vertex_rate.positive() || !sig_rate.positive())
        throw std::invalid_argument("token rates must be positive");
    if (vertex_burst <= 0 || sig_burst <= 0)
        throw std::invalid_argument("bursts must be positive");
    if (sig_filter_cap == 0)
        throw std::invalid_argument("signature filter cap must be positive");
}

Micros event_ts(const OutputEvent& ev) {
    return std::visit(
        [](const auto& e) -> Micros {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, PassedAlertEvent>)
                return e.alert.ts;
            else
                return e.ts;
        },
        ev);
}

Engine::Engine(const AttackGraph& graph, EngineConfig config)
    : graph_(graph), config_(std::move(config)), qg_(graph) {
    config_.validate();
    vertex_sites_.reserve(graph.exploits().size());
    for (std::size_t i = 0; i < graph.exploits().size(); ++i)
        vertex_sites_.push_back(Site{TokenBucket(config_.vertex_rate, config_.vertex_burst), RleCounter{}});
}

void Engine::emit(OutputEvent ev, EventSink& sink) {
    const std::string line = ndjson::event_line(ev);
    stats_.bytes_out += static_cast<std::int64_t>(line.size()) + 1; // + newline
    sink.on_event(ev, line);
}

void Engine::flush_site(Site& site, const std::string& site_id, Micros emit_ts, EventSink& sink) {
    if (auto summary = site.counter.flush())
        emit(SuppressedEvent{site_id, summary->count, summary->first_ts, summary->last_ts, emit_ts}, sink);
}

Engine::Site& Engine::signature_site(const std::string& signature, Micros emit_ts, EventSink& sink) {
    auto it = sig_sites_.find(signature);
    if (it != sig_sites_.end()) {
        sig_lru_.splice(sig_lru_.begin(), sig_lru_, it->second.lru_pos);
        return *it->second.site;
    }
    if (sig_sites_.size() >= config_.sig_filter_cap) {
        // Evict the stalest site; anything it was still counting goes out now
        // so the accounting stays exact.
        const std::string victim = sig_lru_.back();
        sig_lru_.pop_back();
        auto vit = sig_sites_.find(victim);
        flush_site(*vit->second.site, "sig:" + victim, emit_ts, sink);
        sig_sites_.erase(vit);
    }
    sig_lru_.push_front(signature);
    auto [nit, inserted] = sig_sites_.emplace(
        signature,
        SigEntry{std::make_unique<Site>(Site{TokenBucket(config_.sig_rate, config_.sig_burst), RleCounter{}}),
                 sig_lru_.begin()});
    return *nit->second.site;
}

void Engine::process_alert(const Alert& alert, EventSink& sink) {
    if (any_seen_ && alert.ts < stream_max_ts_ - config_.regression_tolerance) {
        ++stats_.rejected;
        emit(ErrorEvent{"time_regression",
                        "alert " + std::to_string(alert.id) + " at t=" + format_ts(alert.ts) +
                            " is behind stream maximum t=" + format_ts(stream_max_ts_),
                        stream_max_ts_},
             sink);
        return;
    }
    any_seen_ = true;
    if (alert.ts > stream_max_ts_)
        stream_max_ts_ = alert.ts;

    ++stats_.total_in;
    const auto vertex = graph_.map_alert(alert);

    if (vertex) {
        ++stats_.mapped;
        const std::size_t v = *graph_.exploit_index(*vertex);
        Site& site = vertex_sites_[v];
        const std::string site_id = "vertex:" + *vertex;
        if (config_.throttle && site.bucket.try_consume(alert.ts) == Decision::overlimit) {
            site.counter.record(alert.ts);
            ++stats_.suppressed_vertex;
            return;
        }
        ++stats_.passed_vertex;
        flush_site(site, site_id, alert.ts, sink);
        emit(PassedAlertEvent{alert, site_id}, sink);
        EnqueueResult delta = qg_.enqueue(*vertex, alert, config_.hypothesize);
        for (const auto& n : delta.new_nodes)
            if (n.kind == CorrNode::Kind::hypothesized)
                ++stats_.hypothesized;
        emit(CorrelationDeltaEvent{std::move(delta.new_nodes), std::move(delta.new_edges), alert.ts}, sink);
        return;
    }

    ++stats_.unmapped;
    if (config_.drop_unmapped) {
        ++stats_.dropped;
        return;
    }
    const std::string site_id = "sig:" + alert.signature;
    Site& site = signature_site(alert.signature, alert.ts, sink);
    if (config_.throttle && site.bucket.try_consume(alert.ts) == Decision::overlimit) {
        site.counter.record(alert.ts);
        ++stats_.suppressed_signature;
        return;
    }
    ++stats_.passed_signature;
    flush_site(site, site_id, alert.ts, sink);
    emit(PassedAlertEvent{alert, site_id}, sink);
}

void Engine::finish(EventSink& sink) {
    for (std::size_t v = 0; v < vertex_sites_.size(); ++v)
        flush_site(vertex_sites_[v], "vertex:" + graph_.exploits()[v].id, stream_max_ts_, sink);
    // Flush signature sites in name order; LRU order depends on traffic and
    // would not replay identically.
    std::vector<std::pair<std::string, Site*>> live;
    live.reserve(sig_sites_.size());
    for (auto& [sig, entry] : sig_sites_)
        live.emplace_back(sig, entry.site.get());
    std::sort(live.begin(), live.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [sig, site] : live)
        flush_site(*site, "sig:" + sig, stream_max_ts_, sink);
}

std::int64_t Engine::open_suppressed() const {
    std::int64_t open = 0;
    for (const auto& site : vertex_sites_)
        open += site.counter.suppressed();
    for (const auto& [sig, entry] : sig_sites_)
        open += entry.site->counter.suppressed();
    return open;
}

namespace {

class CollectingSink : public EventSink {
public:
    explicit CollectingSink(RunResult& out) : out_(out) {}
    void on_event(const OutputEvent& ev, std::string_view line) override {
        out_.log.push_back(ev);
        out_.lines.emplace_back(line);
    }

private:
    RunResult& out_;
};

} // namespace

RunResult run_stream(const AttackGraph& graph, const EngineConfig& config,
                     std::span<const Alert> alerts) {
    RunResult result;
    Engine engine(graph, config);
    CollectingSink sink(result);
    for (const Alert& a : alerts)
        engine.process_alert(a, sink);
    engine.finish(sink);
    result.stats = engine.stats();
    result.graph = engine.correlation();
    return result;
}

} // namespace quench
