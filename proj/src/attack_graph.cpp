#include "quench/attack_graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace quench {

using nlohmann::json;
using nlohmann::ordered_json;

bool host_pattern_matches(std::string_view pattern, std::string_view addr) {
    return pattern == "*" || pattern == addr;
}

namespace {

bool valid_host_pattern(std::string_view p) {
    return p == "*" || is_valid_ipv4(p);
}

std::string req_string(const json& obj, const char* key, const char* ctx) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string())
        throw ParseError(std::string(ctx) + ": missing or non-string field '" + key + "'");
    return it->get<std::string>();
}

} // namespace

std::optional<std::size_t> AttackGraph::exploit_index(std::string_view id) const {
    auto it = exploit_by_id_.find(std::string(id));
    if (it == exploit_by_id_.end())
        return std::nullopt;
    return it->second;
}

std::optional<std::size_t> AttackGraph::condition_index(std::string_view id) const {
    auto it = condition_by_id_.find(std::string(id));
    if (it == condition_by_id_.end())
        return std::nullopt;
    return it->second;
}

AttackGraph AttackGraph::build(std::vector<ExploitVertex> exploits,
                               std::vector<ConditionVertex> conditions,
                               std::vector<std::pair<std::string, std::string>> edges,
                               std::vector<MappingRule> mapping) {
    AttackGraph g;
    g.exploits_ = std::move(exploits);
    g.conditions_ = std::move(conditions);
    g.edges_ = std::move(edges);
    g.mapping_ = std::move(mapping);
    g.validate_and_index();
    return g;
}

AttackGraph AttackGraph::load(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("attack graph: ") + e.what());
    }
    if (!doc.is_object())
        throw ParseError("attack graph: top level must be an object");

    std::vector<ExploitVertex> exploits;
    std::vector<ConditionVertex> conditions;
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<MappingRule> mapping;

    if (auto it = doc.find("exploits"); it != doc.end()) {
        if (!it->is_array())
            throw ParseError("attack graph: 'exploits' must be an array");
        for (const auto& e : *it) {
            if (!e.is_object())
                throw ParseError("attack graph: exploit entries must be objects");
            exploits.push_back({req_string(e, "id", "exploit"), req_string(e, "vuln", "exploit"),
                                req_string(e, "src", "exploit"), req_string(e, "dst", "exploit")});
        }
    }
    if (auto it = doc.find("conditions"); it != doc.end()) {
        if (!it->is_array())
            throw ParseError("attack graph: 'conditions' must be an array");
        for (const auto& c : *it) {
            if (!c.is_object())
                throw ParseError("attack graph: condition entries must be objects");
            ConditionVertex v{req_string(c, "id", "condition"), req_string(c, "predicate", "condition"),
                              req_string(c, "host", "condition"), false};
            if (auto f = c.find("initial"); f != c.end()) {
                if (!f->is_boolean())
                    throw ParseError("attack graph: condition 'initial' must be boolean");
                v.initial = f->get<bool>();
            }
            conditions.push_back(std::move(v));
        }
    }
    if (auto it = doc.find("edges"); it != doc.end()) {
        if (!it->is_array())
            throw ParseError("attack graph: 'edges' must be an array");
        for (const auto& e : *it) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
                throw ParseError("attack graph: edges must be [from, to] string pairs");
            edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
        }
    }
    if (auto it = doc.find("mapping"); it != doc.end()) {
        if (!it->is_array())
            throw ParseError("attack graph: 'mapping' must be an array");
        for (const auto& m : *it) {
            if (!m.is_object())
                throw ParseError("attack graph: mapping entries must be objects");
            mapping.push_back({req_string(m, "signature", "mapping"), req_string(m, "exploit", "mapping")});
        }
    }
    return build(std::move(exploits), std::move(conditions), std::move(edges), std::move(mapping));
}

std::string AttackGraph::render() const {
    ordered_json doc;
    doc["exploits"] = ordered_json::array();
    for (const auto& e : exploits_)
        doc["exploits"].push_back({{"id", e.id}, {"vuln", e.vuln}, {"src", e.src}, {"dst", e.dst}});
    doc["conditions"] = ordered_json::array();
    for (const auto& c : conditions_)
        doc["conditions"].push_back(
            {{"id", c.id}, {"predicate", c.predicate}, {"host", c.host}, {"initial", c.initial}});
    doc["edges"] = ordered_json::array();
    for (const auto& [from, to] : edges_)
        doc["edges"].push_back({from, to});
    doc["mapping"] = ordered_json::array();
    for (const auto& m : mapping_)
        doc["mapping"].push_back({{"signature", m.signature}, {"exploit", m.exploit_id}});
    return doc.dump(2) + "\n";
}

void AttackGraph::validate_and_index() {
    exploit_by_id_.clear();
    condition_by_id_.clear();

    for (std::size_t i = 0; i < exploits_.size(); ++i) {
        const auto& e = exploits_[i];
        if (e.id.empty())
            throw ValidationError("exploit with empty id", e.id);
        if (e.vuln.empty())
            throw ValidationError("exploit '" + e.id + "' has empty vuln", e.id);
        if (!valid_host_pattern(e.src) || !valid_host_pattern(e.dst))
            throw ValidationError("exploit '" + e.id + "' has a bad host pattern", e.id);
        if (!exploit_by_id_.emplace(e.id, i).second)
            throw ValidationError("duplicate vertex id '" + e.id + "'", e.id);
    }
    for (std::size_t i = 0; i < conditions_.size(); ++i) {
        const auto& c = conditions_[i];
        if (c.id.empty())
            throw ValidationError("condition with empty id", c.id);
        if (c.predicate.empty())
            throw ValidationError("condition '" + c.id + "' has empty predicate", c.id);
        if (!valid_host_pattern(c.host))
            throw ValidationError("condition '" + c.id + "' has a bad host pattern", c.id);
        if (exploit_by_id_.count(c.id)) // ids share one namespace
            throw ValidationError("duplicate vertex id '" + c.id + "'", c.id);
        if (!condition_by_id_.emplace(c.id, i).second)
            throw ValidationError("duplicate vertex id '" + c.id + "'", c.id);
    }

    prereq_conds_.assign(exploits_.size(), {});
    conseq_conds_.assign(exploits_.size(), {});
    std::vector<std::vector<std::size_t>> cond_in(conditions_.size());  // exploits feeding a condition
    std::vector<std::vector<std::size_t>> cond_out(conditions_.size()); // exploits a condition enables

    for (const auto& [from, to] : edges_) {
        const std::string edge_name = from + " -> " + to;
        const bool from_is_exploit = exploit_by_id_.count(from) > 0;
        const bool from_is_condition = condition_by_id_.count(from) > 0;
        const bool to_is_exploit = exploit_by_id_.count(to) > 0;
        const bool to_is_condition = condition_by_id_.count(to) > 0;
        if (!from_is_exploit && !from_is_condition)
            throw ValidationError("edge endpoint '" + from + "' does not exist", edge_name);
        if (!to_is_exploit && !to_is_condition)
            throw ValidationError("edge endpoint '" + to + "' does not exist", edge_name);
        if (from_is_exploit && to_is_exploit)
            throw ValidationError("exploit -> exploit edge '" + edge_name + "' breaks bipartite alternation",
                                  edge_name);
        if (from_is_condition && to_is_condition)
            throw ValidationError("condition -> condition edge '" + edge_name + "' breaks bipartite alternation",
                                  edge_name);
        if (from_is_condition) { // prerequisite: condition -> exploit
            cond_out[condition_by_id_[from]].push_back(exploit_by_id_[to]);
            prereq_conds_[exploit_by_id_[to]].push_back(condition_by_id_[from]);
        } else { // consequence: exploit -> condition
            cond_in[condition_by_id_[to]].push_back(exploit_by_id_[from]);
            conseq_conds_[exploit_by_id_[from]].push_back(condition_by_id_[to]);
        }
    }

    // Acyclicity over the combined vertex set (Kahn).
    const std::size_t n = exploits_.size() + conditions_.size();
    auto node_id = [&](bool is_exploit, std::size_t idx) { return is_exploit ? idx : exploits_.size() + idx; };
    std::vector<std::vector<std::size_t>> adj(n);
    std::vector<std::size_t> indeg(n, 0);
    for (const auto& [from, to] : edges_) {
        std::size_t u = exploit_by_id_.count(from) ? node_id(true, exploit_by_id_[from])
                                                   : node_id(false, condition_by_id_[from]);
        std::size_t v = exploit_by_id_.count(to) ? node_id(true, exploit_by_id_[to])
                                                 : node_id(false, condition_by_id_[to]);
        adj[u].push_back(v);
        ++indeg[v];
    }
    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indeg[i] == 0)
            ready.push_back(i);
    std::size_t emitted = 0;
    while (!ready.empty()) {
        std::size_t u = ready.front();
        ready.pop_front();
        ++emitted;
        for (std::size_t v : adj[u])
            if (--indeg[v] == 0)
                ready.push_back(v);
    }
    if (emitted != n) {
        std::string cyclic;
        for (std::size_t i = 0; i < n; ++i) {
            if (indeg[i] == 0)
                continue;
            const std::string& id =
                i < exploits_.size() ? exploits_[i].id : conditions_[i - exploits_.size()].id;
            if (!cyclic.empty())
                cyclic += ", ";
            cyclic += id;
        }
        throw ValidationError("cycle involving: " + cyclic, cyclic);
    }

    for (const auto& rule : mapping_)
        if (!exploit_by_id_.count(rule.exploit_id))
            throw ValidationError("mapping rule for signature '" + rule.signature +
                                      "' names unknown exploit '" + rule.exploit_id + "'",
                                  rule.exploit_id);

    // Exploit-level adjacency through conditions, deduplicated, index order.
    auto dedupe = [](std::vector<std::size_t>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    exploit_preds_.assign(exploits_.size(), {});
    exploit_succs_.assign(exploits_.size(), {});
    for (std::size_t e = 0; e < exploits_.size(); ++e) {
        for (std::size_t c : prereq_conds_[e])
            for (std::size_t p : cond_in[c])
                exploit_preds_[e].push_back(p);
        for (std::size_t c : conseq_conds_[e])
            for (std::size_t s : cond_out[c])
                exploit_succs_[e].push_back(s);
        dedupe(exploit_preds_[e]);
        dedupe(exploit_succs_[e]);
        dedupe(prereq_conds_[e]);
        dedupe(conseq_conds_[e]);
    }

    rules_by_signature_.clear();
    for (std::size_t i = 0; i < mapping_.size(); ++i)
        rules_by_signature_[mapping_[i].signature].push_back(i);
}

std::optional<std::string> AttackGraph::map_alert(const Alert& alert) const {
    auto it = rules_by_signature_.find(alert.signature);
    if (it == rules_by_signature_.end())
        return std::nullopt;

    const ExploitVertex* best = nullptr;
    int best_specificity = -1;
    std::unordered_set<std::size_t> seen;
    for (std::size_t rule_idx : it->second) {
        const std::size_t e = exploit_by_id_.at(mapping_[rule_idx].exploit_id);
        if (!seen.insert(e).second)
            continue;
        const ExploitVertex& v = exploits_[e];
        if (!host_pattern_matches(v.src, alert.src) || !host_pattern_matches(v.dst, alert.dst))
            continue;
        const int specificity = (v.src != "*" ? 1 : 0) + (v.dst != "*" ? 1 : 0);
        if (specificity > best_specificity ||
            (specificity == best_specificity && best && v.id < best->id)) {
            best = &v;
            best_specificity = specificity;
        }
    }
    if (!best)
        return std::nullopt;
    return best->id;
}

} // namespace quench
