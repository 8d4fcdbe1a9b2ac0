#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "quench/alert.hpp"
#include "quench/errors.hpp"

namespace quench {

// Exploit vertex: a (vuln, src, dst) tuple. Host patterns are an exact
// dotted-quad or the wildcard "*".
struct ExploitVertex {
    std::string id;
    std::string vuln;
    std::string src;
    std::string dst;
};

// Security condition: prerequisite/consequence predicate on a host. Conditions
// flagged `initial` are satisfied before any alert arrives (pre-existing
// attacker capability).
struct ConditionVertex {
    std::string id;
    std::string predicate;
    std::string host;
    bool initial = false;
};

// One entry of the alert->exploit mapping: alerts carrying `signature` are
// candidates for `exploit_id` (subject to the vertex's host patterns).
struct MappingRule {
    std::string signature;
    std::string exploit_id;
};

// Bipartite DAG of exploits and security conditions plus the mapping rules.
// Immutable after a successful load/validate; safe for concurrent reads.
class AttackGraph {
public:
    // Parses the JSON graph document and validates every invariant.
    // Throws ParseError on malformed documents, ValidationError (with the
    // offending id) on cycles, non-bipartite edges, dangling endpoints or
    // duplicate ids.
    static AttackGraph load(std::string_view json_text);

    static AttackGraph build(std::vector<ExploitVertex> exploits,
                             std::vector<ConditionVertex> conditions,
                             std::vector<std::pair<std::string, std::string>> edges,
                             std::vector<MappingRule> mapping);

    // Inverse of load: render(g) parses back to an equal graph.
    std::string render() const;

    const std::vector<ExploitVertex>& exploits() const noexcept { return exploits_; }
    const std::vector<ConditionVertex>& conditions() const noexcept { return conditions_; }
    const std::vector<std::pair<std::string, std::string>>& edges() const noexcept { return edges_; }
    const std::vector<MappingRule>& mapping() const noexcept { return mapping_; }

    std::optional<std::size_t> exploit_index(std::string_view id) const;
    std::optional<std::size_t> condition_index(std::string_view id) const;

    // Exploit-level adjacency through the intermediate conditions. Index-based,
    // deduplicated, in document order.
    const std::vector<std::size_t>& exploit_preds(std::size_t e) const { return exploit_preds_.at(e); }
    const std::vector<std::size_t>& exploit_succs(std::size_t e) const { return exploit_succs_.at(e); }
    const std::vector<std::size_t>& prereq_conditions(std::size_t e) const { return prereq_conds_.at(e); }
    const std::vector<std::size_t>& consequence_conditions(std::size_t e) const { return conseq_conds_.at(e); }

    // The mapping function f: unique best-matching exploit vertex for the
    // alert, or nullopt when nothing matches. A vertex matches when some rule
    // links the alert's signature to it and both host patterns match. Ties are
    // broken by specificity (count of exact host fields), then lexicographically
    // smallest vertex id.
    std::optional<std::string> map_alert(const Alert& alert) const;

private:
    AttackGraph() = default;
    void validate_and_index();

    std::vector<ExploitVertex> exploits_;
    std::vector<ConditionVertex> conditions_;
    std::vector<std::pair<std::string, std::string>> edges_;
    std::vector<MappingRule> mapping_;

    std::unordered_map<std::string, std::size_t> exploit_by_id_;
    std::unordered_map<std::string, std::size_t> condition_by_id_;
    std::vector<std::vector<std::size_t>> exploit_preds_;
    std::vector<std::vector<std::size_t>> exploit_succs_;
    std::vector<std::vector<std::size_t>> prereq_conds_;
    std::vector<std::vector<std::size_t>> conseq_conds_;
    std::unordered_map<std::string, std::vector<std::size_t>> rules_by_signature_;
};

// "*" matches anything; otherwise exact string equality on the dotted quad.
bool host_pattern_matches(std::string_view pattern, std::string_view addr);

} // namespace quench
