#include "quench/ndjson.hpp"

#include <optional>

#include "quench/errors.hpp"

namespace quench::ndjson {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

Alert alert_from_json(const json& rec, std::size_t line_no) {
    const std::string where = "alerts line " + std::to_string(line_no);
    if (!rec.is_object())
        throw ParseError(where + ": record must be an object");
    auto ts_it = rec.find("ts");
    if (ts_it == rec.end() || !ts_it->is_number())
        throw ParseError(where + ": missing or non-numeric 'ts'");
    Alert a;
    try {
        a.ts = ts_from_seconds(ts_it->get<double>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(where + ": " + e.what());
    }
    auto str_field = [&](const char* key) -> std::string {
        auto it = rec.find(key);
        if (it == rec.end() || !it->is_string())
            throw ParseError(where + ": missing or non-string '" + std::string(key) + "'");
        return it->get<std::string>();
    };
    a.signature = str_field("sig");
    a.src = str_field("src");
    a.dst = str_field("dst");
    if (!is_valid_ipv4(a.src))
        throw ParseError(where + ": bad src address '" + a.src + "'");
    if (!is_valid_ipv4(a.dst))
        throw ParseError(where + ": bad dst address '" + a.dst + "'");
    if (auto it = rec.find("attrs"); it != rec.end()) {
        if (!it->is_object())
            throw ParseError(where + ": 'attrs' must be an object");
        for (const auto& [k, v] : it->items()) {
            if (!v.is_string())
                throw ParseError(where + ": attrs values must be strings");
            a.attrs.emplace(k, v.get<std::string>());
        }
    }
    return a;
}

} // namespace

void for_each_alert(std::istream& in, const std::function<void(Alert&&)>& fn) {
    std::string line;
    std::size_t line_no = 0;
    std::int64_t next_id = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError("alerts line " + std::to_string(line_no) + ": " + e.what());
        }
        Alert a = alert_from_json(rec, line_no);
        a.id = next_id++;
        fn(std::move(a));
    }
    if (in.bad())
        throw IoError("read failure on alert stream at line " + std::to_string(line_no));
}

std::vector<Alert> read_alerts(std::istream& in) {
    std::vector<Alert> alerts;
    for_each_alert(in, [&](Alert&& a) { alerts.push_back(std::move(a)); });
    return alerts;
}

std::string alert_line(const Alert& alert) {
    ordered_json rec;
    rec["ts"] = ts_to_seconds(alert.ts);
    rec["sig"] = alert.signature;
    rec["src"] = alert.src;
    rec["dst"] = alert.dst;
    if (!alert.attrs.empty()) {
        ordered_json attrs;
        for (const auto& [k, v] : alert.attrs)
            attrs[k] = v;
        rec["attrs"] = std::move(attrs);
    }
    return rec.dump();
}

nlohmann::ordered_json node_to_json(const CorrNode& node) {
    ordered_json j;
    j["id"] = node.id;
    switch (node.kind) {
    case CorrNode::Kind::real:
        j["kind"] = "real";
        j["vertex"] = node.vertex;
        j["alert"] = node.alert_id;
        j["ts"] = ts_to_seconds(node.ts);
        j["sig"] = node.signature;
        break;
    case CorrNode::Kind::hypothesized:
        j["kind"] = "hypothesized";
        j["vertex"] = node.vertex;
        break;
    case CorrNode::Kind::condition:
        j["kind"] = "condition";
        j["condition"] = node.vertex;
        break;
    }
    return j;
}

CorrNode node_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("id") || !j.contains("kind"))
        throw ParseError("correlation node: missing 'id'/'kind'");
    CorrNode n;
    n.id = j.at("id").get<std::string>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "real") {
        n.kind = CorrNode::Kind::real;
        n.vertex = j.at("vertex").get<std::string>();
        n.alert_id = j.value("alert", std::int64_t{-1});
        n.ts = ts_from_seconds(j.value("ts", 0.0));
        n.signature = j.value("sig", std::string{});
    } else if (kind == "hypothesized") {
        n.kind = CorrNode::Kind::hypothesized;
        n.vertex = j.at("vertex").get<std::string>();
    } else if (kind == "condition") {
        n.kind = CorrNode::Kind::condition;
        n.vertex = j.at("condition").get<std::string>();
    } else {
        throw ParseError("correlation node: unknown kind '" + kind + "'");
    }
    return n;
}

std::string event_line(const OutputEvent& ev) {
    ordered_json j;
    if (const auto* p = std::get_if<PassedAlertEvent>(&ev)) {
        j["type"] = "alert";
        j["ts"] = ts_to_seconds(p->alert.ts);
        j["id"] = p->alert.id;
        j["sig"] = p->alert.signature;
        j["src"] = p->alert.src;
        j["dst"] = p->alert.dst;
        if (!p->alert.attrs.empty()) {
            ordered_json attrs;
            for (const auto& [k, v] : p->alert.attrs)
                attrs[k] = v;
            j["attrs"] = std::move(attrs);
        }
        j["site"] = p->site;
    } else if (const auto* s = std::get_if<SuppressedEvent>(&ev)) {
        j["type"] = "suppressed";
        j["ts"] = ts_to_seconds(s->ts);
        j["filter"] = s->site;
        j["count"] = s->count;
        j["first_ts"] = ts_to_seconds(s->first_ts);
        j["last_ts"] = ts_to_seconds(s->last_ts);
    } else if (const auto* c = std::get_if<CorrelationDeltaEvent>(&ev)) {
        j["type"] = "correlation";
        j["ts"] = ts_to_seconds(c->ts);
        j["nodes"] = ordered_json::array();
        for (const auto& n : c->nodes)
            j["nodes"].push_back(node_to_json(n));
        j["edges"] = ordered_json::array();
        for (const auto& e : c->edges)
            j["edges"].push_back({{"from", e.from}, {"to", e.to}});
    } else if (const auto* err = std::get_if<ErrorEvent>(&ev)) {
        j["type"] = "error";
        j["ts"] = ts_to_seconds(err->ts);
        j["kind"] = err->kind;
        j["detail"] = err->detail;
    }
    return j.dump();
}

} // namespace quench::ndjson
