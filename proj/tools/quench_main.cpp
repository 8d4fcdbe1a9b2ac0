#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "quench/attack_graph.hpp"
#include "quench/engine.hpp"
#include "quench/errors.hpp"
#include "quench/export.hpp"
#include "quench/floodgen.hpp"
#include "quench/ndjson.hpp"

namespace fs = std::filesystem;
using namespace quench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1; // parse / validation failures
constexpr int kExitIo = 2;      // filesystem / stream failures

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError("read failure on " + path.string());
    return buf.str();
}

// Write-to-temp + rename so failures never leave partial output behind.
void atomic_write(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failure on " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

// Streams event lines into <out>/events.ndjson.tmp; commit() renames it in place.
class FileSink : public EventSink {
public:
    explicit FileSink(fs::path final_path) : final_(std::move(final_path)), tmp_(final_) {
        tmp_ += ".tmp";
        out_.open(tmp_, std::ios::binary | std::ios::trunc);
        if (!out_)
            throw IoError("cannot open " + tmp_.string());
    }
    ~FileSink() override {
        if (!committed_) {
            out_.close();
            std::error_code ec;
            fs::remove(tmp_, ec);
        }
    }
    void on_event(const OutputEvent&, std::string_view line) override {
        out_.write(line.data(), static_cast<std::streamsize>(line.size()));
        out_.put('\n');
        if (!out_)
            throw IoError("write failure on " + tmp_.string());
    }
    void commit() {
        out_.flush();
        out_.close();
        if (out_.fail())
            throw IoError("write failure on " + tmp_.string());
        std::error_code ec;
        fs::rename(tmp_, final_, ec);
        if (ec)
            throw IoError("cannot rename " + tmp_.string() + ": " + ec.message());
        committed_ = true;
    }

private:
    fs::path final_;
    fs::path tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

struct RunOptions {
    std::string graph_file;
    std::string alerts_file;
    std::string out_dir;
    std::string vertex_rate = "2";
    std::int64_t vertex_burst = 20;
    std::string sig_rate = "2";
    std::int64_t sig_burst = 20;
    bool no_hypothesize = false;
    bool drop_unmapped = false;
    bool no_throttle = false;
};

int cmd_run(const RunOptions& opt) {
    const AttackGraph graph = AttackGraph::load(read_file(opt.graph_file));

    EngineConfig config;
    config.vertex_rate = Rational::from_decimal(opt.vertex_rate);
    config.vertex_burst = opt.vertex_burst;
    config.sig_rate = Rational::from_decimal(opt.sig_rate);
    config.sig_burst = opt.sig_burst;
    config.hypothesize = !opt.no_hypothesize;
    config.drop_unmapped = opt.drop_unmapped;
    config.throttle = !opt.no_throttle;
    config.validate();

    std::ifstream alerts_in(opt.alerts_file, std::ios::binary);
    if (!alerts_in)
        throw IoError("cannot open " + opt.alerts_file);

    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec)
        throw IoError("cannot create " + opt.out_dir + ": " + ec.message());
    const fs::path out_dir(opt.out_dir);

    Engine engine(graph, config);
    FileSink events(out_dir / "events.ndjson");

    const auto started = std::chrono::steady_clock::now();
    ndjson::for_each_alert(alerts_in, [&](Alert&& a) { engine.process_alert(a, events); });
    engine.finish(events);
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - started;

    events.commit();
    atomic_write(out_dir / "stats.json", stats_to_json(engine.stats()).dump(2) + "\n");
    atomic_write(out_dir / "correlation.json", correlation_to_json(engine.correlation()).dump(2) + "\n");
    atomic_write(out_dir / "correlation.dot", to_dot(engine.correlation()));
    // Machine-dependent; kept out of stats.json so replays stay byte-identical.
    nlohmann::ordered_json timing;
    timing["wall_seconds"] = wall.count();
    timing["note"] = "machine-dependent";
    atomic_write(out_dir / "timing.json", timing.dump(2) + "\n");

    std::cerr << "processed " << engine.stats().total_in << " alerts, passed "
              << engine.stats().passed_total() << ", reduction "
              << engine.stats().reduction_ratio() << "\n";
    return kExitOk;
}

int cmd_gen(const std::string& spec_file, const std::string& out_file) {
    const GenSpec spec = parse_gen_spec(read_file(spec_file));
    const std::vector<Alert> alerts = generate(spec);
    std::string content;
    for (const Alert& a : alerts) {
        content += ndjson::alert_line(a);
        content += '\n';
    }
    atomic_write(out_file, content);
    std::cerr << "wrote " << alerts.size() << " alerts to " << out_file << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& graph_file) {
    const AttackGraph graph = AttackGraph::load(read_file(graph_file));
    std::cout << "OK: " << graph.exploits().size() << " exploits, " << graph.conditions().size()
              << " conditions, " << graph.edges().size() << " edges, " << graph.mapping().size()
              << " mapping rules\n";
    return kExitOk;
}

int cmd_export(const std::string& run_dir, const std::string& format) {
    const fs::path stored = fs::path(run_dir) / "correlation.json";
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(stored));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(stored.string() + ": " + e.what());
    }
    const CorrelationGraph graph = correlation_from_json(doc);
    if (format == "dot")
        std::cout << to_dot(graph);
    else
        std::cout << correlation_to_json(graph).dump(2) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quench - flood-resistant intrusion-alert correlation"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "Replay an alert stream through map/throttle/correlate");
    run->add_option("--graph", run_opt.graph_file, "attack graph JSON document")->required();
    run->add_option("--alerts", run_opt.alerts_file, "newline-delimited JSON alert stream")->required();
    run->add_option("--out", run_opt.out_dir, "output directory")->required();
    run->add_option("--vertex-rate", run_opt.vertex_rate, "tokens/s for per-vertex filters (default 2)");
    run->add_option("--vertex-burst", run_opt.vertex_burst, "bucket size for per-vertex filters (default 20)");
    run->add_option("--sig-rate", run_opt.sig_rate, "tokens/s for per-signature filters (default 2)");
    run->add_option("--sig-burst", run_opt.sig_burst, "bucket size for per-signature filters (default 20)");
    run->add_flag("--no-hypothesize", run_opt.no_hypothesize, "do not synthesize missed attack steps");
    run->add_flag("--drop-unmapped", run_opt.drop_unmapped, "discard alerts that map to no vertex");
    run->add_flag("--no-throttle", run_opt.no_throttle, "disable all token bucket filters (control run)");

    std::string gen_spec_file, gen_out_file;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic alert corpus");
    gen->add_option("--spec", gen_spec_file, "generator spec JSON")->required();
    gen->add_option("--out", gen_out_file, "output alert file")->required();

    std::string validate_graph_file;
    auto* validate = app.add_subcommand("validate", "Validate an attack graph document");
    validate->add_option("--graph", validate_graph_file, "attack graph JSON document")->required();

    std::string export_run_dir, export_format = "dot";
    auto* exp = app.add_subcommand("export", "Render a stored correlation graph");
    exp->add_option("--run", export_run_dir, "run output directory")->required();
    exp->add_option("--format", export_format, "dot|json")->check(CLI::IsMember({"dot", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed())
            return cmd_run(run_opt);
        if (gen->parsed())
            return cmd_gen(gen_spec_file, gen_out_file);
        if (validate->parsed())
            return cmd_validate(validate_graph_file);
        if (exp->parsed())
            return cmd_export(export_run_dir, export_format);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) { // parse/validation/config failures
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitOk;
}
