#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "logcorr/agent.hpp"
#include "logcorr/collector.hpp"
#include "logcorr/engine.hpp"
#include "logcorr/error.hpp"
#include "logcorr/evaluator.hpp"
#include "logcorr/ingest.hpp"
#include "logcorr/net.hpp"
#include "logcorr/simulator.hpp"
#include "logcorr/wire.hpp"

namespace fs = std::filesystem;
using namespace logcorr;

namespace {

// Exit contract: 0 benign/success, 2 suspicious, 1 any error.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitSuspicious = 2;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw Error(ErrorCode::Io, "short write to " + path.string());
    }
}

std::string fixed4(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    return buf;
}

TraceMatrix load_matrix(const fs::path& path, bool forward_fill,
                        std::uint32_t interval) {
    ParseOptions options;
    options.forward_fill = forward_fill;
    options.interval = interval;
    return align(parse_trace_file(read_file(path), options));
}

// Truncation warnings belong on stderr so report files stay clean.
void warn_truncations(const TraceMatrix& matrix) {
    for (std::size_t h = 0; h < matrix.hosts.size(); ++h) {
        const ChangeVector cv =
            binarize(SizeTrace{matrix.hosts[h], matrix.interval, matrix.data[h]});
        if (!cv.truncations.empty()) {
            std::cerr << "logcorr: warning: host " << matrix.hosts[h]
                      << " log size decreased at " << cv.truncations.size()
                      << " tick(s); counting decreases as changes\n";
        }
    }
}

struct SimulateArgs {
    std::string kind;
    std::string out_dir;
    ScenarioConfig config;
    bool no_transfer = false;
    bool no_flood = false;
};

int run_simulate(const SimulateArgs& args) {
    ScenarioConfig config = args.config;
    const auto kind = scenario_kind_from_string(args.kind);
    if (!kind) {
        throw Error(ErrorCode::InvalidConfig,
                    "unknown --kind '" + args.kind +
                        "' (normal_chat, normal_file_transfer, bot_commands, bot_flood)");
    }
    config.kind = *kind;
    if (args.no_transfer) config.transfer.reset();
    if (args.no_flood) config.flood.reset();

    const std::vector<SizeTrace> traces = simulate(config);
    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);
    write_file(dir / "trace.csv", emit_trace_file(traces));
    write_file(dir / "manifest.json", manifest_json(config));
    std::cout << "wrote " << (dir / "trace.csv").string() << " (" << traces.size()
              << " hosts, " << traces.front().sizes.size() << " samples)\n";
    return kExitOk;
}

int run_ingest(const std::string& in, const std::string& out,
               const std::string& normalize_out, bool forward_fill,
               std::uint32_t interval) {
    ParseOptions options;
    options.forward_fill = forward_fill;
    options.interval = interval;
    const std::vector<SizeTrace> traces = parse_trace_file(read_file(in), options);
    for (const SizeTrace& trace : traces) {
        const std::uint64_t max =
            *std::max_element(trace.sizes.begin(), trace.sizes.end());
        std::cout << "host=" << trace.host_id << " samples=" << trace.sizes.size()
                  << " max=" << max << "\n";
    }
    if (!out.empty()) {
        write_file(out, emit_trace_file(traces));
    }
    if (!normalize_out.empty()) {
        std::string csv = "host,t,value\n";
        for (const SizeTrace& trace : traces) {
            const NormalizedTrace normalized = normalize_to_100(trace);
            if (normalized.degenerate) {
                std::cerr << "logcorr: warning: host " << trace.host_id
                          << " never grew; normalized trace is all zeros\n";
            }
            for (std::size_t t = 0; t < normalized.values.size(); ++t) {
                csv += trace.host_id + "," + std::to_string(t) + "," +
                       fixed4(normalized.values[t]) + "\n";
            }
            std::cout << "host=" << trace.host_id << " scale=" << normalized.scale
                      << "\n";
        }
        write_file(normalize_out, csv);
    }
    return kExitOk;
}

int run_correlate(const std::string& in, const std::string& out, bool forward_fill,
                  std::uint32_t interval) {
    const TraceMatrix matrix = load_matrix(in, forward_fill, interval);
    warn_truncations(matrix);
    const CorrelationSequence seq = correlate(matrix);
    write_file(out, write_correlation_report(seq));
    std::cout << "cv=" << seq.cv << " ucv=" << seq.ucv << " zeros=" << seq.zeros_count
              << " ones=" << seq.ones_count << " ratio=" << fixed4(seq.ratio()) << "\n";
    return kExitOk;
}

int run_detect(const std::string& in, double threshold, bool forward_fill,
               std::uint32_t interval) {
    const TraceMatrix matrix = load_matrix(in, forward_fill, interval);
    warn_truncations(matrix);
    const DetectionResult result = detect(correlate(matrix), threshold);
    std::cout << format_detection_record(result) << "\n";
    return result.verdict == Verdict::Suspicious ? kExitSuspicious : kExitOk;
}

int run_roc(const std::string& runs_dir, const std::string& out,
            std::vector<double> thresholds) {
    std::vector<fs::path> run_dirs;
    for (const auto& entry : fs::directory_iterator(runs_dir)) {
        if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
            run_dirs.push_back(entry.path());
        }
    }
    if (run_dirs.empty()) {
        throw Error(ErrorCode::Io, "no run directories with manifest.json under " +
                                       runs_dir);
    }
    std::sort(run_dirs.begin(), run_dirs.end());

    std::vector<LabeledRun> runs;
    runs.reserve(run_dirs.size());
    for (const fs::path& dir : run_dirs) {
        const Manifest manifest = parse_manifest(read_file(dir / "manifest.json"));
        ParseOptions options;
        options.interval = manifest.config.interval;
        const TraceMatrix matrix =
            align(parse_trace_file(read_file(dir / "trace.csv"), options));
        const CorrelationSequence seq = correlate(matrix);
        runs.push_back(LabeledRun{dir.filename().string(), manifest.truth, seq.ratio()});
    }

    if (thresholds.empty()) thresholds = default_threshold_grid();
    const std::vector<RocPoint> points = roc_sweep(runs, std::move(thresholds));
    write_file(out, write_roc_csv(points));
    std::cout << "runs=" << runs.size() << " auc=" << fixed4(auc(points)) << "\n";
    return kExitOk;
}

int run_agent(const std::string& host_id, const std::string& path,
              std::uint32_t interval, std::uint32_t duration,
              const std::string& connect) {
    TcpLineClient client(parse_endpoint(connect));
    WatchSpec spec{host_id, fs::path(path), interval, duration};
    const SampleSummary summary = sample_loop(
        spec, [&client](const std::string& line) { return client.send_line(line); });
    if (summary.aborted) {
        std::cerr << "logcorr: collector closed the connection after "
                  << summary.ticks_emitted << " tick(s)\n";
        return kExitError;
    }
    client.send_line(encode_end(host_id));
    client.close();
    std::cout << "ticks=" << summary.ticks_emitted
              << " degraded=" << summary.degraded_ticks << "\n";
    return kExitOk;
}

int run_collect(const std::string& listen, std::size_t hosts, std::uint32_t window,
                const std::string& out) {
    const Endpoint endpoint = parse_endpoint(listen);
    CollectorServer server(endpoint.host, endpoint.port);
    CollectOptions options;
    options.expected_hosts = hosts;
    options.window = std::chrono::milliseconds(1000) * window;
    const CollectResult result = server.run(options);

    write_file(out, emit_trace_file(result.traces));
    if (result.timed_out) {
        std::cerr << "logcorr: warning: window elapsed with "
                  << result.traces.size() << "/" << hosts
                  << " host(s) finished; partial traces written\n";
    }
    if (result.malformed_dropped > 0) {
        std::cerr << "logcorr: warning: dropped " << result.malformed_dropped
                  << " malformed line(s)\n";
    }
    if (result.duplicate_connections > 0) {
        std::cerr << "logcorr: warning: rejected " << result.duplicate_connections
                  << " duplicate host connection(s)\n";
    }
    std::cout << "hosts=" << result.traces.size() << " timed_out="
              << (result.timed_out ? 1 : 0) << " dropped=" << result.malformed_dropped
              << " filled_gaps=" << result.filled_gaps << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-host log-size correlation toolkit: sample log sizes, "
                 "binarize changes, classify correlated activity, and score "
                 "detection thresholds.",
                 "logcorr"};
    app.require_subcommand(1);
    int exit_code = kExitOk;

    // simulate
    auto* sim = app.add_subcommand(
        "simulate", "Synthesize a seeded scenario into trace.csv + manifest.json");
    auto sim_args = std::make_shared<SimulateArgs>();
    sim->add_option("--kind", sim_args->kind,
                    "normal_chat | normal_file_transfer | bot_commands | bot_flood")
        ->required();
    sim->add_option("--out", sim_args->out_dir, "Output directory")->required();
    sim->add_option("--seed", sim_args->config.seed, "RNG seed");
    sim->add_option("--hosts", sim_args->config.hosts, "Host count (default 3)");
    sim->add_option("--duration", sim_args->config.duration, "Seconds (default 600)");
    sim->add_option("--interval", sim_args->config.interval,
                    "Seconds per sample (default 1)");
    sim->add_option("--chat-rate", sim_args->config.chat_rate,
                    "Messages per host per second (default 0.2)");
    sim->add_option("--msg-min", sim_args->config.msg_bytes.first,
                    "Min bytes per message (default 40)");
    sim->add_option("--msg-max", sim_args->config.msg_bytes.second,
                    "Max bytes per message (default 200)");
    sim->add_option("--transfer-start", sim_args->config.transfer->start,
                    "File-transfer start second (default 300)");
    sim->add_option("--transfer-duration", sim_args->config.transfer->duration,
                    "File-transfer length in seconds (default 60)");
    sim->add_option("--transfer-bps", sim_args->config.transfer->bytes_per_second,
                    "File-transfer bytes per second (default 4000)");
    sim->add_option("--flood-start", sim_args->config.flood->start,
                    "Flood start second (default 240)");
    sim->add_option("--flood-bps", sim_args->config.flood->bytes_per_second,
                    "Flood bytes per second per bot (default 1500)");
    sim->add_option("--idle", sim_args->config.idle,
                    "Bot idle prefix in seconds (default 120)");
    sim->add_option("--cmd-rate", sim_args->config.cmd_rate,
                    "Herder commands per second after idle (default 0.1)");
    sim->add_option("--jitter", sim_args->config.response_jitter,
                    "Max per-bot response delay in ticks (default 1)");
    sim->add_flag("--no-transfer", sim_args->no_transfer, "Disable the file transfer");
    sim->add_flag("--no-flood", sim_args->no_flood, "Disable the flood");
    sim->callback([&exit_code, sim_args] { exit_code = run_simulate(*sim_args); });

    // ingest
    auto* ing = app.add_subcommand("ingest",
                                   "Validate a trace CSV and emit canonical output");
    auto ing_in = std::make_shared<std::string>();
    auto ing_out = std::make_shared<std::string>();
    auto ing_norm = std::make_shared<std::string>();
    auto ing_fill = std::make_shared<bool>(false);
    auto ing_interval = std::make_shared<std::uint32_t>(1);
    ing->add_option("--in", *ing_in, "Trace CSV")->required();
    ing->add_option("--out", *ing_out, "Write canonicalized trace CSV here");
    ing->add_option("--normalize-out", *ing_norm,
                    "Write per-host 0..100 normalized values here");
    ing->add_flag("--forward-fill", *ing_fill, "Fill missing ticks with the last size");
    ing->add_option("--interval", *ing_interval, "Seconds per tick (default 1)");
    ing->callback([=, &exit_code] {
        exit_code = run_ingest(*ing_in, *ing_out, *ing_norm, *ing_fill, *ing_interval);
    });

    // correlate
    auto* cor = app.add_subcommand("correlate",
                                   "Label every time step and write the report CSV");
    auto cor_in = std::make_shared<std::string>();
    auto cor_out = std::make_shared<std::string>();
    auto cor_fill = std::make_shared<bool>(false);
    auto cor_interval = std::make_shared<std::uint32_t>(1);
    cor->add_option("--in", *cor_in, "Trace CSV")->required();
    cor->add_option("--out", *cor_out, "Report CSV destination")->required();
    cor->add_flag("--forward-fill", *cor_fill, "Fill missing ticks with the last size");
    cor->add_option("--interval", *cor_interval, "Seconds per tick (default 1)");
    cor->callback([=, &exit_code] {
        exit_code = run_correlate(*cor_in, *cor_out, *cor_fill, *cor_interval);
    });

    // detect
    auto* det = app.add_subcommand(
        "detect", "Print the detection record; exit 2 when suspicious");
    auto det_in = std::make_shared<std::string>();
    auto det_threshold = std::make_shared<double>(0.7);
    auto det_fill = std::make_shared<bool>(false);
    auto det_interval = std::make_shared<std::uint32_t>(1);
    det->add_option("--in", *det_in, "Trace CSV")->required();
    det->add_option("--threshold", *det_threshold,
                    "Correlated-fraction threshold in [0,1] (default 0.7)");
    det->add_flag("--forward-fill", *det_fill, "Fill missing ticks with the last size");
    det->add_option("--interval", *det_interval, "Seconds per tick (default 1)");
    det->callback([=, &exit_code] {
        exit_code = run_detect(*det_in, *det_threshold, *det_fill, *det_interval);
    });

    // roc
    auto* roc = app.add_subcommand(
        "roc", "Sweep thresholds over a directory of simulated runs");
    auto roc_runs = std::make_shared<std::string>();
    auto roc_out = std::make_shared<std::string>();
    auto roc_thresholds = std::make_shared<std::vector<double>>();
    roc->add_option("--runs", *roc_runs,
                    "Directory of run directories (trace.csv + manifest.json)")
        ->required();
    roc->add_option("--out", *roc_out, "ROC CSV destination")->required();
    roc->add_option("--thresholds", *roc_thresholds,
                    "Comma-separated thresholds (default 0.00,0.05,...,1.00)")
        ->delimiter(',');
    roc->callback([=, &exit_code] {
        exit_code = run_roc(*roc_runs, *roc_out, *roc_thresholds);
    });

    // agent
    auto* agent = app.add_subcommand(
        "agent", "Poll one log file's size and stream samples to a collector");
    auto agent_host = std::make_shared<std::string>();
    auto agent_path = std::make_shared<std::string>();
    auto agent_interval = std::make_shared<std::uint32_t>(1);
    auto agent_duration = std::make_shared<std::uint32_t>(0);
    auto agent_connect = std::make_shared<std::string>();
    agent->add_option("--host-id", *agent_host, "Identifier sent with every sample")
        ->required();
    agent->add_option("--path", *agent_path, "Log file to watch")->required();
    agent->add_option("--interval", *agent_interval, "Seconds per sample (default 1)");
    agent->add_option("--duration", *agent_duration, "Observation window in seconds")
        ->required();
    agent->add_option("--connect", *agent_connect, "Collector address host:port")
        ->required();
    agent->callback([=, &exit_code] {
        exit_code = run_agent(*agent_host, *agent_path, *agent_interval,
                              *agent_duration, *agent_connect);
    });

    // collect
    auto* col = app.add_subcommand(
        "collect", "Receive agent streams and assemble a trace CSV");
    auto col_listen = std::make_shared<std::string>();
    auto col_hosts = std::make_shared<std::size_t>(2);
    auto col_window = std::make_shared<std::uint32_t>(60);
    auto col_out = std::make_shared<std::string>();
    col->add_option("--listen", *col_listen, "Bind address host:port")->required();
    col->add_option("--hosts", *col_hosts, "Expected host count")->required();
    col->add_option("--window", *col_window, "Collection window in seconds")
        ->required();
    col->add_option("--out", *col_out, "Trace CSV destination")->required();
    col->callback([=, &exit_code] {
        exit_code = run_collect(*col_listen, *col_hosts, *col_window, *col_out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "logcorr: " << e.what() << "\n";
        return kExitError;
    } catch (const Error& e) {
        std::cerr << "logcorr: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "logcorr: " << e.what() << "\n";
        return kExitError;
    }
    return exit_code;
}
