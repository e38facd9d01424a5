#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <fstream>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "logcorr/agent.hpp"
#include "logcorr/collector.hpp"
#include "logcorr/engine.hpp"
#include "logcorr/error.hpp"
#include "logcorr/ingest.hpp"
#include "logcorr/net.hpp"
#include "logcorr/rng.hpp"
#include "logcorr/wire.hpp"

using namespace logcorr;
using namespace std::chrono_literals;

namespace {

namespace fs = std::filesystem;

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::Io;
}

// Probe that replays a scripted size sequence, one entry per tick.
AgentHooks scripted(std::vector<std::optional<std::uint64_t>> sizes,
                    std::chrono::milliseconds tick = 1ms) {
    AgentHooks hooks;
    hooks.tick_period = tick;
    auto index = std::make_shared<std::size_t>(0);
    hooks.probe_size = [sizes = std::move(sizes),
                        index](const fs::path&) -> std::optional<std::uint64_t> {
        return sizes.at((*index)++);
    };
    return hooks;
}

fs::path temp_file(const std::string& name, std::string_view content) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    return path;
}

// Stream pre-encoded lines to the collector, mimicking one agent.
void send_lines(std::uint16_t port, const std::vector<std::string>& lines,
                std::chrono::milliseconds pre_delay = 0ms) {
    std::this_thread::sleep_for(pre_delay);
    TcpLineClient client(Endpoint{"127.0.0.1", port});
    for (const std::string& line : lines) {
        if (!client.send_line(line)) return;
    }
}

std::vector<std::string> wire_lines(const std::string& host,
                                    const std::vector<std::uint64_t>& sizes) {
    std::vector<std::string> lines;
    for (std::size_t t = 0; t < sizes.size(); ++t) {
        lines.push_back(encode_sample(SizeSample{host, t, sizes[t]}));
    }
    lines.push_back(encode_end(host));
    return lines;
}

} // namespace

TEST_CASE("wire lines render as documented") {
    CHECK(encode_sample(SizeSample{"alpha", 3, 17}) == "S,alpha,3,17");
    CHECK(encode_end("alpha") == "E,alpha");
}

TEST_CASE("wire lines round-trip") {
    SplitMix64 rng(64);
    for (int iter = 0; iter < 200; ++iter) {
        SizeSample sample;
        sample.host_id = "host" + std::to_string(rng.uniform_below(1000));
        sample.t = rng.next() >> 30;
        sample.size = rng.next() >> 20;
        const auto parsed = parse_wire_line(encode_sample(sample));
        REQUIRE(parsed.has_value());
        CHECK(std::get<SizeSample>(*parsed) == sample);
    }
    const auto end = parse_wire_line(encode_end("h9"));
    REQUIRE(end.has_value());
    CHECK(std::get<EndMarker>(*end) == EndMarker{"h9"});
}

TEST_CASE("malformed wire lines are rejected, not thrown") {
    for (const char* line :
         {"", "S", "S,", "X,h,0,1", "S,h,0", "S,h,0,1,2", "S,,0,1", "S,h,a,1",
          "S,h,0,b", "S,h,0,-1", "E,", "E", "zeusbot"}) {
        CHECK_FALSE(parse_wire_line(line).has_value());
    }
    CHECK(code_of([] { encode_sample(SizeSample{"a,b", 0, 0}); }) ==
          ErrorCode::InvalidConfig);
    CHECK(code_of([] { encode_end(""); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("sample_loop emits one record per tick for a constant file") {
    const fs::path path = temp_file("logcorr_constant.log", std::string(100, 'x'));
    AgentHooks hooks;
    hooks.tick_period = 20ms;
    std::vector<std::string> records;
    const SampleSummary summary = sample_loop(
        WatchSpec{"A", path, 1, 5},
        [&records](const std::string& line) {
            records.push_back(line);
            return true;
        },
        hooks);
    CHECK(summary.ticks_emitted == 5);
    CHECK(summary.degraded_ticks == 0);
    CHECK_FALSE(summary.aborted);
    CHECK(records == std::vector<std::string>{"S,A,0,100", "S,A,1,100", "S,A,2,100",
                                              "S,A,3,100", "S,A,4,100"});
    fs::remove(path);
}

TEST_CASE("sample_loop tracks a growing file") {
    std::vector<std::string> records;
    const SampleSummary summary = sample_loop(
        WatchSpec{"A", "unused", 1, 5},
        [&records](const std::string& line) {
            records.push_back(line);
            return true;
        },
        scripted({100, 150, 200, 250, 300}));
    CHECK(summary.ticks_emitted == 5);
    CHECK(records == std::vector<std::string>{"S,A,0,100", "S,A,1,150", "S,A,2,200",
                                              "S,A,3,250", "S,A,4,300"});
}

TEST_CASE("an unreadable tick repeats the last size and counts as degraded") {
    std::vector<std::string> records;
    const SampleSummary summary = sample_loop(
        WatchSpec{"A", "unused", 1, 5},
        [&records](const std::string& line) {
            records.push_back(line);
            return true;
        },
        scripted({100, 150, std::nullopt, 250, 300}));
    CHECK(summary.ticks_emitted == 5);
    CHECK(summary.degraded_ticks == 1);
    CHECK(records[2] == "S,A,2,150");
    CHECK(records[3] == "S,A,3,250");
}

TEST_CASE("a missing file at the first tick is fatal") {
    AgentHooks hooks;
    hooks.tick_period = 1ms;
    CHECK(code_of([&] {
        sample_loop(WatchSpec{"A", "/nonexistent/logcorr.log", 1, 4},
                    [](const std::string&) { return true; }, hooks);
    }) == ErrorCode::PathVanishedAtStart);
}

TEST_CASE("a closed sink aborts with a partial summary") {
    std::size_t accepted = 0;
    const SampleSummary summary = sample_loop(
        WatchSpec{"A", "unused", 1, 6},
        [&accepted](const std::string&) { return ++accepted <= 2; },
        scripted({1, 2, 3, 4, 5, 6}));
    CHECK(summary.aborted);
    CHECK(summary.ticks_emitted == 2);
}

TEST_CASE("sample_loop validates its spec") {
    CHECK(code_of([] {
        sample_loop(WatchSpec{"A", "x", 1, 1}, [](const std::string&) { return true; });
    }) == ErrorCode::InvalidConfig);
    CHECK(code_of([] {
        sample_loop(WatchSpec{"a,b", "x", 1, 10},
                    [](const std::string&) { return true; });
    }) == ErrorCode::InvalidConfig);
}

TEST_CASE("collector assembles concurrent agent streams") {
    CollectorServer server("127.0.0.1", 0);
    const std::uint16_t port = server.port();

    std::thread a([port] { send_lines(port, wire_lines("A", {10, 12, 12, 15})); });
    std::thread b([port] { send_lines(port, wire_lines("B", {5, 5, 9, 9})); });

    CollectOptions options;
    options.expected_hosts = 2;
    options.window = 5s;
    const CollectResult result = server.run(options);
    a.join();
    b.join();

    CHECK_FALSE(result.timed_out);
    CHECK(result.malformed_dropped == 0);
    REQUIRE(result.traces.size() == 2);
    CHECK(result.traces[0].host_id == "A");
    CHECK(result.traces[0].sizes == std::vector<std::uint64_t>{10, 12, 12, 15});
    CHECK(result.traces[1].host_id == "B");
    CHECK(result.traces[1].sizes == std::vector<std::uint64_t>{5, 5, 9, 9});
}

TEST_CASE("a malformed line is dropped and the rest of the stream survives") {
    CollectorServer server("127.0.0.1", 0);
    const std::uint16_t port = server.port();

    std::thread a([port] {
        send_lines(port, {"S,A,0,10", "garbage line", "S,A,1,12", "E,A"});
    });
    std::thread b([port] { send_lines(port, wire_lines("B", {1, 1})); });

    CollectOptions options;
    options.expected_hosts = 2;
    options.window = 5s;
    const CollectResult result = server.run(options);
    a.join();
    b.join();

    CHECK(result.malformed_dropped == 1);
    REQUIRE(result.traces.size() == 2);
    CHECK(result.traces[0].sizes == std::vector<std::uint64_t>{10, 12});
}

TEST_CASE("a dropped record's tick is reconstructed from its neighbor") {
    CollectorServer server("127.0.0.1", 0);
    const std::uint16_t port = server.port();

    std::thread a([port] {
        send_lines(port, {"S,A,0,10", "S,A,1,12", "S,A,3,20", "E,A"});
    });
    std::thread b([port] { send_lines(port, wire_lines("B", {1, 1, 1, 1})); });

    CollectOptions options;
    options.expected_hosts = 2;
    options.window = 5s;
    const CollectResult result = server.run(options);
    a.join();
    b.join();

    CHECK(result.filled_gaps == 1);
    CHECK(result.traces[0].sizes == std::vector<std::uint64_t>{10, 12, 12, 20});
}

TEST_CASE("no agents means a flagged empty timeout") {
    CollectorServer server("127.0.0.1", 0);
    CollectOptions options;
    options.expected_hosts = 2;
    options.window = 150ms;
    const CollectResult result = server.run(options);
    CHECK(result.timed_out);
    CHECK(result.traces.empty());
}

TEST_CASE("a second connection for the same host is rejected") {
    CollectorServer server("127.0.0.1", 0);
    const std::uint16_t port = server.port();

    std::thread first([port] {
        TcpLineClient client(Endpoint{"127.0.0.1", port});
        client.send_line("S,A,0,1");
        std::this_thread::sleep_for(300ms); // outlive the duplicate's attempt
        client.send_line("S,A,1,2");
        client.send_line("E,A");
    });
    std::thread imposter([port] {
        send_lines(port, {"S,A,0,999", "S,A,1,999"}, 100ms);
    });

    CollectOptions options;
    options.expected_hosts = 1;
    options.window = 5s;
    const CollectResult result = server.run(options);
    first.join();
    imposter.join();

    CHECK(result.duplicate_connections == 1);
    REQUIRE(result.traces.size() == 1);
    CHECK(result.traces[0].sizes == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("a stalled host never blocks another host's ingestion") {
    CollectorServer server("127.0.0.1", 0);
    const std::uint16_t port = server.port();

    std::thread quick([port] { send_lines(port, wire_lines("A", {3, 4, 5})); });
    std::thread stalled([port] {
        TcpLineClient client(Endpoint{"127.0.0.1", port});
        client.send_line("S,B,0,1");
        std::this_thread::sleep_for(2s); // never finishes inside the window
    });

    CollectOptions options;
    options.expected_hosts = 2;
    options.window = 600ms;
    const CollectResult result = server.run(options);
    quick.join();
    stalled.join();

    CHECK(result.timed_out);
    CHECK(result.incomplete_hosts == std::vector<std::string>{"B"});
    REQUIRE(result.traces.size() == 2);
    CHECK(result.traces[0].sizes == std::vector<std::uint64_t>{3, 4, 5});
    CHECK(result.traces[1].sizes == std::vector<std::uint64_t>{1});
}

TEST_CASE("wire transport and file ingestion agree end to end") {
    const std::vector<std::uint64_t> series_a{0, 40, 40, 90, 90, 90, 120, 150};
    const std::vector<std::uint64_t> series_b{0, 25, 25, 70, 70, 99, 99, 140};

    // Path 1: agents sampling scripted sizes, streamed over TCP.
    CollectorServer server("127.0.0.1", 0);
    const std::uint16_t port = server.port();
    const auto agent = [port](const std::string& host,
                              std::vector<std::uint64_t> sizes) {
        TcpLineClient client(Endpoint{"127.0.0.1", port});
        std::vector<std::optional<std::uint64_t>> script(sizes.begin(), sizes.end());
        const SampleSummary summary = sample_loop(
            WatchSpec{host, "scripted", 1, static_cast<std::uint32_t>(sizes.size())},
            [&client](const std::string& line) { return client.send_line(line); },
            scripted(std::move(script), 2ms));
        REQUIRE_FALSE(summary.aborted);
        client.send_line(encode_end(host));
    };
    std::thread a([&] { agent("A", series_a); });
    std::thread b([&] { agent("B", series_b); });

    CollectOptions options;
    options.expected_hosts = 2;
    options.window = 5s;
    const CollectResult collected = server.run(options);
    a.join();
    b.join();
    REQUIRE_FALSE(collected.timed_out);

    // Path 2: the same series through the file parser.
    const std::vector<SizeTrace> direct =
        parse_trace_file(emit_trace_file({{"A", 1, series_a}, {"B", 1, series_b}}));

    const CorrelationSequence via_wire = correlate(align(collected.traces));
    const CorrelationSequence via_file = correlate(align(direct));
    CHECK(via_wire.labels == via_file.labels);
    CHECK(via_wire.cv == via_file.cv);
    CHECK(via_wire.ucv == via_file.ucv);
    CHECK(detect(via_wire, 0.7).verdict == detect(via_file, 0.7).verdict);
}
