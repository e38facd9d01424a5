#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "logcorr/error.hpp"
#include "logcorr/ingest.hpp"
#include "logcorr/rng.hpp"
#include "logcorr/simulator.hpp"

using namespace logcorr;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::Io;
}

// Random valid trace set for the round-trip property.
std::vector<SizeTrace> random_traces(SplitMix64& rng) {
    const std::size_t hosts = 2 + rng.uniform_below(4);
    std::vector<SizeTrace> traces;
    for (std::size_t h = 0; h < hosts; ++h) {
        SizeTrace trace;
        trace.host_id = "h" + std::to_string(h);
        const std::size_t len = 2 + rng.uniform_below(40);
        std::uint64_t size = rng.uniform_below(50);
        for (std::size_t t = 0; t < len; ++t) {
            if (rng.uniform_below(2) == 0) size += rng.uniform_below(100);
            trace.sizes.push_back(size);
        }
        traces.push_back(std::move(trace));
    }
    return traces;
}

} // namespace

TEST_CASE("parses a two-host file") {
    const auto traces = parse_trace_file("host,t,size\nA,0,10\nA,1,12\nB,0,5\nB,1,5\n");
    REQUIRE(traces.size() == 2);
    CHECK(traces[0].host_id == "A");
    CHECK(traces[0].sizes == std::vector<std::uint64_t>{10, 12});
    CHECK(traces[1].host_id == "B");
    CHECK(traces[1].sizes == std::vector<std::uint64_t>{5, 5});
}

TEST_CASE("rejects non-monotonic time") {
    CHECK(code_of([] { parse_trace_file("host,t,size\nA,0,10\nA,0,11\n"); }) ==
          ErrorCode::NonMonotonicTime);
    CHECK(code_of([] { parse_trace_file("host,t,size\nA,3,10\nA,2,11\n"); }) ==
          ErrorCode::NonMonotonicTime);
}

TEST_CASE("rejects malformed input") {
    CHECK(code_of([] { parse_trace_file(""); }) == ErrorCode::EmptyFile);
    CHECK(code_of([] { parse_trace_file("host,t,size\n"); }) == ErrorCode::EmptyFile);
    CHECK(code_of([] { parse_trace_file("time,host,bytes\nA,0,1\n"); }) ==
          ErrorCode::MalformedRow);
    CHECK(code_of([] { parse_trace_file("host,t,size\nA,0\n"); }) ==
          ErrorCode::MalformedRow);
    CHECK(code_of([] { parse_trace_file("host,t,size\nA,zero,1\n"); }) ==
          ErrorCode::MalformedRow);
    CHECK(code_of([] { parse_trace_file("host,t,size\nA,0,1,9\n"); }) ==
          ErrorCode::MalformedRow);
    CHECK(code_of([] { parse_trace_file("host,t,size\n,0,1\n"); }) ==
          ErrorCode::MalformedRow);
    CHECK(code_of([] { parse_trace_file("host,t,size\nA,0,12.5\n"); }) ==
          ErrorCode::MalformedRow);
}

TEST_CASE("reports the offending line number") {
    try {
        parse_trace_file("host,t,size\nA,0,10\nA,1,bad\n");
        FAIL("expected an Error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("negative size is its own error") {
    CHECK(code_of([] { parse_trace_file("host,t,size\nA,0,-5\n"); }) ==
          ErrorCode::NegativeSize);
    // negative t is just malformed
    CHECK(code_of([] { parse_trace_file("host,t,size\nA,-1,5\n"); }) ==
          ErrorCode::MalformedRow);
}

TEST_CASE("gap in ticks fails without forward fill") {
    const std::string csv = "host,t,size\nA,0,1\nA,1,2\nA,3,4\n";
    CHECK(code_of([&] { parse_trace_file(csv); }) == ErrorCode::MissingSample);

    ParseOptions fill;
    fill.forward_fill = true;
    const auto traces = parse_trace_file(csv, fill);
    REQUIRE(traces.size() == 1);
    CHECK(traces[0].sizes == std::vector<std::uint64_t>{1, 2, 2, 4});
}

TEST_CASE("a trace must start at t=0") {
    ParseOptions fill;
    fill.forward_fill = true;
    CHECK(code_of([&] { parse_trace_file("host,t,size\nA,1,5\nA,2,6\n", fill); }) ==
          ErrorCode::MissingSample);
}

TEST_CASE("align truncates to the shortest trace") {
    std::vector<SizeTrace> traces{
        {"A", 1, {1, 2, 3}},
        {"B", 1, {4, 4}},
    };
    const TraceMatrix matrix = align(traces);
    CHECK(matrix.hosts == std::vector<std::string>{"A", "B"});
    CHECK(matrix.columns == 2);
    CHECK(matrix.data[0] == std::vector<std::uint64_t>{1, 2});
    CHECK(matrix.data[1] == std::vector<std::uint64_t>{4, 4});
}

TEST_CASE("align needs two hosts and a common interval") {
    CHECK(code_of([] { align({{"A", 1, {1, 2}}}); }) == ErrorCode::TooFewHosts);
    CHECK(code_of([] {
        align({{"A", 1, {1, 2}}, {"B", 2, {1, 2}}});
    }) == ErrorCode::IntervalMismatch);
    CHECK(code_of([] {
        align({{"A", 1, {1, 2}}, {"A", 1, {1, 2}}});
    }) == ErrorCode::DuplicateHost);
}

TEST_CASE("align canonicalizes host order regardless of input order") {
    SplitMix64 rng(2024);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<SizeTrace> traces = random_traces(rng);
        std::vector<SizeTrace> shuffled = traces;
        for (std::size_t i = shuffled.size(); i > 1; --i) {
            std::swap(shuffled[i - 1], shuffled[rng.uniform_below(i)]);
        }
        CHECK(align(traces) == align(shuffled));
    }
}

TEST_CASE("normalize maps the maximum to exactly 100") {
    const NormalizedTrace n = normalize_to_100({"A", 1, {100, 275085, 5}});
    CHECK(n.scale == 275085);
    CHECK(n.values[1] == 100.0);
    CHECK_FALSE(n.degenerate);
}

TEST_CASE("normalize halves a half-max sample") {
    const NormalizedTrace n = normalize_to_100({"A", 1, {2754, 1377}});
    CHECK(n.scale == 2754);
    CHECK(n.values == std::vector<double>{100.0, 50.0});
}

TEST_CASE("normalize flags an all-zero trace instead of failing") {
    const NormalizedTrace n = normalize_to_100({"A", 1, {0, 0, 0}});
    CHECK(n.degenerate);
    CHECK(n.scale == 0);
    CHECK(n.values == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("normalized shape is invariant under integer scaling") {
    SplitMix64 rng(77);
    for (int iter = 0; iter < 100; ++iter) {
        SizeTrace trace{"A", 1, {}};
        const std::size_t len = 1 + rng.uniform_below(30);
        for (std::size_t i = 0; i < len; ++i) {
            trace.sizes.push_back(rng.uniform_below(5000));
        }
        const std::uint64_t k = 1 + rng.uniform_below(1000);
        SizeTrace scaled = trace;
        for (std::uint64_t& s : scaled.sizes) s *= k;

        const NormalizedTrace a = normalize_to_100(trace);
        const NormalizedTrace b = normalize_to_100(scaled);
        CHECK(a.values == b.values);
        CHECK(b.scale == a.scale * k);

        if (!a.degenerate) {
            CHECK(*std::max_element(a.values.begin(), a.values.end()) == 100.0);
            CHECK(*std::min_element(a.values.begin(), a.values.end()) >= 0.0);
        }
    }
}

TEST_CASE("emit then parse reproduces the traces") {
    SplitMix64 rng(123);
    for (int iter = 0; iter < 100; ++iter) {
        const std::vector<SizeTrace> traces = random_traces(rng);
        CHECK(parse_trace_file(emit_trace_file(traces)) == traces);
    }
}

TEST_CASE("emit writes the documented layout") {
    const std::vector<SizeTrace> traces{{"B", 1, {5, 5}}, {"A", 1, {10, 12}}};
    CHECK(emit_trace_file(traces) == "host,t,size\nA,0,10\nA,1,12\nB,0,5\nB,1,5\n");
}

TEST_CASE("simulator output survives the CSV round trip") {
    ScenarioConfig config;
    config.kind = ScenarioKind::NormalChat;
    config.seed = 1;
    const std::vector<SizeTrace> traces = simulate(config);
    REQUIRE(traces.size() == 3);
    for (const SizeTrace& trace : traces) {
        CHECK(trace.sizes.size() == 600);
    }
    CHECK(parse_trace_file(emit_trace_file(traces)) == traces);
}
