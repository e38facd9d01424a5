#include "logcorr/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "logcorr/error.hpp"

namespace logcorr {

namespace {

constexpr std::string_view kHeader = "host,t,size";

// Strict base-10 unsigned parse: the whole field must be digits.
bool parse_u64(std::string_view field, std::uint64_t& out) {
    if (field.empty()) return false;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, out, 10);
    return ec == std::errc() && ptr == end;
}

bool looks_negative(std::string_view field) {
    if (field.size() < 2 || field[0] != '-') return false;
    std::uint64_t magnitude = 0;
    return parse_u64(field.substr(1), magnitude);
}

std::string row_context(std::size_t line_no) {
    return "line " + std::to_string(line_no);
}

} // namespace

std::vector<SizeTrace> parse_trace_file(std::string_view content,
                                        const ParseOptions& options) {
    if (content.empty()) {
        throw Error(ErrorCode::EmptyFile, "trace file has no content");
    }

    // Per host: samples in file order, strictly increasing t enforced on
    // the way in.
    std::map<std::string, std::vector<SizeSample>, std::less<>> by_host;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool saw_header = false;
    std::size_t data_rows = 0;

    while (pos <= content.size()) {
        const std::size_t nl = content.find('\n', pos);
        const std::string_view line =
            content.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                             : nl - pos);
        const bool last_segment = (nl == std::string_view::npos);
        pos = last_segment ? content.size() + 1 : nl + 1;
        if (last_segment && line.empty()) break; // text ended with '\n'
        ++line_no;

        if (!saw_header) {
            if (line != kHeader) {
                throw Error(ErrorCode::MalformedRow,
                            row_context(line_no) + ": expected header '" +
                                std::string(kHeader) + "'");
            }
            saw_header = true;
            continue;
        }

        const std::size_t c1 = line.find(',');
        const std::size_t c2 = c1 == std::string_view::npos
                                   ? std::string_view::npos
                                   : line.find(',', c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
            line.find(',', c2 + 1) != std::string_view::npos) {
            throw Error(ErrorCode::MalformedRow,
                        row_context(line_no) + ": expected host,t,size");
        }
        const std::string_view host_field = line.substr(0, c1);
        const std::string_view t_field = line.substr(c1 + 1, c2 - c1 - 1);
        const std::string_view size_field = line.substr(c2 + 1);

        if (host_field.empty()) {
            throw Error(ErrorCode::MalformedRow,
                        row_context(line_no) + ": empty host id");
        }

        std::uint64_t t = 0;
        if (!parse_u64(t_field, t)) {
            throw Error(ErrorCode::MalformedRow,
                        row_context(line_no) + ": bad t '" + std::string(t_field) + "'");
        }

        std::uint64_t size = 0;
        if (!parse_u64(size_field, size)) {
            if (looks_negative(size_field)) {
                throw Error(ErrorCode::NegativeSize,
                            "host " + std::string(host_field) + ", t=" +
                                std::to_string(t) + ": size " + std::string(size_field));
            }
            throw Error(ErrorCode::MalformedRow,
                        row_context(line_no) + ": bad size '" +
                            std::string(size_field) + "'");
        }

        auto& samples = by_host[std::string(host_field)];
        if (!samples.empty() && t <= samples.back().t) {
            throw Error(ErrorCode::NonMonotonicTime,
                        "host " + std::string(host_field) + ": t=" +
                            std::to_string(t) + " does not increase");
        }
        samples.push_back(SizeSample{std::string(host_field), t, size});
        ++data_rows;
    }

    if (data_rows == 0) {
        throw Error(ErrorCode::EmptyFile, "trace file has no data rows");
    }

    std::vector<SizeTrace> traces;
    traces.reserve(by_host.size());
    for (auto& [host, samples] : by_host) {
        SizeTrace trace;
        trace.host_id = host;
        trace.interval = options.interval;
        if (samples.front().t != 0) {
            // t counts from trace start; there is no earlier value a
            // forward fill could repeat.
            throw Error(ErrorCode::MissingSample, "host " + host + ", t=0");
        }
        std::uint64_t expected = 0;
        for (const SizeSample& sample : samples) {
            while (expected < sample.t) {
                if (!options.forward_fill) {
                    throw Error(ErrorCode::MissingSample,
                                "host " + host + ", t=" + std::to_string(expected));
                }
                trace.sizes.push_back(trace.sizes.back());
                ++expected;
            }
            trace.sizes.push_back(sample.size);
            ++expected;
        }
        traces.push_back(std::move(trace));
    }
    return traces; // std::map iteration is already lexicographic
}

std::string emit_trace_file(const std::vector<SizeTrace>& traces) {
    std::vector<const SizeTrace*> ordered;
    ordered.reserve(traces.size());
    for (const SizeTrace& trace : traces) ordered.push_back(&trace);
    std::sort(ordered.begin(), ordered.end(),
              [](const SizeTrace* a, const SizeTrace* b) { return a->host_id < b->host_id; });

    std::string out(kHeader);
    out.push_back('\n');
    for (const SizeTrace* trace : ordered) {
        for (std::size_t t = 0; t < trace->sizes.size(); ++t) {
            out += trace->host_id;
            out.push_back(',');
            out += std::to_string(t);
            out.push_back(',');
            out += std::to_string(trace->sizes[t]);
            out.push_back('\n');
        }
    }
    return out;
}

TraceMatrix align(std::vector<SizeTrace> traces) {
    if (traces.size() < 2) {
        throw Error(ErrorCode::TooFewHosts,
                    "need at least 2 traces, got " + std::to_string(traces.size()));
    }
    std::sort(traces.begin(), traces.end(),
              [](const SizeTrace& a, const SizeTrace& b) { return a.host_id < b.host_id; });
    for (std::size_t i = 1; i < traces.size(); ++i) {
        if (traces[i].host_id == traces[i - 1].host_id) {
            throw Error(ErrorCode::DuplicateHost, "host " + traces[i].host_id);
        }
        if (traces[i].interval != traces.front().interval) {
            throw Error(ErrorCode::IntervalMismatch,
                        "host " + traces[i].host_id + " samples every " +
                            std::to_string(traces[i].interval) + " s, host " +
                            traces.front().host_id + " every " +
                            std::to_string(traces.front().interval) + " s");
        }
    }

    std::size_t columns = traces.front().sizes.size();
    for (const SizeTrace& trace : traces) {
        columns = std::min(columns, trace.sizes.size());
    }

    TraceMatrix matrix;
    matrix.interval = traces.front().interval;
    matrix.columns = columns;
    matrix.hosts.reserve(traces.size());
    matrix.data.reserve(traces.size());
    for (SizeTrace& trace : traces) {
        matrix.hosts.push_back(std::move(trace.host_id));
        trace.sizes.resize(columns);
        matrix.data.push_back(std::move(trace.sizes));
    }
    return matrix;
}

NormalizedTrace normalize_to_100(const SizeTrace& trace) {
    if (trace.sizes.empty()) {
        throw Error(ErrorCode::TooShort, "cannot normalize an empty trace");
    }
    NormalizedTrace result;
    result.scale = *std::max_element(trace.sizes.begin(), trace.sizes.end());
    result.values.reserve(trace.sizes.size());
    if (result.scale == 0) {
        result.degenerate = true;
        result.values.assign(trace.sizes.size(), 0.0);
        return result;
    }
    const double max = static_cast<double>(result.scale);
    for (std::uint64_t size : trace.sizes) {
        result.values.push_back(static_cast<double>(size) * 100.0 / max);
    }
    return result;
}

} // namespace logcorr
