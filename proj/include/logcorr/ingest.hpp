#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "logcorr/trace.hpp"

namespace logcorr {

struct ParseOptions {
    /// Repeat the last seen size across missing ticks instead of failing
    /// with MissingSample. A log file that was not written did not change.
    bool forward_fill = false;
    /// Sampling interval assigned to the parsed traces (the CSV itself
    /// carries tick indexes only).
    std::uint32_t interval = 1;
};

/// Parse the trace CSV format (header `host,t,size`, one row per sample).
/// Returns one trace per host, hosts in lexicographic order. Any bad row
/// rejects the whole file.
std::vector<SizeTrace> parse_trace_file(std::string_view content,
                                        const ParseOptions& options = {});

/// Writer for the same format: hosts in lexicographic order, rows by
/// ascending tick, '\n' newlines. parse_trace_file(emit_trace_file(x))
/// reproduces x for any valid trace set.
std::string emit_trace_file(const std::vector<SizeTrace>& traces);

/// Time-align traces into the matrix the engine consumes: truncate to the
/// shortest trace and canonicalize host order (lexicographic).
TraceMatrix align(std::vector<SizeTrace> traces);

struct NormalizedTrace {
    std::vector<double> values;  // in [0, 100]
    std::uint64_t scale = 0;     // bytes that map to 100
    bool degenerate = false;     // all-zero input; values are all 0
};

/// Scale a trace so its maximum maps to exactly 100 (the convention the
/// comparison plots use). Per-trace: each host gets its own scale.
NormalizedTrace normalize_to_100(const SizeTrace& trace);

} // namespace logcorr
