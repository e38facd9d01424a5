#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace logcorr {

/// What one agent watches: a single log file, sampled every `interval`
/// seconds for `duration` seconds.
struct WatchSpec {
    std::string host_id;
    std::filesystem::path path;
    std::uint32_t interval = 1; // seconds, >= 1
    std::uint32_t duration = 0; // seconds, >= 2 * interval
};

struct SampleSummary {
    std::uint64_t ticks_emitted = 0;
    std::uint64_t degraded_ticks = 0; // file unreadable, previous size repeated
    bool aborted = false;             // sink refused a record
};

/// Receives one encoded wire line per sample. Returning false closes the
/// loop early (partial summary, aborted flag set).
using RecordSink = std::function<bool(const std::string& line)>;

struct AgentHooks {
    /// Replace the filesystem size probe (tests script sizes and failures
    /// through this; a real run leaves it empty).
    std::function<std::optional<std::uint64_t>(const std::filesystem::path&)> probe_size;
    /// Compress the wall-clock tick for tests. Zero means the real
    /// cadence, `interval` seconds per tick.
    std::chrono::milliseconds tick_period{0};
};

/// Emit exactly duration/interval samples of the watched file's size, one
/// per tick. Ticks run on absolute deadlines from the start instant so a
/// long window does not drift. An unreadable file at a tick repeats the
/// last known size and counts the tick as degraded; an unreadable file at
/// the first tick throws PathVanishedAtStart.
SampleSummary sample_loop(const WatchSpec& spec, const RecordSink& sink,
                          const AgentHooks& hooks = {});

} // namespace logcorr
