#include "logcorr/agent.hpp"

#include <system_error>
#include <thread>

#include "logcorr/error.hpp"
#include "logcorr/wire.hpp"

namespace logcorr {

namespace {

std::optional<std::uint64_t> filesystem_size(const std::filesystem::path& path) {
    std::error_code ec;
    const std::uintmax_t size = std::filesystem::file_size(path, ec);
    if (ec) return std::nullopt;
    return static_cast<std::uint64_t>(size);
}

} // namespace

SampleSummary sample_loop(const WatchSpec& spec, const RecordSink& sink,
                          const AgentHooks& hooks) {
    if (!valid_host_id(spec.host_id)) {
        throw Error(ErrorCode::InvalidConfig, "host_id");
    }
    if (spec.interval < 1) {
        throw Error(ErrorCode::InvalidConfig, "interval");
    }
    if (spec.duration < 2 * spec.interval) {
        throw Error(ErrorCode::InvalidConfig, "duration");
    }

    const auto probe = hooks.probe_size ? hooks.probe_size : filesystem_size;
    const auto period = hooks.tick_period.count() > 0
                            ? hooks.tick_period
                            : std::chrono::milliseconds(1000) * spec.interval;
    const std::uint64_t ticks = spec.duration / spec.interval;
    const auto start = std::chrono::steady_clock::now();

    SampleSummary summary;
    std::uint64_t last_size = 0;
    for (std::uint64_t tick = 0; tick < ticks; ++tick) {
        std::this_thread::sleep_until(start + period * tick);

        const std::optional<std::uint64_t> size = probe(spec.path);
        if (size) {
            last_size = *size;
        } else if (tick == 0) {
            throw Error(ErrorCode::PathVanishedAtStart, spec.path.string());
        } else {
            ++summary.degraded_ticks;
        }

        if (!sink(encode_sample(SizeSample{spec.host_id, tick, last_size}))) {
            summary.aborted = true;
            return summary;
        }
        ++summary.ticks_emitted;
    }
    return summary;
}

} // namespace logcorr
