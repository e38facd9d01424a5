#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace logcorr {

/// One observation: host `host_id` had a log file of `size` bytes at
/// sample tick `t` (ticks since trace start; one tick per sampling
/// interval, one second at the default cadence).
struct SizeSample {
    std::string host_id;
    std::uint64_t t = 0;
    std::uint64_t size = 0;

    bool operator==(const SizeSample&) const = default;
};

/// One host's dense size series: sizes[k] is the log size at tick k.
struct SizeTrace {
    std::string host_id;
    std::uint32_t interval = 1; // seconds per tick
    std::vector<std::uint64_t> sizes;

    bool operator==(const SizeTrace&) const = default;
};

/// Rectangular host x tick grid, hosts in lexicographic order so every
/// downstream artifact is byte-reproducible.
struct TraceMatrix {
    std::vector<std::string> hosts;
    std::uint32_t interval = 1;
    std::size_t columns = 0; // T, samples per host
    std::vector<std::vector<std::uint64_t>> data; // hosts x T

    bool operator==(const TraceMatrix&) const = default;
};

} // namespace logcorr
