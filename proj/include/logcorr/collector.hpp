#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "logcorr/net.hpp"
#include "logcorr/trace.hpp"

namespace logcorr {

struct CollectOptions {
    std::size_t expected_hosts = 2;
    std::chrono::milliseconds window{60'000}; // collection deadline
};

struct CollectResult {
    std::vector<SizeTrace> traces; // hosts in lexicographic order
    std::uint64_t malformed_dropped = 0;
    std::uint64_t duplicate_connections = 0;
    std::uint64_t filled_gaps = 0; // ticks reconstructed after dropped lines
    bool timed_out = false;        // window elapsed before every host ended
    std::vector<std::string> incomplete_hosts; // connected but no end marker
};

/// Accepts concurrent agent connections and assembles one trace per host.
/// A connection is bound to the host named in its first record; a second
/// connection claiming a bound host is rejected and counted. Malformed
/// lines are dropped and counted without harming the connection. The run
/// ends when every expected host has sent its end marker or the window
/// elapses, whichever is first; on timeout the partial traces are still
/// returned, flagged.
///
/// Single-threaded poll loop: a stalled agent never blocks another
/// host's ingestion.
class CollectorServer {
public:
    CollectorServer(const std::string& bind_host, std::uint16_t port);

    std::uint16_t port() const { return listener_.port(); }

    CollectResult run(const CollectOptions& options);

private:
    TcpListener listener_;
};

} // namespace logcorr
