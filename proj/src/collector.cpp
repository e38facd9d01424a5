#include "logcorr/collector.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <map>
#include <utility>

#include "logcorr/wire.hpp"

namespace logcorr {

namespace {

struct Connection {
    int fd = -1;
    std::string buffer;
    std::string host;      // empty until the first record binds it
    bool ended = false;
};

struct HostState {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> samples; // (t, size)
    bool ended = false;
    bool bound = false; // some connection owns this host
};

void set_nonblocking(int fd) {
    const int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

} // namespace

CollectorServer::CollectorServer(const std::string& bind_host, std::uint16_t port)
    : listener_(bind_host, port) {
    set_nonblocking(listener_.fd());
}

CollectResult CollectorServer::run(const CollectOptions& options) {
    CollectResult result;
    std::vector<Connection> connections;
    std::map<std::string, HostState> hosts;
    std::size_t ended_hosts = 0;

    const auto deadline = std::chrono::steady_clock::now() + options.window;

    // Applies one parsed line to the connection's host state. Returns
    // false if the connection must be dropped (duplicate host claim).
    const auto handle_line = [&](Connection& conn, std::string_view line) -> bool {
        const std::optional<WireLine> parsed = parse_wire_line(line);
        if (!parsed) {
            ++result.malformed_dropped;
            return true;
        }
        const std::string& claimed = std::holds_alternative<SizeSample>(*parsed)
                                         ? std::get<SizeSample>(*parsed).host_id
                                         : std::get<EndMarker>(*parsed).host_id;
        if (conn.host.empty()) {
            HostState& state = hosts[claimed];
            if (state.bound) {
                ++result.duplicate_connections;
                return false;
            }
            state.bound = true;
            conn.host = claimed;
        } else if (claimed != conn.host) {
            // One connection speaks for one host.
            ++result.malformed_dropped;
            return true;
        }

        HostState& state = hosts[conn.host];
        if (std::holds_alternative<EndMarker>(*parsed)) {
            if (!state.ended) {
                state.ended = true;
                conn.ended = true;
                ++ended_hosts;
            }
            return true;
        }
        const SizeSample& sample = std::get<SizeSample>(*parsed);
        if (state.ended ||
            (!state.samples.empty() && sample.t <= state.samples.back().first)) {
            ++result.malformed_dropped; // late or out-of-order record
            return true;
        }
        state.samples.emplace_back(sample.t, sample.size);
        return true;
    };

    while (ended_hosts < options.expected_hosts) {
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) break;
        const auto remaining =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
        const int timeout_ms =
            static_cast<int>(std::min<std::int64_t>(remaining.count(), 100));

        std::vector<pollfd> fds;
        fds.push_back(pollfd{listener_.fd(), POLLIN, 0});
        for (const Connection& conn : connections) {
            fds.push_back(pollfd{conn.fd, POLLIN, 0});
        }
        const std::size_t polled = connections.size();
        const int ready = ::poll(fds.data(), fds.size(), std::max(timeout_ms, 1));
        if (ready < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (ready == 0) continue;

        if (fds[0].revents & POLLIN) {
            for (;;) {
                const int fd = ::accept(listener_.fd(), nullptr, nullptr);
                if (fd < 0) break;
                set_nonblocking(fd);
                Connection conn;
                conn.fd = fd;
                connections.push_back(std::move(conn));
            }
        }

        // fds[i + 1] mirrors connections[i] for the conns that were polled;
        // ones accepted above wait for the next round. Close after the scan
        // so the mirror stays valid.
        std::vector<std::size_t> closing;
        for (std::size_t i = 0; i < polled; ++i) {
            if (!(fds[i + 1].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            Connection& conn = connections[i];
            bool drop = false;
            char chunk[4096];
            for (;;) {
                const ssize_t n = ::recv(conn.fd, chunk, sizeof chunk, 0);
                if (n > 0) {
                    conn.buffer.append(chunk, static_cast<std::size_t>(n));
                    continue;
                }
                if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) break;
                if (n < 0 && errno == EINTR) continue;
                drop = true; // peer closed or hard error
                break;
            }
            std::size_t start = 0;
            for (;;) {
                const std::size_t nl = conn.buffer.find('\n', start);
                if (nl == std::string::npos) break;
                if (!handle_line(conn, std::string_view(conn.buffer).substr(start, nl - start))) {
                    drop = true;
                    break;
                }
                start = nl + 1;
            }
            conn.buffer.erase(0, start);
            if (drop) closing.push_back(i);
        }
        for (auto it = closing.rbegin(); it != closing.rend(); ++it) {
            ::close(connections[*it].fd);
            connections.erase(connections.begin() + static_cast<std::ptrdiff_t>(*it));
        }
    }

    for (const Connection& conn : connections) {
        ::close(conn.fd);
    }

    result.timed_out = ended_hosts < options.expected_hosts;
    for (auto& [host, state] : hosts) {
        if (!state.ended && state.bound) {
            result.incomplete_hosts.push_back(host);
        }
        if (state.samples.empty()) continue;

        SizeTrace trace;
        trace.host_id = host;
        // Dropped lines leave holes in the tick sequence; a hole means the
        // sample was lost, not that the file changed, so repeat the
        // neighboring size. A missing leading tick repeats the first one.
        std::uint64_t next_t = 0;
        for (const auto& [t, size] : state.samples) {
            while (next_t < t) {
                trace.sizes.push_back(trace.sizes.empty() ? state.samples.front().second
                                                          : trace.sizes.back());
                ++result.filled_gaps;
                ++next_t;
            }
            trace.sizes.push_back(size);
            ++next_t;
        }
        result.traces.push_back(std::move(trace)); // map order = lexicographic
    }
    return result;
}

} // namespace logcorr
