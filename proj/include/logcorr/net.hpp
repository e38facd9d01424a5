#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace logcorr {

struct Endpoint {
    std::string host;
    std::uint16_t port = 0;
};

/// Split "host:port". Throws BadAddress on anything else.
Endpoint parse_endpoint(std::string_view address);

/// Bound, listening IPv4 socket. Port 0 picks an ephemeral port; port()
/// reports the one actually bound.
class TcpListener {
public:
    TcpListener(const std::string& host, std::uint16_t port);
    ~TcpListener();

    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    int fd() const { return fd_; }
    std::uint16_t port() const { return port_; }

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

/// Blocking client connection that writes '\n'-terminated lines.
class TcpLineClient {
public:
    explicit TcpLineClient(const Endpoint& endpoint); // throws Io on failure
    ~TcpLineClient();

    TcpLineClient(TcpLineClient&& other) noexcept;
    TcpLineClient& operator=(TcpLineClient&&) = delete;
    TcpLineClient(const TcpLineClient&) = delete;
    TcpLineClient& operator=(const TcpLineClient&) = delete;

    /// Appends the newline itself. False once the peer has gone away.
    bool send_line(std::string_view line);
    void close();

private:
    int fd_ = -1;
};

} // namespace logcorr
