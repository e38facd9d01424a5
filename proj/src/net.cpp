#include "logcorr/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "logcorr/error.hpp"

namespace logcorr {

Endpoint parse_endpoint(std::string_view address) {
    const std::size_t colon = address.rfind(':');
    if (colon == std::string_view::npos || colon == 0 ||
        colon + 1 == address.size()) {
        throw Error(ErrorCode::BadAddress,
                    "expected host:port, got '" + std::string(address) + "'");
    }
    const std::string_view port_field = address.substr(colon + 1);
    std::uint32_t port = 0;
    auto [ptr, ec] =
        std::from_chars(port_field.data(), port_field.data() + port_field.size(), port, 10);
    if (ec != std::errc() || ptr != port_field.data() + port_field.size() ||
        port > 65535) {
        throw Error(ErrorCode::BadAddress,
                    "bad port in '" + std::string(address) + "'");
    }
    return Endpoint{std::string(address.substr(0, colon)),
                    static_cast<std::uint16_t>(port)};
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) {
        throw Error(ErrorCode::Io, std::string("socket: ") + std::strerror(errno));
    }
    const int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd_);
        throw Error(ErrorCode::BadAddress, "cannot parse listen address '" + host + "'");
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        const std::string why = std::strerror(errno);
        ::close(fd_);
        throw Error(ErrorCode::Io, "bind " + host + ": " + why);
    }
    if (::listen(fd_, 16) != 0) {
        const std::string why = std::strerror(errno);
        ::close(fd_);
        throw Error(ErrorCode::Io, "listen: " + why);
    }
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

TcpLineClient::TcpLineClient(const Endpoint& endpoint) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* result = nullptr;
    const std::string port = std::to_string(endpoint.port);
    if (::getaddrinfo(endpoint.host.c_str(), port.c_str(), &hints, &result) != 0) {
        throw Error(ErrorCode::BadAddress, "cannot resolve '" + endpoint.host + "'");
    }
    int fd = -1;
    for (addrinfo* ai = result; ai != nullptr; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(result);
    if (fd < 0) {
        throw Error(ErrorCode::Io, "connect " + endpoint.host + ":" + port + ": " +
                                       std::strerror(errno));
    }
    fd_ = fd;
}

TcpLineClient::~TcpLineClient() { close(); }

TcpLineClient::TcpLineClient(TcpLineClient&& other) noexcept : fd_(other.fd_) {
    other.fd_ = -1;
}

bool TcpLineClient::send_line(std::string_view line) {
    if (fd_ < 0) return false;
    std::string payload(line);
    payload.push_back('\n');
    std::size_t sent = 0;
    while (sent < payload.size()) {
        const ssize_t n =
            ::send(fd_, payload.data() + sent, payload.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) {
            if (n < 0 && errno == EINTR) continue;
            return false;
        }
        sent += static_cast<std::size_t>(n);
    }
    return true;
}

void TcpLineClient::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

} // namespace logcorr
