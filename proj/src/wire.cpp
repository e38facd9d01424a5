#include "logcorr/wire.hpp"

#include <charconv>

#include "logcorr/error.hpp"

namespace logcorr {

namespace {

bool parse_u64(std::string_view field, std::uint64_t& out) {
    if (field.empty()) return false;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, out, 10);
    return ec == std::errc() && ptr == end;
}

} // namespace

bool valid_host_id(std::string_view host_id) {
    return !host_id.empty() &&
           host_id.find(',') == std::string_view::npos &&
           host_id.find('\n') == std::string_view::npos &&
           host_id.find('\r') == std::string_view::npos;
}

std::string encode_sample(const SizeSample& sample) {
    if (!valid_host_id(sample.host_id)) {
        throw Error(ErrorCode::InvalidConfig,
                    "host id must be non-empty and free of ',' and newlines");
    }
    return "S," + sample.host_id + "," + std::to_string(sample.t) + "," +
           std::to_string(sample.size);
}

std::string encode_end(std::string_view host_id) {
    if (!valid_host_id(host_id)) {
        throw Error(ErrorCode::InvalidConfig,
                    "host id must be non-empty and free of ',' and newlines");
    }
    return "E," + std::string(host_id);
}

std::optional<WireLine> parse_wire_line(std::string_view line) {
    if (line.size() < 2 || line[1] != ',') return std::nullopt;
    const char tag = line[0];
    const std::string_view rest = line.substr(2);

    if (tag == 'E') {
        if (!valid_host_id(rest)) return std::nullopt;
        return WireLine{EndMarker{std::string(rest)}};
    }
    if (tag != 'S') return std::nullopt;

    const std::size_t c1 = rest.find(',');
    const std::size_t c2 = c1 == std::string_view::npos ? std::string_view::npos
                                                        : rest.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
        rest.find(',', c2 + 1) != std::string_view::npos) {
        return std::nullopt;
    }
    const std::string_view host = rest.substr(0, c1);
    if (!valid_host_id(host)) return std::nullopt;

    SizeSample sample;
    sample.host_id = std::string(host);
    if (!parse_u64(rest.substr(c1 + 1, c2 - c1 - 1), sample.t)) return std::nullopt;
    if (!parse_u64(rest.substr(c2 + 1), sample.size)) return std::nullopt;
    return WireLine{std::move(sample)};
}

} // namespace logcorr
