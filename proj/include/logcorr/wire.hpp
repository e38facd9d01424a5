#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "logcorr/trace.hpp"

namespace logcorr {

/// Trailer an agent sends when its window is done.
struct EndMarker {
    std::string host_id;

    bool operator==(const EndMarker&) const = default;
};

/// One wire line: either a sample (`S,<host>,<t>,<size>`) or an end
/// marker (`E,<host>`). Lines are '\n'-terminated UTF-8 on the socket;
/// the functions here deal in the unterminated payload.
using WireLine = std::variant<SizeSample, EndMarker>;

/// Host ids travel inside comma-separated lines.
bool valid_host_id(std::string_view host_id);

std::string encode_sample(const SizeSample& sample);
std::string encode_end(std::string_view host_id);

/// nullopt on any malformed line; the collector drops and counts those.
std::optional<WireLine> parse_wire_line(std::string_view line);

} // namespace logcorr
