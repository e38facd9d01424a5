#include "logcorr/simulator.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "logcorr/error.hpp"
#include "logcorr/rng.hpp"

namespace logcorr {

namespace {

// Substream tags. Host streams hang off these so the draw sequence of one
// host never depends on how many hosts exist.
constexpr std::uint64_t kChatStream = 1;
constexpr std::uint64_t kCommandStream = 2;
constexpr std::uint64_t kDelayStream = 3;

// Bots log the herder's command verbatim, so the record is the same small
// line on every host. Command record size is not a scenario knob; this
// range keeps command-only runs at a few kilobytes over ten minutes.
constexpr std::uint64_t kCommandBytesMin = 32;
constexpr std::uint64_t kCommandBytesMax = 96;

bool is_bot_kind(ScenarioKind kind) {
    return kind == ScenarioKind::BotCommands || kind == ScenarioKind::BotFlood;
}

void validate(const ScenarioConfig& config) {
    const auto fail = [](const char* field) {
        throw Error(ErrorCode::InvalidConfig, field);
    };
    if (config.hosts < 2) fail("hosts");
    if (config.interval < 1) fail("interval");
    if (config.duration / config.interval < 2) fail("duration");
    if (!(config.chat_rate >= 0.0) || !std::isfinite(config.chat_rate)) fail("chat_rate");
    if (!(config.cmd_rate >= 0.0) || !std::isfinite(config.cmd_rate)) fail("cmd_rate");
    if (config.msg_bytes.first < 1 || config.msg_bytes.first > config.msg_bytes.second) {
        fail("msg_bytes");
    }
    if (is_bot_kind(config.kind)) {
        if (config.idle >= config.duration) fail("idle");
        if (config.kind == ScenarioKind::BotFlood && config.flood &&
            config.flood->start < config.idle) {
            fail("flood.start"); // flooding before the bots have joined
        }
    }
}

// Zero-padded so lexicographic host order equals generation order.
std::string host_name(std::uint32_t index, std::uint32_t total) {
    const std::size_t width = std::max<std::size_t>(2, std::to_string(total - 1).size());
    std::string digits = std::to_string(index);
    std::string name = "host";
    name.append(width - digits.size(), '0');
    name += digits;
    return name;
}

} // namespace

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::NormalChat: return "normal_chat";
    case ScenarioKind::NormalFileTransfer: return "normal_file_transfer";
    case ScenarioKind::BotCommands: return "bot_commands";
    case ScenarioKind::BotFlood: return "bot_flood";
    }
    return "?";
}

std::optional<ScenarioKind> scenario_kind_from_string(std::string_view name) {
    if (name == "normal_chat") return ScenarioKind::NormalChat;
    if (name == "normal_file_transfer") return ScenarioKind::NormalFileTransfer;
    if (name == "bot_commands") return ScenarioKind::BotCommands;
    if (name == "bot_flood") return ScenarioKind::BotFlood;
    return std::nullopt;
}

std::vector<SizeTrace> simulate(const ScenarioConfig& config) {
    validate(config);

    const std::uint32_t seconds = config.duration;
    const std::size_t ticks = config.duration / config.interval;
    const std::uint32_t n = config.hosts;

    // deltas[h][s] = bytes appended to host h's log during second s.
    std::vector<std::vector<std::uint64_t>> deltas(
        n, std::vector<std::uint64_t>(seconds, 0));

    const bool chat = config.kind == ScenarioKind::NormalChat ||
                      config.kind == ScenarioKind::NormalFileTransfer;

    if (chat) {
        const std::uint64_t chat_base = SplitMix64::substream(config.seed, kChatStream);
        for (std::uint32_t h = 0; h < n; ++h) {
            SplitMix64 rng(SplitMix64::substream(chat_base, h));
            for (std::uint32_t s = 0; s < seconds; ++s) {
                const std::uint32_t messages = rng.poisson(config.chat_rate);
                for (std::uint32_t m = 0; m < messages; ++m) {
                    deltas[h][s] += rng.uniform_int(config.msg_bytes.first,
                                                    config.msg_bytes.second);
                }
            }
        }
        if (config.kind == ScenarioKind::NormalFileTransfer && config.transfer) {
            // The transfer runs on exactly one host (the last one, the
            // figure captions' "user 3").
            const TransferSpec& transfer = *config.transfer;
            const std::uint32_t h = n - 1;
            const std::uint64_t end =
                std::min<std::uint64_t>(seconds, std::uint64_t(transfer.start) +
                                                     transfer.duration);
            for (std::uint64_t s = transfer.start; s < end; ++s) {
                deltas[h][s] += transfer.bytes_per_second;
            }
        }
    }

    if (is_bot_kind(config.kind)) {
        SplitMix64 schedule(SplitMix64::substream(config.seed, kCommandStream));
        const std::uint64_t delay_base = SplitMix64::substream(config.seed, kDelayStream);
        std::vector<SplitMix64> delay_rngs;
        delay_rngs.reserve(n);
        for (std::uint32_t h = 0; h < n; ++h) {
            delay_rngs.emplace_back(SplitMix64::substream(delay_base, h));
        }
        for (std::uint32_t s = config.idle; s < seconds; ++s) {
            const std::uint32_t commands = schedule.poisson(config.cmd_rate);
            for (std::uint32_t c = 0; c < commands; ++c) {
                const std::uint64_t bytes =
                    schedule.uniform_int(kCommandBytesMin, kCommandBytesMax);
                for (std::uint32_t h = 0; h < n; ++h) {
                    const std::uint64_t delay_ticks =
                        config.response_jitter == 0
                            ? 0
                            : delay_rngs[h].uniform_int(0, config.response_jitter);
                    const std::uint64_t arrival =
                        std::uint64_t(s) + delay_ticks * config.interval;
                    if (arrival < seconds) {
                        deltas[h][arrival] += bytes;
                    }
                }
            }
        }
        if (config.kind == ScenarioKind::BotFlood && config.flood) {
            for (std::uint32_t h = 0; h < n; ++h) {
                for (std::uint32_t s = config.flood->start; s < seconds; ++s) {
                    deltas[h][s] += config.flood->bytes_per_second;
                }
            }
        }
    }

    // Sample the cumulative series every `interval` seconds. sizes[k] is
    // the log size at t = k*interval, i.e. everything appended before it.
    std::vector<SizeTrace> traces;
    traces.reserve(n);
    for (std::uint32_t h = 0; h < n; ++h) {
        SizeTrace trace;
        trace.host_id = host_name(h, n);
        trace.interval = config.interval;
        trace.sizes.reserve(ticks);
        std::uint64_t total = 0;
        std::uint64_t second = 0;
        for (std::size_t k = 0; k < ticks; ++k) {
            const std::uint64_t until = std::uint64_t(k) * config.interval;
            while (second < until) {
                total += deltas[h][second];
                ++second;
            }
            trace.sizes.push_back(total);
        }
        traces.push_back(std::move(trace));
    }
    return traces;
}

Truth ground_truth(const ScenarioConfig& config) {
    return is_bot_kind(config.kind) ? Truth::Attack : Truth::Normal;
}

std::string manifest_json(const ScenarioConfig& config) {
    nlohmann::json j;
    j["kind"] = std::string(to_string(config.kind));
    j["seed"] = config.seed;
    j["hosts"] = config.hosts;
    j["duration"] = config.duration;
    j["interval"] = config.interval;
    j["chat_rate"] = config.chat_rate;
    j["msg_bytes"] = {config.msg_bytes.first, config.msg_bytes.second};
    if (config.transfer) {
        j["transfer"] = {{"start", config.transfer->start},
                         {"duration", config.transfer->duration},
                         {"bytes_per_second", config.transfer->bytes_per_second}};
    } else {
        j["transfer"] = nullptr;
    }
    j["idle"] = config.idle;
    j["cmd_rate"] = config.cmd_rate;
    j["response_jitter"] = config.response_jitter;
    if (config.flood) {
        j["flood"] = {{"start", config.flood->start},
                      {"bytes_per_second", config.flood->bytes_per_second}};
    } else {
        j["flood"] = nullptr;
    }
    j["ground_truth"] = ground_truth(config) == Truth::Attack ? "attack" : "normal";
    return j.dump() + "\n";
}

Manifest parse_manifest(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("manifest: ") + e.what());
    }
    const auto require = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) {
            throw Error(ErrorCode::InvalidConfig,
                        std::string("manifest missing '") + key + "'");
        }
        return j.at(key);
    };

    Manifest manifest;
    try {
        const auto kind = scenario_kind_from_string(
            require("kind").get<std::string>());
        if (!kind) {
            throw Error(ErrorCode::InvalidConfig,
                        "manifest kind '" + j["kind"].get<std::string>() + "'");
        }
        ScenarioConfig& config = manifest.config;
        config.kind = *kind;
        config.seed = require("seed").get<std::uint64_t>();
        if (j.contains("hosts")) config.hosts = j["hosts"].get<std::uint32_t>();
        if (j.contains("duration")) config.duration = j["duration"].get<std::uint32_t>();
        if (j.contains("interval")) config.interval = j["interval"].get<std::uint32_t>();
        if (j.contains("chat_rate")) config.chat_rate = j["chat_rate"].get<double>();
        if (j.contains("msg_bytes")) {
            config.msg_bytes = {j["msg_bytes"].at(0).get<std::uint32_t>(),
                                j["msg_bytes"].at(1).get<std::uint32_t>()};
        }
        if (j.contains("transfer")) {
            if (j["transfer"].is_null()) {
                config.transfer.reset();
            } else {
                config.transfer = TransferSpec{
                    j["transfer"].at("start").get<std::uint32_t>(),
                    j["transfer"].at("duration").get<std::uint32_t>(),
                    j["transfer"].at("bytes_per_second").get<std::uint64_t>()};
            }
        }
        if (j.contains("idle")) config.idle = j["idle"].get<std::uint32_t>();
        if (j.contains("cmd_rate")) config.cmd_rate = j["cmd_rate"].get<double>();
        if (j.contains("response_jitter")) {
            config.response_jitter = j["response_jitter"].get<std::uint32_t>();
        }
        if (j.contains("flood")) {
            if (j["flood"].is_null()) {
                config.flood.reset();
            } else {
                config.flood = FloodSpec{
                    j["flood"].at("start").get<std::uint32_t>(),
                    j["flood"].at("bytes_per_second").get<std::uint64_t>()};
            }
        }

        const std::string truth = require("ground_truth").get<std::string>();
        if (truth == "attack") {
            manifest.truth = Truth::Attack;
        } else if (truth == "normal") {
            manifest.truth = Truth::Normal;
        } else {
            throw Error(ErrorCode::InvalidConfig, "manifest ground_truth '" + truth + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("manifest: ") + e.what());
    }
    return manifest;
}

} // namespace logcorr
