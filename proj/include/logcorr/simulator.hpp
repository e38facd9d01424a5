#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logcorr/evaluator.hpp"
#include "logcorr/trace.hpp"

namespace logcorr {

/// The four workloads: two normal (IRC chat, chat plus a file transfer)
/// and two attack (bots receiving commands after an idle join, the same
/// plus a sustained flood).
enum class ScenarioKind : std::uint8_t {
    NormalChat,
    NormalFileTransfer,
    BotCommands,
    BotFlood,
};

std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_kind_from_string(std::string_view name);

struct TransferSpec {
    std::uint32_t start = 300;    // seconds into the run
    std::uint32_t duration = 60;  // seconds
    std::uint64_t bytes_per_second = 4000;

    bool operator==(const TransferSpec&) const = default;
};

struct FloodSpec {
    std::uint32_t start = 240;    // seconds into the run; must not precede idle
    std::uint64_t bytes_per_second = 1500;

    bool operator==(const FloodSpec&) const = default;
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::NormalChat;
    std::uint32_t hosts = 3;
    std::uint32_t duration = 600; // seconds
    std::uint32_t interval = 1;   // seconds per sample
    std::uint64_t seed = 0;

    // normal scenarios
    double chat_rate = 0.2; // expected messages per host per second
    std::pair<std::uint32_t, std::uint32_t> msg_bytes{40, 200}; // per message
    std::optional<TransferSpec> transfer = TransferSpec{};      // one host only

    // bot scenarios
    std::uint32_t idle = 120;       // seconds of joined-but-silent bots
    double cmd_rate = 0.1;          // herder commands per second after idle
    std::uint32_t response_jitter = 1; // max per-bot response delay, ticks
    std::optional<FloodSpec> flood = FloodSpec{};

    bool operator==(const ScenarioConfig&) const = default;
};

/// Synthesize one trace per host, `duration/interval` samples each,
/// cumulative sizes starting at 0. Pure function of the config: the same
/// seed and parameters give byte-identical traces.
std::vector<SizeTrace> simulate(const ScenarioConfig& config);

/// What the run should be scored as: bot scenarios are attacks, the two
/// user scenarios are normal.
Truth ground_truth(const ScenarioConfig& config);

/// One-line JSON object with every parameter plus the ground truth;
/// written next to the trace so the evaluator never guesses labels.
std::string manifest_json(const ScenarioConfig& config);

struct Manifest {
    ScenarioConfig config;
    Truth truth = Truth::Normal;
};

Manifest parse_manifest(std::string_view json_text);

} // namespace logcorr
