#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "logcorr/trace.hpp"

namespace logcorr {

/// Per-host boolean change series: bits[k] is true iff the log size at
/// tick k+1 differs from tick k. The magnitude of the change is
/// deliberately ignored; the detector sees only changed / unchanged.
struct ChangeVector {
    std::string host_id;
    std::vector<bool> bits; // length = samples - 1
    /// Ticks where the size went down. Logs are assumed append-only, so a
    /// decrease means truncation; it still counts as a change, but the
    /// caller should surface it.
    std::vector<std::uint64_t> truncations;
};

enum class StepLabel : std::uint8_t {
    ZerosCorrelated,  // no host changed
    OnesCorrelated,   // every host changed
    Uncorrelated,     // some but not all hosts changed
};

std::string_view to_string(StepLabel label);

struct CorrelationSequence {
    std::vector<StepLabel> labels; // length T-1
    std::uint64_t cv = 0;          // zeros + ones steps
    std::uint64_t ucv = 0;
    std::uint64_t zeros_count = 0;
    std::uint64_t ones_count = 0;

    double ratio() const {
        return static_cast<double>(cv) / static_cast<double>(cv + ucv);
    }
};

enum class Verdict : std::uint8_t { Benign, Suspicious };

struct DetectionResult {
    std::uint64_t cv = 0;
    std::uint64_t ucv = 0;
    double ratio = 0.0;
    double threshold = 0.0;
    Verdict verdict = Verdict::Benign;
};

/// bits[k] = (sizes[k+1] != sizes[k]). Needs at least 2 samples.
ChangeVector binarize(const SizeTrace& trace);

/// One time step across hosts: all false -> ZerosCorrelated, all true ->
/// OnesCorrelated, mixed -> Uncorrelated. Needs at least 2 hosts.
StepLabel classify_step(const std::vector<bool>& bits);

/// Run the correlation loop over the whole matrix: binarize each host,
/// classify every step, tally CV/UCV.
CorrelationSequence correlate(const TraceMatrix& matrix);

/// Threshold verdict on the correlated fraction. Suspicious iff
/// ratio > threshold, strictly: a ratio exactly at the threshold is benign.
DetectionResult detect(const CorrelationSequence& seq, double threshold);

/// Report CSV: `k,label,cv_running,ucv_running` rows followed by a
/// `# summary ...` line. k indexes the transition between samples k and k+1.
std::string write_correlation_report(const CorrelationSequence& seq);

/// Single-line record: `cv=<n> ucv=<n> ratio=<r> threshold=<t>
/// verdict=<suspicious|benign>` with r and t to 4 decimal places.
std::string format_detection_record(const DetectionResult& result);

} // namespace logcorr
