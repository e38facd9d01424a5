#include "logcorr/engine.hpp"

#include <cstdio>

#include "logcorr/error.hpp"

namespace logcorr {

namespace {

std::string fixed4(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    return buf;
}

} // namespace

std::string_view to_string(StepLabel label) {
    switch (label) {
    case StepLabel::ZerosCorrelated: return "zeros";
    case StepLabel::OnesCorrelated: return "ones";
    case StepLabel::Uncorrelated: return "uncorrelated";
    }
    return "?";
}

ChangeVector binarize(const SizeTrace& trace) {
    if (trace.sizes.size() < 2) {
        throw Error(ErrorCode::TooShort,
                    "host " + trace.host_id + ": need at least 2 samples, got " +
                        std::to_string(trace.sizes.size()));
    }
    ChangeVector cv;
    cv.host_id = trace.host_id;
    cv.bits.reserve(trace.sizes.size() - 1);
    for (std::size_t k = 0; k + 1 < trace.sizes.size(); ++k) {
        cv.bits.push_back(trace.sizes[k + 1] != trace.sizes[k]);
        if (trace.sizes[k + 1] < trace.sizes[k]) {
            cv.truncations.push_back(k);
        }
    }
    return cv;
}

StepLabel classify_step(const std::vector<bool>& bits) {
    if (bits.size() < 2) {
        throw Error(ErrorCode::TooFewHosts,
                    "need at least 2 hosts per step, got " + std::to_string(bits.size()));
    }
    bool any = false;
    bool all = true;
    for (bool bit : bits) {
        any = any || bit;
        all = all && bit;
    }
    if (!any) return StepLabel::ZerosCorrelated;
    if (all) return StepLabel::OnesCorrelated;
    return StepLabel::Uncorrelated;
}

CorrelationSequence correlate(const TraceMatrix& matrix) {
    if (matrix.hosts.size() < 2) {
        throw Error(ErrorCode::TooFewHosts,
                    "need at least 2 hosts, got " + std::to_string(matrix.hosts.size()));
    }
    if (matrix.columns < 2) {
        throw Error(ErrorCode::TooShort,
                    "need at least 2 samples per host, got " +
                        std::to_string(matrix.columns));
    }

    std::vector<ChangeVector> changes;
    changes.reserve(matrix.hosts.size());
    for (std::size_t h = 0; h < matrix.hosts.size(); ++h) {
        changes.push_back(binarize(SizeTrace{matrix.hosts[h], matrix.interval,
                                             matrix.data[h]}));
    }

    CorrelationSequence seq;
    const std::size_t steps = matrix.columns - 1;
    seq.labels.reserve(steps);
    std::vector<bool> column(matrix.hosts.size());
    for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t h = 0; h < changes.size(); ++h) {
            column[h] = changes[h].bits[k];
        }
        const StepLabel label = classify_step(column);
        seq.labels.push_back(label);
        switch (label) {
        case StepLabel::ZerosCorrelated:
            ++seq.zeros_count;
            ++seq.cv;
            break;
        case StepLabel::OnesCorrelated:
            ++seq.ones_count;
            ++seq.cv;
            break;
        case StepLabel::Uncorrelated:
            ++seq.ucv;
            break;
        }
    }
    return seq;
}

DetectionResult detect(const CorrelationSequence& seq, double threshold) {
    if (seq.cv + seq.ucv == 0) {
        throw Error(ErrorCode::EmptySequence, "no steps to judge");
    }
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw Error(ErrorCode::BadThreshold,
                    "threshold must be in [0,1], got " + fixed4(threshold));
    }
    DetectionResult result;
    result.cv = seq.cv;
    result.ucv = seq.ucv;
    result.ratio = seq.ratio();
    result.threshold = threshold;
    result.verdict = result.ratio > threshold ? Verdict::Suspicious : Verdict::Benign;
    return result;
}

std::string write_correlation_report(const CorrelationSequence& seq) {
    std::string out = "k,label,cv_running,ucv_running\n";
    std::uint64_t cv_running = 0;
    std::uint64_t ucv_running = 0;
    for (std::size_t k = 0; k < seq.labels.size(); ++k) {
        if (seq.labels[k] == StepLabel::Uncorrelated) {
            ++ucv_running;
        } else {
            ++cv_running;
        }
        out += std::to_string(k);
        out.push_back(',');
        out += to_string(seq.labels[k]);
        out.push_back(',');
        out += std::to_string(cv_running);
        out.push_back(',');
        out += std::to_string(ucv_running);
        out.push_back('\n');
    }
    out += "# summary cv=" + std::to_string(seq.cv) + " ucv=" + std::to_string(seq.ucv) +
           " zeros=" + std::to_string(seq.zeros_count) +
           " ones=" + std::to_string(seq.ones_count) + " ratio=" + fixed4(seq.ratio()) +
           "\n";
    return out;
}

std::string format_detection_record(const DetectionResult& result) {
    return "cv=" + std::to_string(result.cv) + " ucv=" + std::to_string(result.ucv) +
           " ratio=" + fixed4(result.ratio) + " threshold=" + fixed4(result.threshold) +
           " verdict=" +
           (result.verdict == Verdict::Suspicious ? "suspicious" : "benign");
}

} // namespace logcorr
