#include "logcorr/evaluator.hpp"

#include <algorithm>
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

std::vector<RocPoint> roc_sweep(const std::vector<LabeledRun>& runs,
                                std::vector<double> thresholds) {
    std::uint64_t attacks = 0;
    std::uint64_t normals = 0;
    for (const LabeledRun& run : runs) {
        (run.truth == Truth::Attack ? attacks : normals)++;
    }
    if (attacks == 0 || normals == 0) {
        throw Error(ErrorCode::MissingClass,
                    "need both classes: " + std::to_string(attacks) + " attack, " +
                        std::to_string(normals) + " normal run(s)");
    }
    for (double threshold : thresholds) {
        if (!(threshold >= 0.0 && threshold <= 1.0)) {
            throw Error(ErrorCode::BadThreshold,
                        "threshold must be in [0,1], got " + fixed4(threshold));
        }
    }
    std::sort(thresholds.begin(), thresholds.end());

    std::vector<RocPoint> points;
    points.reserve(thresholds.size());
    for (double threshold : thresholds) {
        RocPoint point;
        point.threshold = threshold;
        for (const LabeledRun& run : runs) {
            const bool predicted_attack = run.ratio > threshold;
            if (run.truth == Truth::Attack) {
                (predicted_attack ? point.tp : point.fn)++;
            } else {
                (predicted_attack ? point.fp : point.tn)++;
            }
        }
        point.tpr = static_cast<double>(point.tp) / static_cast<double>(attacks);
        point.fpr = static_cast<double>(point.fp) / static_cast<double>(normals);
        points.push_back(point);
    }
    return points;
}

double auc(std::vector<RocPoint> points) {
    std::sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
        return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
    });
    if (points.size() < 2 || points.front().fpr == points.back().fpr) {
        throw Error(ErrorCode::DegenerateCurve,
                    "need points spanning distinct fpr values");
    }
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double width = points[i + 1].fpr - points[i].fpr;
        area += width * (points[i].tpr + points[i + 1].tpr) / 2.0;
    }
    return std::clamp(area, 0.0, 1.0);
}

std::vector<double> default_threshold_grid() {
    std::vector<double> grid;
    grid.reserve(21);
    for (int i = 0; i <= 20; ++i) {
        grid.push_back(static_cast<double>(i) / 20.0);
    }
    return grid;
}

std::string write_roc_csv(const std::vector<RocPoint>& points) {
    std::string out = "threshold,tp,fp,tn,fn,tpr,fpr\n";
    for (const RocPoint& point : points) {
        out += fixed4(point.threshold);
        out.push_back(',');
        out += std::to_string(point.tp);
        out.push_back(',');
        out += std::to_string(point.fp);
        out.push_back(',');
        out += std::to_string(point.tn);
        out.push_back(',');
        out += std::to_string(point.fn);
        out.push_back(',');
        out += fixed4(point.tpr);
        out.push_back(',');
        out += fixed4(point.fpr);
        out.push_back('\n');
    }
    return out;
}

} // namespace logcorr
