#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace logcorr {

enum class Truth : std::uint8_t { Normal, Attack };

/// One scored experiment: the whole observation window reduced to its
/// correlated fraction, plus the label the run was generated under.
struct LabeledRun {
    std::string run_id;
    Truth truth = Truth::Normal;
    double ratio = 0.0;
};

struct RocPoint {
    double threshold = 0.0;
    double tpr = 0.0;
    double fpr = 0.0;
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;
};

/// Score every run at every threshold (predicted attack iff ratio >
/// threshold, same strict inequality as detect). Output ordered by
/// ascending threshold. Requires at least one run of each class.
std::vector<RocPoint> roc_sweep(const std::vector<LabeledRun>& runs,
                                std::vector<double> thresholds);

/// Trapezoidal area under the (fpr, tpr) polyline, clamped to [0,1].
double auc(std::vector<RocPoint> points);

/// 0.00, 0.05, ..., 1.00.
std::vector<double> default_threshold_grid();

/// CSV: header `threshold,tp,fp,tn,fn,tpr,fpr`, rates to 4 decimal places.
std::string write_roc_csv(const std::vector<RocPoint>& points);

} // namespace logcorr
