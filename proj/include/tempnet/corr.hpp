#pragma once

#include "tempnet/panel.hpp"

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

namespace tempnet {

struct WindowConfig {
    int delta = 500; // window length in days
    int step = 25;   // shift between consecutive windows

    void validate(int n_obs) const; // throws ValidationError
};

/// Zero-variance pair substituted with correlation 0 in a window.
struct DegeneratePair {
    int window;
    int i;
    int j;
};

/// Rolling sequence of Pearson correlation matrices. Window t covers return
/// indices [t*step, t*step + delta) and is labeled by its end date.
struct CorrelationSequence {
    std::vector<Eigen::MatrixXd> windows; // T matrices, each n x n
    std::vector<std::string> anchors;     // end date per window
    WindowConfig config;
    std::vector<DegeneratePair> degenerate;
    std::vector<std::string> warnings;

    int n_windows() const { return static_cast<int>(windows.size()); }
    int n_stocks() const {
        return windows.empty() ? 0 : static_cast<int>(windows.front().rows());
    }
};

/// Pearson correlation of two equal-length series, clamped to [-1, 1].
/// Throws NumericError when either series has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// floor((L - delta) / step) + 1; throws ValidationError when L < delta.
long window_count(long n_obs, long delta, long step);

CorrelationSequence rolling_correlations(const ReturnPanel& panel,
                                         const WindowConfig& config);

} // namespace tempnet
