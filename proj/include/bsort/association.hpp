// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bsort/appearance.hpp"
#include "bsort/geometry.hpp"

namespace bsort {

struct Detection {
    int frame = 0;
    BBox bbox;
    double confidence = 0.0;
    CourtPoint court; // filled by projecting the foot point
    std::optional<Embedding> embedding;
};

// Rows = tracks, cols = detections. Entries are court-plane Euclidean
// distances in cm; entries beyond the gate are +inf (infeasible).
struct CostMatrix {
    Eigen::MatrixXd cost; // rows x cols, infeasible = +inf

    int rows() const { return static_cast<int>(cost.rows()); }
    int cols() const { return static_cast<int>(cost.cols()); }
    static constexpr double kInfeasible = std::numeric_limits<double>::infinity();
};

CostMatrix build_cost_matrix(std::span<const CourtPoint> predicted,
                             std::span<const Detection> detections,
                             double gate_cm);

struct Assignment {
    std::vector<std::pair<int, int>> matches; // (row, col), sorted by row
    std::vector<int> unmatched_rows;
    std::vector<int> unmatched_cols;
    double total_cost = 0.0;
};

// Minimum-total-cost one-to-one matching over the feasible entries.
// Ties between optimal matchings are broken toward lowest (row, col).
Assignment solve_assignment(const CostMatrix& c);

struct CascadeConfig {
    double gate_cm = 260.0;
    double high_conf = 0.6;
    double low_conf = 0.1;
};

struct AssociationResult {
    std::vector<std::pair<int, int>> matches; // (track index, detection index)
    std::vector<int> unmatched_tracks;
    std::vector<int> unmatched_detections; // excludes filtered (< low_conf) detections
};

// Two-stage cascade: stage 1 matches every track against detections with
// confidence >= high_conf; stage 2 matches the remaining tracks against
// detections in [low_conf, high_conf). Detections below low_conf are dropped.
AssociationResult associate_frame(std::span<const CourtPoint> predicted,
                                  std::span<const Detection> detections,
                                  const CascadeConfig& config);

} // namespace bsort
