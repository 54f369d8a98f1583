// SPDX-License-Identifier: Apache-2.0
#include "bsort/association.hpp"

#include <algorithm>
#include <cmath>

namespace bsort {

CostMatrix build_cost_matrix(std::span<const CourtPoint> predicted,
                             std::span<const Detection> detections,
                             double gate_cm) {
    CostMatrix m;
    m.cost.resize(static_cast<int>(predicted.size()), static_cast<int>(detections.size()));
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            const double d = court_distance(predicted[i], detections[j].court);
            m.cost(i, j) = d <= gate_cm ? d : CostMatrix::kInfeasible;
        }
    }
    return m;
}

namespace {

// Square-matrix Kuhn-Munkres with row/column potentials, O(n^3).
// Returns col index assigned to each row.
std::vector<int> hungarian_square(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = std::numeric_limits<double>::infinity();
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j) {
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    }
    return row_to_col;
}

} // namespace

Assignment solve_assignment(const CostMatrix& c) {
    Assignment out;
    const int rows = c.rows();
    const int cols = c.cols();
    if (rows == 0 || cols == 0) {
        for (int i = 0; i < rows; ++i) out.unmatched_rows.push_back(i);
        for (int j = 0; j < cols; ++j) out.unmatched_cols.push_back(j);
        return out;
    }

    const int n = std::max(rows, cols);
    // Infeasible/padding cells get a uniform large cost so the solver never
    // prefers them over any chain of feasible entries; a tiny index-ordered
    // perturbation breaks ties toward low (row, col).
    const double big = 1e9;
    Eigen::MatrixXd square = Eigen::MatrixXd::Constant(n, n, big);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double v = c.cost(i, j);
            if (std::isfinite(v)) {
                square(i, j) = v + 1e-9 * (static_cast<double>(i) * n + j);
            }
        }
    }

    const std::vector<int> row_to_col = hungarian_square(square);
    std::vector<char> col_matched(cols, 0);
    for (int i = 0; i < rows; ++i) {
        const int j = row_to_col[i];
        if (j >= 0 && j < cols && std::isfinite(c.cost(i, j))) {
            out.matches.emplace_back(i, j);
            out.total_cost += c.cost(i, j);
            col_matched[j] = 1;
        } else {
            out.unmatched_rows.push_back(i);
        }
    }
    for (int j = 0; j < cols; ++j) {
        if (!col_matched[j]) out.unmatched_cols.push_back(j);
    }
    std::sort(out.matches.begin(), out.matches.end());
    return out;
}

AssociationResult associate_frame(std::span<const CourtPoint> predicted,
                                  std::span<const Detection> detections,
                                  const CascadeConfig& config) {
    AssociationResult result;
    std::vector<int> high_idx, low_idx;
    for (int j = 0; j < static_cast<int>(detections.size()); ++j) {
        const double conf = detections[j].confidence;
        if (conf >= config.high_conf) {
            high_idx.push_back(j);
        } else if (conf >= config.low_conf) {
            low_idx.push_back(j);
        }
        // below low_conf: filtered out entirely
    }

    auto run_stage = [&](const std::vector<int>& track_idx, const std::vector<int>& det_idx,
                         std::vector<int>& leftover_tracks, std::vector<int>& leftover_dets) {
        std::vector<CourtPoint> preds(track_idx.size());
        std::vector<Detection> dets(det_idx.size());
        for (size_t i = 0; i < track_idx.size(); ++i) preds[i] = predicted[track_idx[i]];
        for (size_t j = 0; j < det_idx.size(); ++j) dets[j] = detections[det_idx[j]];
        const Assignment a = solve_assignment(
            build_cost_matrix(preds, dets, config.gate_cm));
        for (const auto& [r, c] : a.matches) {
            result.matches.emplace_back(track_idx[r], det_idx[c]);
        }
        for (int r : a.unmatched_rows) leftover_tracks.push_back(track_idx[r]);
        for (int c : a.unmatched_cols) leftover_dets.push_back(det_idx[c]);
    };

    std::vector<int> all_tracks(predicted.size());
    for (int i = 0; i < static_cast<int>(predicted.size()); ++i) all_tracks[i] = i;

    std::vector<int> stage2_tracks, unmatched_high;
    run_stage(all_tracks, high_idx, stage2_tracks, unmatched_high);

    std::vector<int> unmatched_low;
    run_stage(stage2_tracks, low_idx, result.unmatched_tracks, unmatched_low);

    result.unmatched_detections = unmatched_high;
    result.unmatched_detections.insert(result.unmatched_detections.end(),
                                       unmatched_low.begin(), unmatched_low.end());
    std::sort(result.unmatched_detections.begin(), result.unmatched_detections.end());
    std::sort(result.matches.begin(), result.matches.end());
    return result;
}

} // namespace bsort
