// SPDX-License-Identifier: Apache-2.0
#include "bsort/appearance.hpp"

namespace bsort {

double appearance_cost(const Embedding& a, const Embedding& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na <= 0.0 || nb <= 0.0) {
        throw UndefinedCost("appearance cost undefined for zero-norm embedding");
    }
    return 1.0 - a.dot(b) / (na * nb);
}

EmbeddingWindow window_mean(const EmbeddingHistory& history, int track_id,
                            int anchor_frame, int length, WindowDirection dir) {
    Embedding sum;
    int count = 0;
    int first = anchor_frame, last = anchor_frame;

    if (dir == WindowDirection::Before) {
        // Most recent embedded frames at or before the anchor.
        for (auto it = history.upper_bound(anchor_frame); it != history.begin() && count < length;) {
            --it;
            if (count == 0) {
                sum = it->second;
                first = last = it->first;
            } else {
                sum += it->second;
                first = it->first;
            }
            ++count;
        }
    } else {
        for (auto it = history.lower_bound(anchor_frame); it != history.end() && count < length; ++it) {
            if (count == 0) {
                sum = it->second;
                first = last = it->first;
            } else {
                sum += it->second;
                last = it->first;
            }
            ++count;
        }
    }

    if (count == 0) {
        throw EmptyWindow("no embedded frames in window at frame " + std::to_string(anchor_frame));
    }
    Embedding mean = sum / static_cast<double>(count);
    const double norm = mean.norm();
    if (norm > 0.0) {
        mean /= norm;
    }
    return {track_id, first, last, mean};
}

} // namespace bsort
