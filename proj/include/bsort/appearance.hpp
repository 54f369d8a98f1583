// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <map>

#include "bsort/errors.hpp"

namespace bsort {

using Embedding = Eigen::VectorXd;

// Per-track embedded frames; frames without an embedding are simply absent.
using EmbeddingHistory = std::map<int, Embedding>;

// Cosine distance 1 - (a.b)/(|a||b|), in [0, 2].
double appearance_cost(const Embedding& a, const Embedding& b);

enum class WindowDirection { Before, After };

struct EmbeddingWindow {
    int track_id = -1;
    int first_frame = 0;
    int last_frame = 0;
    Embedding mean; // arithmetic mean over the window, renormalized to unit
                    // norm; kept as-is (zero vector) when the mean cancels.
};

// Mean over up to `length` embedded frames at or before (Before) / at or
// after (After) the anchor frame. Frames without embeddings are skipped.
// Throws EmptyWindow when no embedded frame falls in the range.
EmbeddingWindow window_mean(const EmbeddingHistory& history, int track_id,
                            int anchor_frame, int length, WindowDirection dir);

} // namespace bsort
