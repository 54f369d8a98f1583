// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <utility>
#include <vector>

#include "bsort/geometry.hpp"

namespace bsort {

struct SeqBox {
    int id = -1;
    BBox bbox;
};

// frame -> boxes present in that frame
using Sequence = std::map<int, std::vector<SeqBox>>;

double iou(const BBox& a, const BBox& b);

struct FrameMatching {
    std::vector<std::pair<int, int>> pairs; // (gt index, pred index)
};

// Maximum-cardinality, then maximum-total-IoU one-to-one matching among
// pairs with IoU >= a.
FrameMatching match_frame(std::span<const BBox> gt, std::span<const BBox> pred, double a);

struct ClearResult {
    double mota = 0.0; // percent
    int fp = 0;
    int fn = 0;
    int ids = 0;
    int num_gt = 0;
};

// CLEAR protocol at IoU 0.5 with match carryover between frames.
// Throws Error when the ground truth is empty (MOTA undefined).
ClearResult compute_clear(const Sequence& gt, const Sequence& pred);

struct HotaResult {
    double hota = 0.0; // percent
    double deta = 0.0;
    double assa = 0.0;
    double loca = 0.0;
};

// HOTA over the standard 19-threshold grid {0.05, 0.10, ..., 0.95}.
// Empty inputs yield zeros by convention.
HotaResult compute_hota(const Sequence& gt, const Sequence& pred);

struct EvalResult {
    double hota = 0.0, deta = 0.0, assa = 0.0, loca = 0.0;
    double mota = 0.0;
    int fp = 0, fn = 0, ids = 0;
};

EvalResult evaluate(const Sequence& gt, const Sequence& pred);

} // namespace bsort
