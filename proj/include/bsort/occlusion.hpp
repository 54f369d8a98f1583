// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "bsort/appearance.hpp"
#include "bsort/geometry.hpp"

namespace bsort {

enum class OcclusionLabel { Unclassified, STO, DTO };

const char* to_string(OcclusionLabel label);

// One occlusion episode: a track went Lost with two recorded nearest
// neighbors; the episode resolves when the track is rematched.
struct OcclusionEvent {
    int lost_track_id = -1;
    std::vector<int> neighbor_ids;        // nearest first; may have < 2 entries
    int onset_frame = 0;                  // F_N: last matched frame before loss
    std::optional<int> occlusion_frame;   // F_C: where p_c_occ was sampled
    std::optional<int> resolution_frame;  // rematch frame; start of the after window
    std::optional<CourtPoint> p_c_occ;    // the one detectable participant's position
    OcclusionLabel label = OcclusionLabel::Unclassified;
    bool swap_applied = false;
    int swapped_with = -1;

    // Pre-loss snapshots taken at onset.
    CourtPoint lost_preloss_pos;
    std::vector<CourtPoint> neighbor_preloss_pos;

    bool swap_checks_enabled() const { return neighbor_ids.size() >= 2; }
};

// Everything the classification and swap tests need for one candidate
// pair (a = the lost track, b = one neighbor), extracted from track
// histories by the session.
struct EventWindows {
    // Window-mean embeddings; absent when no frame in the window carried one.
    std::optional<Embedding> a_before, b_before, a_after, b_after;

    CourtPoint p_a_before, p_b_before; // positions at F_N
    std::optional<CourtPoint> p_a_after, p_b_after; // positions at F_M

    int f_n = 0;
    int f_c = 0;
    int f_m = 0;
    CourtPoint p_c_occ;
};

// STO when either the before-windows or the after-windows of the two
// players look alike (cost < gamma); DTO otherwise. Unclassified when
// neither side has embeddings to compare.
OcclusionLabel classify_event(const EventWindows& w, double gamma);

// DTO swap: both cross-comparisons (a-before vs b-after, b-before vs
// a-after) below delta.
bool dto_swap_check(const EventWindows& w, double delta);

// STO swap: per-track speeds across the occlusion (cm/frame, measured
// through p_c_occ) both change by more than eps_speed, and both tracks
// covered more ground before the occlusion than after by more than zeta.
bool sto_swap_check(const EventWindows& w, double eps_speed, double zeta);

} // namespace bsort
