// SPDX-License-Identifier: Apache-2.0
#include "bsort/occlusion.hpp"

#include <cmath>

namespace bsort {

const char* to_string(OcclusionLabel label) {
    switch (label) {
        case OcclusionLabel::STO: return "STO";
        case OcclusionLabel::DTO: return "DTO";
        default: return "Unclassified";
    }
}

namespace {

std::optional<double> safe_cost(const std::optional<Embedding>& a,
                                const std::optional<Embedding>& b) {
    if (!a || !b) return std::nullopt;
    if (a->norm() <= 0.0 || b->norm() <= 0.0) return std::nullopt;
    return appearance_cost(*a, *b);
}

} // namespace

OcclusionLabel classify_event(const EventWindows& w, double gamma) {
    const auto before = safe_cost(w.a_before, w.b_before);
    const auto after = safe_cost(w.a_after, w.b_after);
    if (!before && !after) return OcclusionLabel::Unclassified;
    if ((before && *before < gamma) || (after && *after < gamma)) {
        return OcclusionLabel::STO;
    }
    return OcclusionLabel::DTO;
}

bool dto_swap_check(const EventWindows& w, double delta) {
    const auto ab = safe_cost(w.a_before, w.b_after);
    const auto ba = safe_cost(w.b_before, w.a_after);
    if (!ab || !ba) return false; // missing windows: no-swap
    return *ab < delta && *ba < delta;
}

bool sto_swap_check(const EventWindows& w, double eps_speed, double zeta) {
    if (!w.p_a_after || !w.p_b_after) return false;
    if (w.f_c == w.f_n || w.f_m == w.f_c) return false; // undefined velocity

    const double dt_before = std::abs(static_cast<double>(w.f_c - w.f_n));
    const double dt_after = std::abs(static_cast<double>(w.f_m - w.f_c));

    const double a_before_dist = court_distance(w.p_c_occ, w.p_a_before);
    const double a_after_dist = court_distance(*w.p_a_after, w.p_c_occ);
    const double b_before_dist = court_distance(w.p_c_occ, w.p_b_before);
    const double b_after_dist = court_distance(*w.p_b_after, w.p_c_occ);

    const double va_before = a_before_dist / dt_before;
    const double va_after = a_after_dist / dt_after;
    const double vb_before = b_before_dist / dt_before;
    const double vb_after = b_after_dist / dt_after;

    return std::abs(va_before - va_after) > eps_speed &&
           std::abs(vb_before - vb_after) > eps_speed &&
           (a_before_dist - a_after_dist) > zeta &&
           (b_before_dist - b_after_dist) > zeta;
}

} // namespace bsort
