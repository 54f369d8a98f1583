// SPDX-License-Identifier: Apache-2.0
#include "bsort/tracker.hpp"

#include <algorithm>
#include <cmath>

namespace bsort {

const char* to_string(TrackState s) {
    switch (s) {
        case TrackState::Tentative: return "Tentative";
        case TrackState::Active: return "Active";
        case TrackState::Lost: return "Lost";
        case TrackState::LongLost: return "LongLost";
    }
    return "?";
}

void TrackerConfig::validate() const {
    if (gate <= 0 || rlli_alpha <= 0 || rlli_dist <= 0 || gamma <= 0 || delta <= 0 ||
        eps_speed <= 0 || zeta <= 0) {
        throw SpecError("tracker thresholds must be positive");
    }
    if (low_conf >= high_conf) {
        throw SpecError("low_conf must be below high_conf");
    }
    if (bgr_frame <= 0 || long_lost_b <= 0 || window_before < 1 || window_after < 1 ||
        confirm_hits < 1) {
        throw SpecError("tracker frame parameters must be positive");
    }
}

Session::Session(TrackerConfig config) : config_(std::move(config)) {
    config_.validate();
}

Track* Session::find_track(int id) {
    for (auto& t : tracks_) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

void Session::step_frame(int frame, const std::vector<Detection>& detections) {
    if (frame <= last_frame_) {
        throw SequencingError("frame " + std::to_string(frame) +
                              " not after frame " + std::to_string(last_frame_));
    }
    const double dt = last_frame_ < 0 ? 0.0 : static_cast<double>(frame - last_frame_);
    last_frame_ = frame;
    ++stats_.frames;

    // Predict every non-LongLost track; Lost tracks keep predicting without
    // updates, LongLost positions stay frozen at their pre-loss snapshot.
    std::vector<int> candidate_idx;
    std::vector<CourtPoint> predicted;
    for (int i = 0; i < static_cast<int>(tracks_.size()); ++i) {
        if (tracks_[i].state == TrackState::LongLost) continue;
        if (dt >= 1.0) {
            tracks_[i].kin = kf_predict(tracks_[i].kin, dt, config_.noise);
        }
        candidate_idx.push_back(i);
        predicted.push_back(tracks_[i].kin.position());
    }

    const AssociationResult assoc = associate_frame(
        predicted, detections, {config_.gate, config_.high_conf, config_.low_conf});

    // Matched tracks: measurement update, histories, state transitions.
    for (const auto& [ci, dj] : assoc.matches) {
        Track& t = tracks_[candidate_idx[ci]];
        const Detection& d = detections[dj];
        t.kin = kf_update(t.kin, d.court, config_.noise);
        t.court_history[frame] = d.court;
        t.bbox_history[frame] = d.bbox;
        t.conf_history[frame] = d.confidence;
        if (d.embedding) t.embedding_history[frame] = *d.embedding;
        ++t.length;
        ++t.consecutive_matches;
        if (t.state == TrackState::Tentative && t.consecutive_matches >= config_.confirm_hits) {
            t.state = TrackState::Active;
        } else if (t.state == TrackState::Lost) {
            t.state = TrackState::Active;
            t.lost_since.reset();
            for (size_t ei : pending_events_) {
                OcclusionEvent& e = events_[ei];
                if (e.lost_track_id == t.id && !e.resolution_frame) {
                    e.resolution_frame = frame;
                    break;
                }
            }
        }
    }

    // Unmatched tracks: Tentatives die, Actives go Lost, Lost tracks age.
    std::vector<int> to_delete;
    for (int ci : assoc.unmatched_tracks) {
        Track& t = tracks_[candidate_idx[ci]];
        t.consecutive_matches = 0;
        switch (t.state) {
            case TrackState::Tentative:
                to_delete.push_back(candidate_idx[ci]);
                break;
            case TrackState::Active: {
                t.state = TrackState::Lost;
                t.lost_since = frame;
                const int onset = t.court_history.empty() ? frame - 1
                                                          : t.court_history.rbegin()->first;
                t.preloss_position = t.court_history.empty()
                                         ? t.kin.position()
                                         : t.court_history.rbegin()->second;
                try {
                    t.preloss_appearance = window_mean(t.embedding_history, t.id, onset,
                                                       config_.window_before,
                                                       WindowDirection::Before)
                                               .mean;
                } catch (const EmptyWindow&) {
                    t.preloss_appearance.reset();
                }
                open_event(frame, t);
                break;
            }
            case TrackState::Lost:
                if (frame - *t.lost_since > config_.long_lost_b) {
                    if (config_.enable_bgr) {
                        t.state = TrackState::LongLost;
                    } else {
                        to_delete.push_back(candidate_idx[ci]); // classic max-age deletion
                    }
                }
                break;
            case TrackState::LongLost:
                break;
        }
    }
    std::sort(to_delete.rbegin(), to_delete.rend());
    for (int idx : to_delete) {
        tracks_.erase(tracks_.begin() + idx);
    }

    if (config_.enable_bgr && !bgr_applied_ && frame >= config_.bgr_frame) {
        apply_bgr(frame);
    }

    // Unmatched detections: spawn new tracks until BGR freezes the id set,
    // afterwards they are offered only to RLLI.
    if (bgr_applied_) {
        if (config_.enable_rlli) {
            rlli_rematch(frame, detections, assoc.unmatched_detections);
        }
    } else {
        for (int dj : assoc.unmatched_detections) {
            const Detection& d = detections[dj];
            Track t;
            t.id = next_id_++;
            t.state = config_.confirm_hits <= 1 ? TrackState::Active : TrackState::Tentative;
            t.kin = kf_init(d.court, config_.noise);
            t.created_frame = frame;
            t.length = 1;
            t.consecutive_matches = 1;
            t.court_history[frame] = d.court;
            t.bbox_history[frame] = d.bbox;
            t.conf_history[frame] = d.confidence;
            if (d.embedding) t.embedding_history[frame] = *d.embedding;
            tracks_.push_back(std::move(t));
            ++stats_.tracks_spawned;
        }
    }

    run_pending_checks(frame, /*force=*/false);

    // Emit one row per Active track matched in this frame, ordered by id.
    std::vector<const Track*> emitting;
    for (const auto& t : tracks_) {
        if (t.state == TrackState::Active && t.court_history.count(frame)) {
            emitting.push_back(&t);
        }
    }
    std::sort(emitting.begin(), emitting.end(),
              [](const Track* a, const Track* b) { return a->id < b->id; });
    for (const Track* t : emitting) {
        rows_.push_back({frame, t->id, t->bbox_history.at(frame), t->conf_history.at(frame),
                         t->court_history.at(frame)});
    }
}

void Session::apply_bgr(int frame) {
    (void)frame;
    std::vector<int> order(tracks_.size());
    for (size_t i = 0; i < tracks_.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (tracks_[a].length != tracks_[b].length) return tracks_[a].length > tracks_[b].length;
        if (tracks_[a].created_frame != tracks_[b].created_frame)
            return tracks_[a].created_frame < tracks_[b].created_frame;
        return tracks_[a].id < tracks_[b].id;
    });

    if (tracks_.size() < 10) {
        stats_.bgr_underfull = true;
    }
    std::vector<char> keep(tracks_.size(), 0);
    for (size_t r = 0; r < order.size() && r < 10; ++r) keep[order[r]] = 1;

    std::vector<Track> survivors;
    survivors.reserve(10);
    for (size_t i = 0; i < tracks_.size(); ++i) {
        if (keep[i]) {
            survivors.push_back(std::move(tracks_[i]));
        } else {
            ++stats_.bgr_pruned;
        }
    }
    tracks_ = std::move(survivors);
    bgr_applied_ = true;
}

void Session::rlli_rematch(int frame, const std::vector<Detection>& detections,
                           const std::vector<int>& unmatched_detections) {
    std::vector<int> lost_idx;
    for (int i = 0; i < static_cast<int>(tracks_.size()); ++i) {
        if (tracks_[i].state == TrackState::LongLost) lost_idx.push_back(i);
    }
    if (lost_idx.empty() || unmatched_detections.empty()) return;

    CostMatrix m;
    m.cost.resize(static_cast<int>(lost_idx.size()),
                  static_cast<int>(unmatched_detections.size()));
    m.cost.setConstant(CostMatrix::kInfeasible);
    for (int r = 0; r < m.rows(); ++r) {
        const Track& t = tracks_[lost_idx[r]];
        if (!t.preloss_appearance || !t.preloss_position) continue;
        for (int c = 0; c < m.cols(); ++c) {
            const Detection& d = detections[unmatched_detections[c]];
            if (!d.embedding) continue;
            double cost;
            try {
                cost = appearance_cost(*t.preloss_appearance, *d.embedding);
            } catch (const UndefinedCost&) {
                continue;
            }
            const double dist = court_distance(*t.preloss_position, d.court);
            if (cost <= config_.rlli_alpha && dist <= config_.rlli_dist) {
                m.cost(r, c) = cost;
            }
        }
    }

    const Assignment a = solve_assignment(m);
    for (const auto& [r, c] : a.matches) {
        Track& t = tracks_[lost_idx[r]];
        const Detection& d = detections[unmatched_detections[c]];
        t.state = TrackState::Active;
        t.lost_since.reset();
        t.kin = kf_init(d.court, config_.noise);
        t.court_history[frame] = d.court;
        t.bbox_history[frame] = d.bbox;
        t.conf_history[frame] = d.confidence;
        if (d.embedding) t.embedding_history[frame] = *d.embedding;
        ++t.length;
        t.consecutive_matches = 1;
        ++stats_.rlli_rematches;
        for (size_t ei : pending_events_) {
            OcclusionEvent& e = events_[ei];
            if (e.lost_track_id == t.id && !e.resolution_frame) {
                e.resolution_frame = frame;
                break;
            }
        }
    }
}

void Session::open_event(int frame, const Track& lost_track) {
    OcclusionEvent e;
    e.lost_track_id = lost_track.id;
    e.onset_frame = lost_track.court_history.empty() ? frame - 1
                                                     : lost_track.court_history.rbegin()->first;
    e.lost_preloss_pos = lost_track.preloss_position.value_or(lost_track.kin.position());

    // Two nearest live tracks by current court position; ties to lower id.
    struct Cand { double dist; int id; CourtPoint pos; };
    std::vector<Cand> cands;
    for (const auto& t : tracks_) {
        if (t.id == lost_track.id || t.state == TrackState::Tentative ||
            t.state == TrackState::LongLost) {
            continue;
        }
        const CourtPoint p = t.kin.position();
        cands.push_back({court_distance(e.lost_preloss_pos, p), t.id, p});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        return a.id < b.id;
    });
    for (size_t i = 0; i < cands.size() && i < 2; ++i) {
        e.neighbor_ids.push_back(cands[i].id);
        e.neighbor_preloss_pos.push_back(cands[i].pos);
    }

    pending_events_.push_back(events_.size());
    events_.push_back(std::move(e));
    ++stats_.occlusion_events;
}

void Session::run_pending_checks(int frame, bool force) {
    std::vector<size_t> still_pending;
    for (size_t ei : pending_events_) {
        OcclusionEvent& e = events_[ei];
        if (find_track(e.lost_track_id) == nullptr) {
            continue; // track pruned (BGR or deletion): drop the event
        }
        // When both participants of an occlusion lose their track, each side
        // opens its own event; once one side's swap has been applied, running
        // the mirror event would swap the pair straight back. Drop sibling
        // events of a recently corrected pair.
        const bool suppressed = std::any_of(
            applied_swaps_.begin(), applied_swaps_.end(), [&](const SwapRecord& s) {
                return (e.lost_track_id == s.id_a || e.lost_track_id == s.id_b) &&
                       std::abs(e.onset_frame - s.onset) <= config_.long_lost_b;
            });
        if (suppressed) continue;
        if (!e.resolution_frame) {
            if (!force) still_pending.push_back(ei);
            continue;
        }
        if (!force && frame < *e.resolution_frame + config_.window_after - 1) {
            still_pending.push_back(ei);
            continue;
        }
        run_event_checks(e, frame);
    }
    pending_events_ = std::move(still_pending);
}

void Session::run_event_checks(OcclusionEvent& event, int frame) {
    Track* a = find_track(event.lost_track_id);
    if (!a || !event.resolution_frame) return;
    const int f_n = event.onset_frame;
    const int resolution = *event.resolution_frame;
    const int f_m = std::min(resolution + config_.window_after - 1, frame);

    auto position_at_or_before = [](const Track& t, int f) -> std::optional<CourtPoint> {
        auto it = t.court_history.upper_bound(f);
        if (it == t.court_history.begin()) return std::nullopt;
        --it;
        return it->second;
    };
    auto window = [&](const Track& t, int anchor, int len,
                      WindowDirection dir) -> std::optional<Embedding> {
        try {
            return window_mean(t.embedding_history, t.id, anchor, len, dir).mean;
        } catch (const EmptyWindow&) {
            return std::nullopt;
        }
    };

    bool first_pair = true;
    for (size_t ni = 0; ni < event.neighbor_ids.size(); ++ni) {
        Track* b = find_track(event.neighbor_ids[ni]);
        if (!b) continue;

        EventWindows w;
        w.f_n = f_n;
        w.f_m = f_m;
        w.a_before = window(*a, f_n, config_.window_before, WindowDirection::Before);
        w.b_before = window(*b, f_n, config_.window_before, WindowDirection::Before);
        w.a_after = window(*a, resolution, config_.window_after, WindowDirection::After);
        w.b_after = window(*b, resolution, config_.window_after, WindowDirection::After);
        w.p_a_before = position_at_or_before(*a, f_n).value_or(event.lost_preloss_pos);
        w.p_b_before = position_at_or_before(*b, f_n).value_or(
            ni < event.neighbor_preloss_pos.size() ? event.neighbor_preloss_pos[ni]
                                                   : b->kin.position());
        // Latest matched position of each track inside the after window.
        auto after_pos = [&](const Track& t) -> std::optional<CourtPoint> {
            std::optional<CourtPoint> out;
            for (auto it = t.court_history.lower_bound(resolution);
                 it != t.court_history.end() && it->first <= f_m; ++it) {
                out = it->second;
            }
            return out;
        };
        w.p_a_after = after_pos(*a);
        w.p_b_after = after_pos(*b);

        // P_C^occ: the neighbor is the participant still detectable during
        // the occlusion; sample its middle matched frame. When it was not
        // detected either, fall back to the midpoint of the pre-loss
        // positions at the middle of the gap.
        std::vector<std::pair<int, CourtPoint>> during;
        for (auto it = b->court_history.upper_bound(f_n);
             it != b->court_history.end() && it->first < resolution; ++it) {
            during.emplace_back(it->first, it->second);
        }
        if (!during.empty()) {
            const auto& mid = during[during.size() / 2];
            w.f_c = mid.first;
            w.p_c_occ = mid.second;
        } else {
            w.f_c = (f_n + resolution) / 2;
            w.p_c_occ = {(w.p_a_before.x + w.p_b_before.x) / 2.0,
                         (w.p_a_before.y + w.p_b_before.y) / 2.0};
        }

        const OcclusionLabel label = classify_event(w, config_.gamma);
        if (first_pair) {
            event.label = label;
            event.occlusion_frame = w.f_c;
            event.p_c_occ = w.p_c_occ;
            first_pair = false;
        }
        if (!event.swap_checks_enabled()) break;

        bool swap = false;
        if (label == OcclusionLabel::DTO && config_.enable_dto) {
            swap = dto_swap_check(w, config_.delta);
        } else if (label == OcclusionLabel::STO && config_.enable_sto &&
                   config_.sto_autocorrect) {
            swap = sto_swap_check(w, config_.eps_speed, config_.zeta);
        }
        if (swap) {
            const int from = config_.streaming ? frame : resolution;
            apply_swap(a->id, b->id, from);
            event.swap_applied = true;
            event.swapped_with = event.neighbor_ids[ni];
            applied_swaps_.push_back({a->id, b->id, event.onset_frame});
            if (label == OcclusionLabel::DTO) {
                ++stats_.dto_swaps;
            } else {
                ++stats_.sto_swaps;
            }
            break;
        }
    }
}

void Session::apply_swap(int id_a, int id_b, int from_frame) {
    Track* ta = find_track(id_a);
    Track* tb = find_track(id_b);
    if (!ta || !tb || ta == tb) return;

    // The physical continuations exchange identities: swap the whole
    // tracks, restore the ids, then hand the pre-swap history prefixes back.
    std::swap(*ta, *tb);
    std::swap(ta->id, tb->id);
    auto exchange_prefix = [from_frame](auto& ma, auto& mb) {
        auto take_prefix = [from_frame](auto& m) {
            std::decay_t<decltype(m)> prefix;
            auto it = m.begin();
            while (it != m.end() && it->first < from_frame) {
                prefix.insert(*it);
                it = m.erase(it);
            }
            return prefix;
        };
        auto pa = take_prefix(ma);
        auto pb = take_prefix(mb);
        ma.insert(pb.begin(), pb.end());
        mb.insert(pa.begin(), pa.end());
    };
    exchange_prefix(ta->court_history, tb->court_history);
    exchange_prefix(ta->bbox_history, tb->bbox_history);
    exchange_prefix(ta->conf_history, tb->conf_history);
    exchange_prefix(ta->embedding_history, tb->embedding_history);
    std::swap(ta->created_frame, tb->created_frame);
    ta->length = static_cast<int>(ta->court_history.size());
    tb->length = static_cast<int>(tb->court_history.size());

    for (auto& row : rows_) {
        if (row.frame < from_frame) continue;
        if (row.id == id_a) {
            row.id = id_b;
        } else if (row.id == id_b) {
            row.id = id_a;
        }
    }
}

void Session::finalize() {
    run_pending_checks(last_frame_, /*force=*/true);
}

} // namespace bsort
