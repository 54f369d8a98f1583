// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bsort/association.hpp"
#include "bsort/motion.hpp"
#include "bsort/occlusion.hpp"

namespace bsort {

enum class TrackState { Tentative, Active, Lost, LongLost };

const char* to_string(TrackState s);

struct Track {
    int id = -1;
    TrackState state = TrackState::Tentative;
    KinematicState kin;
    int created_frame = 0;
    int length = 0; // matched frames
    int consecutive_matches = 0;
    std::optional<int> lost_since;

    std::map<int, CourtPoint> court_history; // matched frames only
    std::map<int, BBox> bbox_history;
    std::map<int, double> conf_history;
    EmbeddingHistory embedding_history;

    // Snapshots taken when the track goes Lost; RLLI compares against these.
    std::optional<CourtPoint> preloss_position;
    std::optional<Embedding> preloss_appearance;
};

struct TrackerConfig {
    double gate = 260.0;     // cm, match threshold in court space
    double high_conf = 0.6;
    double low_conf = 0.1;
    int bgr_frame = 100;
    int long_lost_b = 30;    // Lost -> LongLost after this many frames
    double rlli_alpha = 0.2; // appearance gate for reacquisition
    double rlli_dist = 250.0; // cm, distance gate for reacquisition
    double gamma = 0.2;      // STO/DTO classification threshold
    double delta = 0.2;      // DTO cross-similarity threshold
    double eps_speed = 3.0;  // cm/frame, STO velocity threshold
    double zeta = 3.0;       // cm, STO position threshold
    int window_before = 10;  // N
    int window_after = 10;   // M
    int confirm_hits = 3;    // consecutive matches before Tentative -> Active

    bool enable_bgr = true;
    bool enable_rlli = true;
    bool enable_sto = true;
    bool enable_dto = true;
    bool sto_autocorrect = true;
    bool streaming = false; // false: batch, swaps rewrite from resolution frame

    MotionNoise noise;

    void validate() const; // throws SpecError on nonsense values
};

struct OutputRow {
    int frame = 0;
    int id = -1;
    BBox bbox;
    double conf = 0.0;
    CourtPoint court;
};

struct RunStats {
    int frames = 0;
    int tracks_spawned = 0;
    int bgr_pruned = 0;
    bool bgr_underfull = false; // fewer than 10 tracks alive at the BGR frame
    int rlli_rematches = 0;
    int sto_swaps = 0;
    int dto_swaps = 0;
    int occlusion_events = 0;
};

// One tracking session per sequence; single writer.
class Session {
public:
    explicit Session(TrackerConfig config);

    // Detections must already carry court points. Frames must be strictly
    // increasing; gaps are allowed and handled via the prediction dt.
    void step_frame(int frame, const std::vector<Detection>& detections);

    // Runs any occlusion checks still waiting for their after-window.
    void finalize();

    const std::vector<OutputRow>& rows() const { return rows_; }
    const std::vector<OcclusionEvent>& events() const { return events_; }
    const std::vector<Track>& tracks() const { return tracks_; }
    const RunStats& stats() const { return stats_; }
    const TrackerConfig& config() const { return config_; }
    bool bgr_applied() const { return bgr_applied_; }

    // Exchanges ids a and b on all emitted rows from from_frame onward and
    // relabels the tracks' internal histories accordingly.
    void apply_swap(int id_a, int id_b, int from_frame);

private:
    void apply_bgr(int frame);
    void rlli_rematch(int frame, const std::vector<Detection>& detections,
                      const std::vector<int>& unmatched_detections);
    void open_event(int frame, const Track& lost_track);
    void run_pending_checks(int frame, bool force);
    void run_event_checks(OcclusionEvent& event, int frame);
    Track* find_track(int id);

    TrackerConfig config_;
    std::vector<Track> tracks_;
    std::vector<OutputRow> rows_;
    std::vector<OcclusionEvent> events_;
    std::vector<size_t> pending_events_; // indices into events_
    struct SwapRecord {
        int id_a = 0, id_b = 0, onset = 0;
    };
    std::vector<SwapRecord> applied_swaps_;
    RunStats stats_;
    int next_id_ = 1;
    int last_frame_ = -1;
    bool bgr_applied_ = false;
};

} // namespace bsort
