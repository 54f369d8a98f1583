// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bsort/association.hpp"
#include "bsort/geometry.hpp"
#include "bsort/metrics.hpp"

namespace bsort {

enum class EventType { STO, DTO };

// One scripted occlusion episode. Both participants are steered to cross
// at `onset`; during the blackout window of `duration` frames all but one
// participant is undetectable. `swap` makes the participants bounce off
// each other so a motion-only tracker exchanges their ids. `absence > 0`
// keeps participant a hidden (hovering near the crossing point) for that
// many extra frames, producing a long-lost episode.
struct OcclusionSpecEvent {
    EventType type = EventType::DTO;
    int onset = 0;
    int a = 0; // player indices, 0-based
    int b = 1;
    bool swap = false;
    int duration = 12;
    int absence = 0;
};

struct ScenarioSpec {
    int num_players = 10; // two teams of num_players/2
    int num_distractors = 3;
    int frames = 1500;
    std::uint64_t seed = 1;
    double vmax = 30.0;       // cm/frame motion cap
    double px_noise = 1.0;    // detection box noise, pixels
    double dropout = 0.0;     // random per-frame miss probability
    int embed_dim = 128;
    double embed_noise = 0.05;  // per-frame embedding jitter
    double player_offset = 0.035; // per-player deviation from the team prototype
    std::vector<OcclusionSpecEvent> events;

    void validate() const; // throws SpecError on inconsistent events
};

struct PlayerTraj {
    int id = 0;   // 1-based, stable
    int team = 0; // 0 or 1
    std::vector<CourtPoint> pos;  // index = frame - 1
    std::vector<char> detectable; // blackout / absence windows cleared
    std::vector<char> partial;    // low-confidence shoulder frames
};

struct DistractorTraj {
    int id = 0;
    int first_frame = 1;
    int last_frame = 1;
    std::vector<CourtPoint> pos; // index = frame - first_frame
};

struct EventAnnotation {
    EventType type;
    int onset = 0;
    int id_a = 0;
    int id_b = 0;
    bool swap = false;
    int absence = 0;
    CourtPoint meeting;
};

struct GroundTruth {
    int frames = 0;
    std::vector<PlayerTraj> players;
    std::vector<DistractorTraj> distractors;
    Homography court_to_image = Homography::identity();
    std::vector<EventAnnotation> events;
};

GroundTruth generate(const ScenarioSpec& spec);

struct EmbeddingRecord {
    int frame = 0;
    int det_index = 0; // index within the frame's detections
    Embedding value;
};

struct Degraded {
    // Per-frame detections, bbox/confidence/embedding filled; court points
    // are left for the tracking pipeline to project.
    std::map<int, std::vector<Detection>> detections;
    std::vector<EmbeddingRecord> embeddings;
};

Degraded degrade(const GroundTruth& gt, const ScenarioSpec& spec);

// Image box for a court position under the synthetic camera: foot point at
// the projected position, height shrinking with distance from the camera.
BBox synth_box(const Homography& court_to_image, const CourtPoint& p);

// Players only (distractors are not ground truth), image space.
Sequence gt_sequence(const GroundTruth& gt);

// The 20-template-point correspondence set under the synthetic camera.
std::vector<Correspondence> camera_correspondences(const GroundTruth& gt);

} // namespace bsort
