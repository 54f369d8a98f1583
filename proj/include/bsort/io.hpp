// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bsort/metrics.hpp"
#include "bsort/simgen.hpp"
#include "bsort/tracker.hpp"

namespace bsort {

// One comma-separated MOTChallenge row. Detections use id -1; ground truth
// rows carry class and visibility; tracking results carry court_x/court_y
// as a documented extension.
struct MotRow {
    int frame = 0;
    int id = -1;
    BBox bbox;
    double conf = 1.0;
    double extra1 = -1.0; // gt: class; results: court_x
    double extra2 = -1.0; // gt: visibility; results: court_y
    double extra3 = -1.0;
};

struct ParseWarnings {
    std::vector<std::string> messages;
};

// Rows come back sorted by frame (stable within a frame). Confidence above 1
// is clamped with a warning; malformed fields raise ParseError with the line
// number. Non-monotone frames are accepted and sorted.
std::vector<MotRow> parse_mot(const std::filesystem::path& file,
                              ParseWarnings* warnings = nullptr);
std::vector<MotRow> parse_mot_text(const std::string& text, const std::string& name,
                                   ParseWarnings* warnings = nullptr);

void write_mot(const std::filesystem::path& file, const std::vector<MotRow>& rows);

// Correspondence file: `image_x image_y court_x court_y` per line, `#` comments.
std::vector<Correspondence> parse_correspondences(const std::filesystem::path& file);
void write_correspondences(const std::filesystem::path& file,
                           const std::vector<Correspondence>& pairs);

// Embedding sidecar: `frame det_index d1 ... dD`, whitespace-delimited.
std::map<std::pair<int, int>, Embedding> parse_embeddings(const std::filesystem::path& file);
void write_embeddings(const std::filesystem::path& file,
                      const std::vector<EmbeddingRecord>& records);

// Key-value config file (`key = value`, `#` comments); keys mirror the CLI
// flags. Unknown keys raise ParseError.
void apply_config_file(const std::filesystem::path& file, TrackerConfig& config);

// Detections grouped per frame, with court points projected through h and
// sidecar embeddings attached by (frame, index-within-frame).
std::map<int, std::vector<Detection>> assemble_detections(
    const std::vector<MotRow>& det_rows,
    const std::map<std::pair<int, int>, Embedding>& embeddings,
    const Homography& h);

// Drives a full session over the per-frame detections.
Session run_session(const std::map<int, std::vector<Detection>>& frames,
                    const TrackerConfig& config);

std::vector<MotRow> rows_to_mot(const std::vector<OutputRow>& rows);
Sequence rows_to_sequence(const std::vector<OutputRow>& rows);
// class_filter: keep only gt rows whose class field matches (negative: keep all).
Sequence mot_to_sequence(const std::vector<MotRow>& rows, int class_filter = -1);

void write_event_log(const std::filesystem::path& file,
                     const std::vector<OcclusionEvent>& events);

std::string run_summary(const Session& session);

// Mean +- standard deviation over sequences, Table-style report.
std::string eval_report(const std::vector<std::string>& names,
                        const std::vector<EvalResult>& results);

// Scenario spec file: `key value` lines plus
// `event <STO|DTO> <onset> <a> <b> <swap 0|1> [duration] [absence]`.
ScenarioSpec parse_scenario(const std::filesystem::path& file);

// Ground truth as MOT rows (players only, class 1, visibility 1).
std::vector<MotRow> gt_to_mot(const GroundTruth& gt);
std::vector<MotRow> detections_to_mot(const Degraded& degraded);

// Static SVG of the court template plus per-id colored trajectories.
std::string render_court_svg(const std::vector<OutputRow>& rows,
                             int first_frame = 0, int last_frame = 1 << 30);

} // namespace bsort
