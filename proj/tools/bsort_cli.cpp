// SPDX-License-Identifier: Apache-2.0
//
// Basketball court-plane multi-object tracker. Subcommands:
//   track     run the tracker over a detection file
//   eval      score a tracking result against ground truth
//   simulate  generate a synthetic scenario (gt + detections + embeddings)
//   sweep     HOTA grid over match gate x reacquisition distance
//   plot      render tracked court trajectories as SVG

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bsort/io.hpp"

namespace fs = std::filesystem;
using namespace bsort;

namespace {

int log_level() {
    const char* v = std::getenv("BSORT_LOG");
    return v ? std::atoi(v) : 0;
}

void add_tracker_flags(CLI::App* cmd, TrackerConfig& cfg, std::string& config_file,
                       bool& preset_paper) {
    cmd->add_option("--config", config_file, "key = value config file");
    cmd->add_option_function<std::string>(
           "--preset",
           [&preset_paper](const std::string& v) {
               if (v != "paper") throw CLI::ValidationError("--preset", "unknown preset: " + v);
               preset_paper = true;
           },
           "named threshold preset (only: paper)")
        ->type_name("NAME");
    cmd->add_option("--gate", cfg.gate, "match threshold in cm");
    cmd->add_option("--high-conf", cfg.high_conf, "high-score detection threshold");
    cmd->add_option("--low-conf", cfg.low_conf, "minimum detection confidence");
    cmd->add_option("--bgr-frame", cfg.bgr_frame, "frame at which the id set freezes");
    cmd->add_option("--long-lost-b", cfg.long_lost_b, "Lost -> LongLost after B frames");
    cmd->add_option("--rlli-alpha", cfg.rlli_alpha, "reacquisition appearance gate");
    cmd->add_option("--rlli-dist", cfg.rlli_dist, "reacquisition distance gate (cm)");
    cmd->add_option("--gamma", cfg.gamma, "STO/DTO classification threshold");
    cmd->add_option("--delta", cfg.delta, "DTO cross-similarity threshold");
    cmd->add_option("--eps-speed", cfg.eps_speed, "STO velocity threshold (cm/frame)");
    cmd->add_option("--zeta", cfg.zeta, "STO position threshold (cm)");
    cmd->add_option("--window-before", cfg.window_before, "N-frame before window");
    cmd->add_option("--window-after", cfg.window_after, "M-frame after window");
    cmd->add_flag("--no-bgr{false}", cfg.enable_bgr, "disable the 10-id restriction");
    cmd->add_flag("--no-rlli{false}", cfg.enable_rlli, "disable long-lost reacquisition");
    cmd->add_flag("--no-sto{false}", cfg.enable_sto, "disable same-team swap correction");
    cmd->add_flag("--no-dto{false}", cfg.enable_dto, "disable cross-team swap correction");
    cmd->add_flag("--streaming", cfg.streaming,
                  "correct swaps from the detection frame instead of rewriting");
}

TrackerConfig finalize_config(TrackerConfig cfg, const std::string& config_file,
                              bool preset_paper) {
    if (preset_paper) {
        TrackerConfig paper;
        paper.enable_bgr = cfg.enable_bgr;
        paper.enable_rlli = cfg.enable_rlli;
        paper.enable_sto = cfg.enable_sto;
        paper.enable_dto = cfg.enable_dto;
        paper.streaming = cfg.streaming;
        cfg = paper;
    }
    if (!config_file.empty()) apply_config_file(config_file, cfg);
    cfg.validate();
    return cfg;
}

Session track_sequence(const fs::path& dets, const fs::path& embeddings,
                       const fs::path& correspondences, const TrackerConfig& cfg) {
    ParseWarnings warnings;
    const auto det_rows = parse_mot(dets, &warnings);
    if (log_level() > 0) {
        for (const auto& w : warnings.messages) std::cerr << "warning: " << w << '\n';
    }
    std::map<std::pair<int, int>, Embedding> emb;
    if (!embeddings.empty()) {
        emb = parse_embeddings(embeddings);
    } else if (log_level() > 0 && (cfg.enable_sto || cfg.enable_dto || cfg.enable_rlli)) {
        std::cerr << "warning: no embeddings; occlusion events stay Unclassified\n";
    }
    const auto pairs = parse_correspondences(correspondences);
    const Homography h = estimate_homography(pairs).h;
    return run_session(assemble_detections(det_rows, emb, h), cfg);
}

int cmd_track(const fs::path& dets, const fs::path& embeddings,
              const fs::path& correspondences, const fs::path& out_dir,
              const TrackerConfig& cfg, bool plot) {
    const Session session = track_sequence(dets, embeddings, correspondences, cfg);
    fs::create_directories(out_dir);
    write_mot(out_dir / "track.txt", rows_to_mot(session.rows()));
    write_event_log(out_dir / "events.txt", session.events());
    std::ofstream(out_dir / "summary.txt") << run_summary(session);
    if (plot) {
        std::ofstream(out_dir / "court.svg") << render_court_svg(session.rows());
    }
    if (log_level() > 0) std::cerr << run_summary(session);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"basketball court-plane multi-object tracker"};
    app.require_subcommand(1);

    // track
    auto* track = app.add_subcommand("track", "run the tracker");
    fs::path dets, embeddings, correspondences, gt_path, out_dir = ".", pred_path, out_file;
    bool plot = false;
    TrackerConfig cfg;
    std::string config_file;
    bool preset_paper = false;
    track->add_option("--dets", dets, "MOT detection file")->required();
    track->add_option("--embeddings", embeddings, "embedding sidecar file");
    track->add_option("--correspondences", correspondences,
                      "image/court keypoint correspondence file")->required();
    track->add_option("--out", out_dir, "output directory");
    track->add_flag("--plot", plot, "also write court.svg");
    add_tracker_flags(track, cfg, config_file, preset_paper);

    // eval
    auto* eval = app.add_subcommand("eval", "score tracking output");
    int class_filter = -1;
    std::vector<std::string> eval_gt, eval_pred;
    eval->add_option("--gt", eval_gt, "ground-truth file(s)")->required();
    eval->add_option("--pred", eval_pred, "tracking result file(s)")->required();
    eval->add_option("--class-filter", class_filter, "keep only this gt class (-1: all)");
    eval->add_option("--out", out_file, "also write the report here");

    // simulate
    auto* sim = app.add_subcommand("simulate", "generate a synthetic scenario");
    fs::path scenario_file;
    ScenarioSpec spec;
    sim->add_option("--scenario", scenario_file, "scenario spec file");
    sim->add_option("--seed", spec.seed, "rng seed");
    sim->add_option("--frames", spec.frames, "sequence length");
    sim->add_option("--players", spec.num_players, "number of players");
    sim->add_option("--distractors", spec.num_distractors, "number of distractors");
    sim->add_option("--dropout", spec.dropout, "random detection dropout probability");
    sim->add_option("--out", out_dir, "output directory")->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "HOTA grid over gate x rlli_dist");
    std::vector<fs::path> seq_dirs;
    std::vector<double> gates{200, 220, 240, 260, 280, 300};
    std::vector<double> dists{150, 170, 190, 210, 230, 250};
    TrackerConfig sweep_cfg;
    std::string sweep_config_file;
    bool sweep_preset = false;
    sweep->add_option("--seq", seq_dirs,
                      "sequence dir(s) with det.txt, emb.txt, corr.txt, gt.txt")->required();
    sweep->add_option("--gates", gates, "match thresholds (cm)");
    sweep->add_option("--dists", dists, "reacquisition distances (cm)");
    sweep->add_option("--out", out_file, "also write the table here");
    add_tracker_flags(sweep, sweep_cfg, sweep_config_file, sweep_preset);

    // plot
    auto* plotc = app.add_subcommand("plot", "render tracked trajectories as SVG");
    int from_frame = 0, to_frame = 1 << 30;
    plotc->add_option("--track", pred_path, "tracking result file")->required();
    plotc->add_option("--out", out_file, "SVG output path")->required();
    plotc->add_option("--from", from_frame, "first frame");
    plotc->add_option("--to", to_frame, "last frame");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "error: usage: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*track) {
            return cmd_track(dets, embeddings, correspondences, out_dir,
                             finalize_config(cfg, config_file, preset_paper), plot);
        }
        if (*eval) {
            if (eval_gt.size() != eval_pred.size()) {
                std::cerr << "error: usage: --gt and --pred counts differ\n";
                return 1;
            }
            std::vector<std::string> names;
            std::vector<EvalResult> results;
            for (size_t i = 0; i < eval_gt.size(); ++i) {
                const Sequence g = mot_to_sequence(parse_mot(eval_gt[i]), class_filter);
                const Sequence p = mot_to_sequence(parse_mot(eval_pred[i]));
                names.push_back(fs::path(eval_pred[i]).parent_path().filename().string());
                results.push_back(evaluate(g, p));
            }
            const std::string report = eval_report(names, results);
            std::cout << report;
            if (!out_file.empty()) std::ofstream(out_file) << report;
            return 0;
        }
        if (*sim) {
            if (!scenario_file.empty()) spec = parse_scenario(scenario_file);
            const GroundTruth gt = generate(spec);
            const Degraded deg = degrade(gt, spec);
            fs::create_directories(out_dir);
            write_mot(out_dir / "gt.txt", gt_to_mot(gt));
            write_mot(out_dir / "det.txt", detections_to_mot(deg));
            write_embeddings(out_dir / "emb.txt", deg.embeddings);
            write_correspondences(out_dir / "corr.txt", camera_correspondences(gt));
            return 0;
        }
        if (*sweep) {
            const TrackerConfig base =
                finalize_config(sweep_cfg, sweep_config_file, sweep_preset);
            std::ostringstream table;
            table.precision(2);
            table << std::fixed << "dist\\gate";
            for (double g : gates) table << ' ' << g;
            table << '\n';
            for (double dist : dists) {
                table << dist;
                for (double gate : gates) {
                    TrackerConfig c = base;
                    c.gate = gate;
                    c.rlli_dist = dist;
                    double hota_sum = 0.0;
                    for (const auto& dir : seq_dirs) {
                        const Session s = track_sequence(dir / "det.txt", dir / "emb.txt",
                                                         dir / "corr.txt", c);
                        const Sequence g = mot_to_sequence(parse_mot(dir / "gt.txt"), 1);
                        hota_sum += compute_hota(g, rows_to_sequence(s.rows())).hota;
                    }
                    table << ' ' << hota_sum / static_cast<double>(seq_dirs.size());
                }
                table << '\n';
            }
            std::cout << table.str();
            if (!out_file.empty()) std::ofstream(out_file) << table.str();
            return 0;
        }
        if (*plotc) {
            const auto rows = parse_mot(pred_path);
            std::vector<OutputRow> out_rows;
            for (const auto& r : rows) {
                out_rows.push_back({r.frame, r.id, r.bbox, r.conf, {r.extra1, r.extra2}});
            }
            std::ofstream(out_file) << render_court_svg(out_rows, from_frame, to_frame);
            return 0;
        }
    } catch (const Error& e) {
        const char* kind = e.kind() == ErrorKind::Parse ? "parse" : "runtime";
        std::cerr << "error: " << kind << ": " << e.what() << '\n';
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
