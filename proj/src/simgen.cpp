// SPDX-License-Identifier: Apache-2.0
#include "bsort/simgen.hpp"

#include <algorithm>
#include <cmath>

namespace bsort {

namespace {

constexpr int kStageLead = 80;   // frames before onset when steering starts
constexpr int kEntryLead = 14;   // straight-line approach at the entry speed
constexpr int kExitSpan = 30;    // scripted frames after the crossing
constexpr double kHoverRadius = 60.0; // cm, long-lost participants stay near m

struct Phase {
    int arrive_frame;  // position reaches target exactly here
    CourtPoint target;
};

CourtPoint clamp_court(CourtPoint p, double margin) {
    p.x = std::clamp(p.x, margin, kCourtLengthCm - margin);
    p.y = std::clamp(p.y, margin, kCourtWidthCm - margin);
    return p;
}

CourtPoint step_towards(const CourtPoint& from, const CourtPoint& to, double max_step) {
    const double d = court_distance(from, to);
    if (d <= max_step || d == 0.0) return to;
    const double s = max_step / d;
    return {from.x + (to.x - from.x) * s, from.y + (to.y - from.y) * s};
}

} // namespace

void ScenarioSpec::validate() const {
    if (num_players < 2 || num_players % 2 != 0) {
        throw SpecError("num_players must be even and >= 2");
    }
    if (frames < 1 || num_distractors < 0 || vmax <= 0 || embed_dim < 2) {
        throw SpecError("invalid scenario dimensions");
    }
    const int half = num_players / 2;
    for (const auto& e : events) {
        if (e.a < 0 || e.a >= num_players || e.b < 0 || e.b >= num_players || e.a == e.b) {
            throw SpecError("event participants out of range");
        }
        const bool same_team = (e.a < half) == (e.b < half);
        if (e.type == EventType::STO && !same_team) {
            throw SpecError("STO participants must share a team");
        }
        if (e.type == EventType::DTO && same_team) {
            throw SpecError("DTO participants must be on different teams");
        }
        if (e.onset - kStageLead < 2 || e.onset + e.duration + e.absence + kExitSpan >= frames) {
            throw SpecError("event onset too close to the sequence boundary");
        }
        if (e.duration < 2) {
            throw SpecError("event duration must be at least 2 frames");
        }
    }
}

GroundTruth generate(const ScenarioSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> ux(200.0, kCourtLengthCm - 200.0);
    std::uniform_real_distribution<double> uy(150.0, kCourtWidthCm - 150.0);
    std::uniform_real_distribution<double> uspeed(5.0, 0.5 * spec.vmax);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    GroundTruth gt;
    gt.frames = spec.frames;

    // Court -> image camera: mildly perspective trapezoid in a 1920x1080 view.
    {
        const std::vector<Correspondence> corners = {
            {{0.0, 0.0}, {160.0, 180.0}},
            {{kCourtLengthCm, 0.0}, {1760.0, 180.0}},
            {{kCourtLengthCm, kCourtWidthCm}, {1880.0, 1020.0}},
            {{0.0, kCourtWidthCm}, {40.0, 1020.0}},
        };
        gt.court_to_image = estimate_homography(corners).h;
    }

    const int half = spec.num_players / 2;
    struct Sim {
        CourtPoint pos;
        CourtPoint waypoint;
        double roam_speed = 10.0;
        std::vector<Phase> script; // consumed front to back
        int hover_until = -1;
        CourtPoint hover_center;
    };
    std::vector<Sim> sims(spec.num_players);
    gt.players.resize(spec.num_players);
    for (int p = 0; p < spec.num_players; ++p) {
        gt.players[p].id = p + 1;
        gt.players[p].team = p < half ? 0 : 1;
        gt.players[p].pos.reserve(spec.frames);
        gt.players[p].detectable.assign(spec.frames, 1);
        gt.players[p].partial.assign(spec.frames, 0);
        sims[p].pos = {ux(rng), uy(rng)};
        sims[p].waypoint = {ux(rng), uy(rng)};
        sims[p].roam_speed = uspeed(rng);
    }

    // Events indexed by the frame where steering must start.
    std::map<int, std::vector<const OcclusionSpecEvent*>> steer_at;
    for (const auto& e : spec.events) {
        steer_at[e.onset - kStageLead].push_back(&e);
    }

    auto hide = [&](int player, int first, int last) {
        for (int f = std::max(1, first); f <= std::min(spec.frames, last); ++f) {
            gt.players[player].detectable[f - 1] = 0;
        }
        for (int f : {first - 3, first - 2, first - 1, last + 1, last + 2, last + 3}) {
            if (f >= 1 && f <= spec.frames) gt.players[player].partial[f - 1] = 1;
        }
    };

    for (int frame = 1; frame <= spec.frames; ++frame) {
        auto sit = steer_at.find(frame);
        if (sit != steer_at.end()) {
            for (const OcclusionSpecEvent* e : sit->second) {
                Sim& sa = sims[e->a];
                Sim& sb = sims[e->b];
                CourtPoint m = clamp_court({(sa.pos.x + sb.pos.x) / 2.0,
                                            (sa.pos.y + sb.pos.y) / 2.0}, 250.0);
                const double s_in = e->absence > 0 ? 8.0 : 24.0;
                const double s_out = (e->type == EventType::STO && e->swap) ? 2.0 : s_in;
                const int b_half = e->duration / 2;

                auto install = [&](Sim& s, int player, bool is_a) {
                    double dx = m.x - s.pos.x, dy = m.y - s.pos.y;
                    double d = std::hypot(dx, dy);
                    if (d < 1.0) {
                        std::uniform_real_distribution<double> uang(0.0, 2.0 * M_PI);
                        const double ang = uang(rng);
                        dx = std::cos(ang);
                        dy = std::sin(ang);
                        d = 1.0;
                    }
                    const CourtPoint dir{dx / d, dy / d};
                    const CourtPoint entry{m.x - dir.x * s_in * kEntryLead,
                                           m.y - dir.y * s_in * kEntryLead};
                    const double stage_dist = court_distance(s.pos, entry);
                    if (stage_dist / (kStageLead - kEntryLead) > spec.vmax) {
                        throw SpecError("event participants too far apart to meet by onset");
                    }
                    s.script.push_back({e->onset - kEntryLead, entry});
                    s.script.push_back({e->onset, m});
                    if (is_a && e->absence > 0) {
                        s.hover_until = e->onset + b_half + e->absence;
                        s.hover_center = m;
                    } else {
                        const double sign = e->swap ? -1.0 : 1.0;
                        s.script.push_back({e->onset + kExitSpan,
                                            clamp_court({m.x + sign * dir.x * s_out * kExitSpan,
                                                         m.y + sign * dir.y * s_out * kExitSpan},
                                                        60.0)});
                    }
                    (void)player;
                };
                install(sa, e->a, true);
                install(sb, e->b, false);

                if (e->absence > 0) {
                    hide(e->a, e->onset - b_half, e->onset + b_half + e->absence);
                } else {
                    // Blackout covers both participants and begins just before
                    // the crossing: at loss time they are each other's nearest
                    // neighbors, and with neither observed during the gap the
                    // occlusion anchor falls back to the crossing midpoint.
                    hide(e->a, e->onset - 2, e->onset + e->duration - 3);
                    hide(e->b, e->onset - 2, e->onset + e->duration - 3);
                }
                gt.events.push_back({e->type, e->onset, e->a + 1, e->b + 1, e->swap,
                                     e->absence, m});
            }
        }

        for (int p = 0; p < spec.num_players; ++p) {
            Sim& s = sims[p];
            if (!s.script.empty()) {
                const Phase& ph = s.script.front();
                const int remaining = ph.arrive_frame - (frame - 1);
                if (remaining <= 1) {
                    s.pos = ph.target;
                    s.script.erase(s.script.begin());
                } else {
                    s.pos = step_towards(s.pos, ph.target,
                                         court_distance(s.pos, ph.target) / remaining);
                }
            } else if (frame - 1 <= s.hover_until) {
                std::uniform_real_distribution<double> ustep(-3.0, 3.0);
                CourtPoint next{s.pos.x + ustep(rng), s.pos.y + ustep(rng)};
                if (court_distance(next, s.hover_center) > kHoverRadius) {
                    next = step_towards(next, s.hover_center, 3.0);
                }
                s.pos = next;
            } else {
                if (court_distance(s.pos, s.waypoint) < s.roam_speed) {
                    s.waypoint = {ux(rng), uy(rng)};
                    s.roam_speed = uspeed(rng);
                }
                s.pos = step_towards(s.pos, s.waypoint, s.roam_speed);
            }
            gt.players[p].pos.push_back(s.pos);
        }
    }

    // Short-lived distractors hugging the court edges, pruned by BGR.
    std::uniform_int_distribution<int> ustart(5, 25);
    std::uniform_int_distribution<int> ulife(30, 45);
    for (int d = 0; d < spec.num_distractors; ++d) {
        DistractorTraj t;
        t.id = 1000 + d + 1;
        t.first_frame = ustart(rng);
        t.last_frame = std::min(spec.frames, t.first_frame + ulife(rng));
        const bool top = u01(rng) < 0.5;
        CourtPoint pos{ux(rng), top ? -60.0 : kCourtWidthCm + 60.0};
        std::uniform_real_distribution<double> udrift(-4.0, 4.0);
        for (int f = t.first_frame; f <= t.last_frame; ++f) {
            pos.x = std::clamp(pos.x + udrift(rng), 50.0, kCourtLengthCm - 50.0);
            pos.y += udrift(rng) * 0.2;
            t.pos.push_back(pos);
        }
        gt.distractors.push_back(std::move(t));
    }

    return gt;
}

BBox synth_box(const Homography& court_to_image, const CourtPoint& p) {
    const CourtPoint foot = project(
        court_to_image, ImagePoint{p.x, p.y}); // court coords in, pixels out
    const double h = 60.0 + 0.12 * (foot.y - 180.0);
    const double w = 0.45 * h;
    return {foot.x - w / 2.0, foot.y - h, w, h};
}

Degraded degrade(const GroundTruth& gt, const ScenarioSpec& spec) {
    std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> npix(0.0, spec.px_noise);
    std::normal_distribution<double> nembed(0.0, 1.0);
    std::uniform_real_distribution<double> uconf_hi(0.85, 0.99);
    std::uniform_real_distribution<double> uconf_lo(0.2, 0.5);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    // Team prototypes are orthogonal unit vectors; each player sits a small
    // fixed offset away from its team's prototype.
    std::vector<Embedding> protos(2, Embedding::Zero(spec.embed_dim));
    protos[0](0) = 1.0;
    protos[1](1) = 1.0;
    std::vector<Embedding> player_vec;
    for (const auto& pl : gt.players) {
        Embedding v = protos[pl.team];
        for (int k = 0; k < spec.embed_dim; ++k) v(k) += spec.player_offset * nembed(rng);
        player_vec.push_back(v.normalized());
    }
    std::vector<Embedding> distractor_vec;
    for (size_t d = 0; d < gt.distractors.size(); ++d) {
        Embedding v(spec.embed_dim);
        for (int k = 0; k < spec.embed_dim; ++k) v(k) = nembed(rng);
        distractor_vec.push_back(v.normalized());
    }

    Degraded out;
    for (int frame = 1; frame <= gt.frames; ++frame) {
        std::vector<Detection>& dets = out.detections[frame];
        auto add = [&](const CourtPoint& pos, double conf, const Embedding& base) {
            BBox b = synth_box(gt.court_to_image, pos);
            b.x += npix(rng);
            b.y += npix(rng);
            b.w *= 1.0 + 0.02 * npix(rng);
            b.h *= 1.0 + 0.02 * npix(rng);
            Detection d;
            d.frame = frame;
            d.bbox = b;
            d.confidence = conf;
            Embedding e = base;
            for (int k = 0; k < spec.embed_dim; ++k) e(k) += spec.embed_noise * nembed(rng);
            d.embedding = e.normalized();
            out.embeddings.push_back({frame, static_cast<int>(dets.size()), *d.embedding});
            dets.push_back(std::move(d));
        };

        for (size_t p = 0; p < gt.players.size(); ++p) {
            const auto& pl = gt.players[p];
            if (!pl.detectable[frame - 1]) continue;
            if (spec.dropout > 0.0 && u01(rng) < spec.dropout) continue;
            const double conf = pl.partial[frame - 1] ? uconf_lo(rng) : uconf_hi(rng);
            add(pl.pos[frame - 1], conf, player_vec[p]);
        }
        for (size_t d = 0; d < gt.distractors.size(); ++d) {
            const auto& t = gt.distractors[d];
            if (frame < t.first_frame || frame > t.last_frame) continue;
            add(t.pos[frame - t.first_frame], 0.7, distractor_vec[d]);
        }
        if (dets.empty()) out.detections.erase(frame);
    }
    return out;
}

Sequence gt_sequence(const GroundTruth& gt) {
    Sequence seq;
    for (int frame = 1; frame <= gt.frames; ++frame) {
        for (const auto& pl : gt.players) {
            seq[frame].push_back({pl.id, synth_box(gt.court_to_image, pl.pos[frame - 1])});
        }
    }
    return seq;
}

std::vector<Correspondence> camera_correspondences(const GroundTruth& gt) {
    std::vector<Correspondence> pairs;
    for (const CourtPoint& c : court_template()) {
        const CourtPoint px = project(gt.court_to_image, ImagePoint{c.x, c.y});
        pairs.push_back({ImagePoint{px.x, px.y}, c});
    }
    return pairs;
}

} // namespace bsort
