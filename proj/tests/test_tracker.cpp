// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "bsort/tracker.hpp"

using namespace bsort;

namespace {

Detection det(double cx, double cy, double conf = 0.9) {
    Detection d;
    d.court = {cx, cy};
    d.confidence = conf;
    d.bbox = {cx, cy, 10, 10};
    return d;
}

Detection det_e(double cx, double cy, double e0, double e1, double conf = 0.9) {
    Detection d = det(cx, cy, conf);
    Embedding e(2);
    e << e0, e1;
    d.embedding = e;
    return d;
}

const Track* track_by_id(const Session& s, int id) {
    for (const auto& t : s.tracks()) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

std::set<int> ids_after(const Session& s, int frame) {
    std::set<int> out;
    for (const auto& r : s.rows()) {
        if (r.frame > frame) out.insert(r.id);
    }
    return out;
}

TrackerConfig small_config() {
    TrackerConfig c;
    c.bgr_frame = 10;
    c.long_lost_b = 5;
    return c;
}

} // namespace

TEST_CASE("ten well-separated detections give ten stable tracks, no switches") {
    TrackerConfig cfg;
    Session s(cfg);
    for (int f = 1; f <= 100; ++f) {
        std::vector<Detection> dets;
        for (int i = 0; i < 10; ++i) dets.push_back(det(200.0 + 250.0 * i, 700.0));
        s.step_frame(f, dets);
    }
    int active = 0;
    for (const auto& t : s.tracks()) active += t.state == TrackState::Active;
    CHECK(active == 10);

    // Each court column keeps one id throughout.
    std::map<int, std::set<int>> ids_by_column;
    for (const auto& r : s.rows()) {
        ids_by_column[static_cast<int>(std::lround(r.court.x))].insert(r.id);
    }
    CHECK(ids_by_column.size() == 10);
    for (const auto& [col, ids] : ids_by_column) CHECK(ids.size() == 1);
}

TEST_CASE("no frame emits the same id twice") {
    Session s(small_config());
    for (int f = 1; f <= 40; ++f) {
        std::vector<Detection> dets;
        for (int i = 0; i < 6; ++i) dets.push_back(det(300.0 * (i + 1), 500.0));
        s.step_frame(f, dets);
    }
    std::map<int, std::set<int>> per_frame;
    for (const auto& r : s.rows()) {
        CHECK(per_frame[r.frame].insert(r.id).second);
    }
}

TEST_CASE("out-of-order frames raise a sequencing error") {
    Session s(small_config());
    s.step_frame(5, {det(100, 100)});
    CHECK_THROWS_AS(s.step_frame(5, {det(100, 100)}), SequencingError);
    CHECK_THROWS_AS(s.step_frame(4, {det(100, 100)}), SequencingError);
}

TEST_CASE("unmatched beyond B frames becomes LongLost; gate cannot revive it") {
    TrackerConfig cfg = small_config();
    cfg.enable_rlli = false;
    Session s(cfg);
    // Two tracks so BGR keeps them both.
    auto both = [&](int f) {
        s.step_frame(f, {det_e(500, 700, 1, 0), det_e(2300, 700, 0, 1)});
    };
    for (int f = 1; f <= 15; ++f) both(f);
    // Track 1's player disappears.
    for (int f = 16; f <= 16 + cfg.long_lost_b + 1; ++f) {
        s.step_frame(f, {det_e(2300, 700, 0, 1)});
    }
    const Track* t1 = track_by_id(s, 1);
    REQUIRE(t1 != nullptr);
    CHECK(t1->state == TrackState::LongLost);
    REQUIRE(t1->lost_since.has_value());

    // A detection right on the stored position: without RLLI nothing revives.
    s.step_frame(60, {det_e(2300, 700, 0, 1), det_e(500, 700, 1, 0)});
    CHECK(track_by_id(s, 1)->state == TrackState::LongLost);
}

TEST_CASE("a briefly lost track is rematched by the gate with the same id") {
    TrackerConfig cfg = small_config();
    Session s(cfg);
    for (int f = 1; f <= 12; ++f) {
        s.step_frame(f, {det(500, 700), det(2300, 700)});
    }
    s.step_frame(13, {det(2300, 700)});  // track 1 misses one frame
    s.step_frame(14, {det(505, 700), det(2300, 700)});
    const auto& rows = s.rows();
    bool found = false;
    for (const auto& r : rows) {
        if (r.frame == 14 && std::abs(r.court.x - 505) < 1.0) {
            CHECK(r.id == 1);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("BGR keeps the ten longest tracks and freezes the id set") {
    TrackerConfig cfg;
    cfg.bgr_frame = 100;
    Session s(cfg);
    // 10 players from frame 1; distractors 11 and 12 appear later and die
    // early (lengths ~40 and ~12 at frame 100).
    for (int f = 1; f <= 120; ++f) {
        std::vector<Detection> dets;
        for (int i = 0; i < 10; ++i) dets.push_back(det(150.0 + 260.0 * i, 400.0));
        if (f >= 20 && f < 60) dets.push_back(det(1400, 1300)); // length 40
        if (f >= 50 && f < 62) dets.push_back(det(300, 1300));  // length 12
        s.step_frame(f, dets);
    }
    CHECK(s.bgr_applied());
    CHECK(s.stats().bgr_pruned == 2);
    const auto ids = ids_after(s, 100);
    CHECK(ids.size() == 10);
    CHECK(ids.count(11) == 0);
    CHECK(ids.count(12) == 0);

    // After BGR the emitted id set never grows: a brand-new detection column
    // cannot spawn a track.
    for (int f = 121; f <= 140; ++f) {
        std::vector<Detection> dets;
        for (int i = 0; i < 10; ++i) dets.push_back(det(150.0 + 260.0 * i, 400.0));
        dets.push_back(det(2000, 1350));
        s.step_frame(f, dets);
    }
    CHECK(ids_after(s, 100) == ids);
}

TEST_CASE("BGR tie at the boundary is broken by earliest creation frame") {
    TrackerConfig cfg;
    cfg.bgr_frame = 60;
    Session s(cfg);
    // Nine full-length tracks; two more with identical lengths but different
    // creation frames compete for the last slot.
    for (int f = 1; f <= 70; ++f) {
        std::vector<Detection> dets;
        for (int i = 0; i < 9; ++i) dets.push_back(det(150.0 + 260.0 * i, 300.0));
        if (f >= 10 && f < 30) dets.push_back(det(1000, 1300)); // id 10, len 20
        if (f >= 30 && f < 50) dets.push_back(det(2000, 1300)); // id 11, len 20
        s.step_frame(f, dets);
    }
    CHECK(s.bgr_applied());
    bool kept10 = track_by_id(s, 10) != nullptr;
    bool kept11 = track_by_id(s, 11) != nullptr;
    CHECK(kept10);
    CHECK_FALSE(kept11);
}

TEST_CASE("BGR with exactly ten tracks deletes nothing; underfull freezes all") {
    TrackerConfig cfg = small_config();
    Session s(cfg);
    for (int f = 1; f <= 12; ++f) {
        std::vector<Detection> dets;
        for (int i = 0; i < 4; ++i) dets.push_back(det(400.0 * (i + 1), 500.0));
        s.step_frame(f, dets);
    }
    CHECK(s.bgr_applied());
    CHECK(s.stats().bgr_pruned == 0);
    CHECK(s.stats().bgr_underfull);
    CHECK(s.tracks().size() == 4);
}

TEST_CASE("RLLI rematches within both gates; rejects cost or distance breaches") {
    auto run = [](double cos_sim, double dist) {
        TrackerConfig cfg = small_config();
        Session s(cfg);
        auto both = [&](int f) {
            s.step_frame(f, {det_e(500, 700, 1, 0), det_e(2300, 700, 0, 1)});
        };
        for (int f = 1; f <= 15; ++f) both(f);
        for (int f = 16; f <= 25; ++f) s.step_frame(f, {det_e(2300, 700, 0, 1)});
        // Track 1 is LongLost, stored position (500, 700), appearance (1, 0).
        const double angle = std::acos(cos_sim);
        s.step_frame(26, {det_e(2300, 700, 0, 1),
                          det_e(500 + dist, 700, std::cos(angle), std::sin(angle))});
        return std::pair<int, TrackState>{s.stats().rlli_rematches,
                                          track_by_id(s, 1)->state};
    };

    SUBCASE("cost 0.1, distance 200: rematch") {
        const auto [n, state] = run(0.9, 200.0);
        CHECK(n == 1);
        CHECK(state == TrackState::Active);
    }
    SUBCASE("cost 0.5, distance 100: appearance gate fails") {
        const auto [n, state] = run(0.5, 100.0);
        CHECK(n == 0);
        CHECK(state == TrackState::LongLost);
    }
    SUBCASE("cost 0.1, distance 400: distance gate fails") {
        const auto [n, state] = run(0.9, 400.0);
        CHECK(n == 0);
        CHECK(state == TrackState::LongLost);
    }
}

TEST_CASE("RLLI: the lower-cost LongLost track wins a contested detection") {
    TrackerConfig cfg = small_config();
    Session s(cfg);
    // Three tracks; two of them vanish and go LongLost.
    auto all3 = [&](int f) {
        s.step_frame(f, {det_e(400, 700, 1, 0), det_e(600, 700, 0.96, 0.28),
                         det_e(2300, 700, 0, 1)});
    };
    for (int f = 1; f <= 15; ++f) all3(f);
    for (int f = 16; f <= 25; ++f) s.step_frame(f, {det_e(2300, 700, 0, 1)});
    REQUIRE(track_by_id(s, 1)->state == TrackState::LongLost);
    REQUIRE(track_by_id(s, 2)->state == TrackState::LongLost);

    // One detection halfway between them, appearance exactly track 1's.
    s.step_frame(26, {det_e(2300, 700, 0, 1), det_e(500, 700, 1, 0)});
    CHECK(track_by_id(s, 1)->state == TrackState::Active);
    CHECK(track_by_id(s, 2)->state == TrackState::LongLost);
}

TEST_CASE("apply_swap relabels rows from the given frame; double swap is identity") {
    TrackerConfig cfg = small_config();
    Session s(cfg);
    for (int f = 1; f <= 30; ++f) {
        s.step_frame(f, {det(500, 700), det(2300, 700)});
    }
    const auto before = s.rows();
    s.apply_swap(1, 2, 20);
    for (const auto& r : s.rows()) {
        if (r.frame < 20) continue;
        if (std::abs(r.court.x - 500) < 1.0) CHECK(r.id == 2);
        if (std::abs(r.court.x - 2300) < 1.0) CHECK(r.id == 1);
    }
    s.apply_swap(1, 2, 20);
    const auto& after = s.rows();
    REQUIRE(after.size() == before.size());
    for (size_t i = 0; i < after.size(); ++i) {
        CHECK(after[i].frame == before[i].frame);
        CHECK(after[i].id == before[i].id);
        CHECK(after[i].court.x == doctest::Approx(before[i].court.x));
    }
}

TEST_CASE("config validation rejects nonsense") {
    TrackerConfig c;
    c.low_conf = 0.9; // above high_conf
    CHECK_THROWS_AS(c.validate(), SpecError);
    TrackerConfig c2;
    c2.gate = -1.0;
    CHECK_THROWS_AS(c2.validate(), SpecError);
    TrackerConfig ok;
    CHECK_NOTHROW(ok.validate());
}

TEST_CASE("tentative tracks need three consecutive matches to emit rows") {
    Session s(small_config());
    s.step_frame(1, {det(500, 700)});
    s.step_frame(2, {det(500, 700)});
    CHECK(s.rows().empty());
    s.step_frame(3, {det(500, 700)});
    REQUIRE(s.rows().size() == 1);
    CHECK(s.rows()[0].frame == 3);
}
