// SPDX-License-Identifier: Apache-2.0
#include "bsort/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bsort {

namespace {

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw ParseError("cannot open " + file.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_double(const std::string& tok, const std::string& where) {
    try {
        size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + ": unparseable field '" + tok + "'");
    }
}

} // namespace

std::vector<MotRow> parse_mot_text(const std::string& text, const std::string& name,
                                   ParseWarnings* warnings) {
    std::vector<MotRow> rows;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> toks;
        std::string tok;
        std::istringstream ls(line);
        while (std::getline(ls, tok, ',')) toks.push_back(tok);
        if (toks.size() < 6) {
            throw ParseError(name + ":" + std::to_string(lineno) + ": expected >= 6 fields");
        }
        const std::string where = name + ":" + std::to_string(lineno);
        MotRow r;
        r.frame = static_cast<int>(parse_double(toks[0], where));
        r.id = static_cast<int>(parse_double(toks[1], where));
        r.bbox = {parse_double(toks[2], where), parse_double(toks[3], where),
                  parse_double(toks[4], where), parse_double(toks[5], where)};
        if (toks.size() > 6) r.conf = parse_double(toks[6], where);
        if (toks.size() > 7) r.extra1 = parse_double(toks[7], where);
        if (toks.size() > 8) r.extra2 = parse_double(toks[8], where);
        if (toks.size() > 9) r.extra3 = parse_double(toks[9], where);
        if (r.conf > 1.0) {
            if (warnings) {
                warnings->messages.push_back(where + ": confidence " + toks[6] +
                                             " clamped to 1");
            }
            r.conf = 1.0;
        }
        rows.push_back(r);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const MotRow& a, const MotRow& b) { return a.frame < b.frame; });
    return rows;
}

std::vector<MotRow> parse_mot(const std::filesystem::path& file, ParseWarnings* warnings) {
    return parse_mot_text(read_file(file), file.string(), warnings);
}

void write_mot(const std::filesystem::path& file, const std::vector<MotRow>& rows) {
    std::ofstream out(file);
    if (!out) throw Error(ErrorKind::Runtime, "cannot write " + file.string());
    out.precision(6);
    out << std::fixed;
    for (const auto& r : rows) {
        out << r.frame << ',' << r.id << ',' << r.bbox.x << ',' << r.bbox.y << ','
            << r.bbox.w << ',' << r.bbox.h << ',' << r.conf << ',' << r.extra1 << ','
            << r.extra2;
        if (r.extra3 >= 0.0) out << ',' << r.extra3;
        out << '\n';
    }
}

std::vector<Correspondence> parse_correspondences(const std::filesystem::path& file) {
    std::vector<Correspondence> pairs;
    std::istringstream in(read_file(file));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        Correspondence c;
        if (!(ls >> c.image.x >> c.image.y >> c.court.x >> c.court.y)) {
            throw ParseError(file.string() + ":" + std::to_string(lineno) +
                             ": expected 4 numbers");
        }
        pairs.push_back(c);
    }
    return pairs;
}

void write_correspondences(const std::filesystem::path& file,
                           const std::vector<Correspondence>& pairs) {
    std::ofstream out(file);
    if (!out) throw Error(ErrorKind::Runtime, "cannot write " + file.string());
    out << "# image_x image_y court_x court_y\n";
    out.precision(8);
    for (const auto& c : pairs) {
        out << c.image.x << ' ' << c.image.y << ' ' << c.court.x << ' ' << c.court.y << '\n';
    }
}

std::map<std::pair<int, int>, Embedding> parse_embeddings(const std::filesystem::path& file) {
    std::map<std::pair<int, int>, Embedding> out;
    std::istringstream in(read_file(file));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        int frame = 0, idx = 0;
        if (!(ls >> frame >> idx)) {
            throw ParseError(file.string() + ":" + std::to_string(lineno) +
                             ": expected frame and detection index");
        }
        std::vector<double> vals;
        double v;
        while (ls >> v) vals.push_back(v);
        if (vals.empty()) {
            throw ParseError(file.string() + ":" + std::to_string(lineno) +
                             ": empty embedding");
        }
        Embedding e(static_cast<int>(vals.size()));
        for (size_t k = 0; k < vals.size(); ++k) e(static_cast<int>(k)) = vals[k];
        out[{frame, idx}] = std::move(e);
    }
    return out;
}

void write_embeddings(const std::filesystem::path& file,
                      const std::vector<EmbeddingRecord>& records) {
    std::ofstream out(file);
    if (!out) throw Error(ErrorKind::Runtime, "cannot write " + file.string());
    out.precision(8);
    for (const auto& r : records) {
        out << r.frame << ' ' << r.det_index;
        for (int k = 0; k < r.value.size(); ++k) out << ' ' << r.value(k);
        out << '\n';
    }
}

void apply_config_file(const std::filesystem::path& file, TrackerConfig& config) {
    std::istringstream in(read_file(file));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(file.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string where = file.string() + ":" + std::to_string(lineno);
        auto num = [&] { return parse_double(val, where); };
        auto flag = [&] {
            if (val == "true" || val == "1" || val == "on") return true;
            if (val == "false" || val == "0" || val == "off") return false;
            throw ParseError(where + ": expected boolean, got '" + val + "'");
        };
        if (key == "gate") config.gate = num();
        else if (key == "high_conf") config.high_conf = num();
        else if (key == "low_conf") config.low_conf = num();
        else if (key == "bgr_frame") config.bgr_frame = static_cast<int>(num());
        else if (key == "long_lost_b") config.long_lost_b = static_cast<int>(num());
        else if (key == "rlli_alpha") config.rlli_alpha = num();
        else if (key == "rlli_dist") config.rlli_dist = num();
        else if (key == "gamma") config.gamma = num();
        else if (key == "delta") config.delta = num();
        else if (key == "eps_speed") config.eps_speed = num();
        else if (key == "zeta") config.zeta = num();
        else if (key == "window_before") config.window_before = static_cast<int>(num());
        else if (key == "window_after") config.window_after = static_cast<int>(num());
        else if (key == "confirm_hits") config.confirm_hits = static_cast<int>(num());
        else if (key == "enable_bgr") config.enable_bgr = flag();
        else if (key == "enable_rlli") config.enable_rlli = flag();
        else if (key == "enable_sto") config.enable_sto = flag();
        else if (key == "enable_dto") config.enable_dto = flag();
        else if (key == "sto_autocorrect") config.sto_autocorrect = flag();
        else if (key == "streaming") config.streaming = flag();
        else if (key == "meas_sigma") config.noise.meas_sigma = num();
        else if (key == "accel_sigma") config.noise.accel_sigma = num();
        else throw ParseError(where + ": unknown key '" + key + "'");
    }
    config.validate();
}

std::map<int, std::vector<Detection>> assemble_detections(
    const std::vector<MotRow>& det_rows,
    const std::map<std::pair<int, int>, Embedding>& embeddings,
    const Homography& h) {
    std::map<int, std::vector<Detection>> out;
    for (const auto& r : det_rows) {
        Detection d;
        d.frame = r.frame;
        d.bbox = r.bbox;
        d.confidence = std::clamp(r.conf, 0.0, 1.0);
        d.court = project(h, foot_point(r.bbox));
        auto& frame_dets = out[r.frame];
        auto e = embeddings.find({r.frame, static_cast<int>(frame_dets.size())});
        if (e != embeddings.end()) d.embedding = e->second;
        frame_dets.push_back(std::move(d));
    }
    return out;
}

Session run_session(const std::map<int, std::vector<Detection>>& frames,
                    const TrackerConfig& config) {
    Session session(config);
    for (const auto& [frame, dets] : frames) {
        session.step_frame(frame, dets);
    }
    session.finalize();
    return session;
}

std::vector<MotRow> rows_to_mot(const std::vector<OutputRow>& rows) {
    std::vector<MotRow> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        MotRow m;
        m.frame = r.frame;
        m.id = r.id;
        m.bbox = r.bbox;
        m.conf = r.conf;
        m.extra1 = r.court.x;
        m.extra2 = r.court.y;
        out.push_back(m);
    }
    return out;
}

Sequence rows_to_sequence(const std::vector<OutputRow>& rows) {
    Sequence seq;
    for (const auto& r : rows) {
        seq[r.frame].push_back({r.id, r.bbox});
    }
    return seq;
}

Sequence mot_to_sequence(const std::vector<MotRow>& rows, int class_filter) {
    Sequence seq;
    for (const auto& r : rows) {
        if (class_filter >= 0 && static_cast<int>(r.extra1) != class_filter) continue;
        seq[r.frame].push_back({r.id, r.bbox});
    }
    return seq;
}

void write_event_log(const std::filesystem::path& file,
                     const std::vector<OcclusionEvent>& events) {
    std::ofstream out(file);
    if (!out) throw Error(ErrorKind::Runtime, "cannot write " + file.string());
    out << "# onset_frame resolution_frame id_lost id_n1 id_n2 label swap_applied\n";
    for (const auto& e : events) {
        out << e.onset_frame << ' ' << (e.resolution_frame ? *e.resolution_frame : -1) << ' '
            << e.lost_track_id << ' '
            << (e.neighbor_ids.size() > 0 ? e.neighbor_ids[0] : -1) << ' '
            << (e.neighbor_ids.size() > 1 ? e.neighbor_ids[1] : -1) << ' '
            << to_string(e.label) << ' ' << (e.swap_applied ? 1 : 0) << '\n';
    }
}

std::string run_summary(const Session& session) {
    const RunStats& s = session.stats();
    std::ostringstream out;
    out << "frames_processed " << s.frames << '\n'
        << "tracks_spawned " << s.tracks_spawned << '\n'
        << "bgr_applied " << (session.bgr_applied() ? 1 : 0) << '\n'
        << "bgr_pruned " << s.bgr_pruned << '\n'
        << "bgr_underfull " << (s.bgr_underfull ? 1 : 0) << '\n'
        << "rlli_rematches " << s.rlli_rematches << '\n'
        << "occlusion_events " << s.occlusion_events << '\n'
        << "sto_swaps " << s.sto_swaps << '\n'
        << "dto_swaps " << s.dto_swaps << '\n';
    return out.str();
}

std::string eval_report(const std::vector<std::string>& names,
                        const std::vector<EvalResult>& results) {
    auto mean_std = [&](auto get) {
        double mean = 0.0;
        for (const auto& r : results) mean += get(r);
        mean /= results.empty() ? 1.0 : static_cast<double>(results.size());
        double var = 0.0;
        for (const auto& r : results) {
            const double d = get(r) - mean;
            var += d * d;
        }
        if (results.size() > 1) var /= static_cast<double>(results.size() - 1);
        return std::make_pair(mean, std::sqrt(var));
    };

    std::ostringstream out;
    out.precision(2);
    out << std::fixed;
    out << "sequence HOTA DetA AssA LocA MOTA FP FN IDS\n";
    for (size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        out << (i < names.size() ? names[i] : "seq" + std::to_string(i)) << ' ' << r.hota
            << ' ' << r.deta << ' ' << r.assa << ' ' << r.loca << ' ' << r.mota << ' '
            << r.fp << ' ' << r.fn << ' ' << r.ids << '\n';
    }
    if (results.size() > 1) {
        auto [h, hs] = mean_std([](const EvalResult& r) { return r.hota; });
        auto [a, as] = mean_std([](const EvalResult& r) { return r.assa; });
        auto [m, ms] = mean_std([](const EvalResult& r) { return r.mota; });
        auto [fp, fps] = mean_std([](const EvalResult& r) { return double(r.fp); });
        auto [fn, fns] = mean_std([](const EvalResult& r) { return double(r.fn); });
        auto [ids, idss] = mean_std([](const EvalResult& r) { return double(r.ids); });
        out << "mean HOTA " << h << "+-" << hs << " AssA " << a << "+-" << as << " MOTA " << m
            << "+-" << ms << " FP " << fp << "+-" << fps << " FN " << fn << "+-" << fns
            << " IDS " << ids << "+-" << idss << '\n';
    }
    return out.str();
}

ScenarioSpec parse_scenario(const std::filesystem::path& file) {
    ScenarioSpec spec;
    std::istringstream in(read_file(file));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        const std::string where = file.string() + ":" + std::to_string(lineno);
        auto want = [&](auto& v) {
            if (!(ls >> v)) throw ParseError(where + ": missing value for " + key);
        };
        if (key == "players") want(spec.num_players);
        else if (key == "distractors") want(spec.num_distractors);
        else if (key == "frames") want(spec.frames);
        else if (key == "seed") want(spec.seed);
        else if (key == "vmax") want(spec.vmax);
        else if (key == "px_noise") want(spec.px_noise);
        else if (key == "dropout") want(spec.dropout);
        else if (key == "embed_dim") want(spec.embed_dim);
        else if (key == "embed_noise") want(spec.embed_noise);
        else if (key == "event") {
            OcclusionSpecEvent e;
            std::string type;
            int swap = 0;
            want(type);
            want(e.onset);
            want(e.a);
            want(e.b);
            want(swap);
            e.swap = swap != 0;
            if (!(ls >> e.duration)) e.duration = 12;
            if (!(ls >> e.absence)) e.absence = 0;
            if (type == "STO") e.type = EventType::STO;
            else if (type == "DTO") e.type = EventType::DTO;
            else throw ParseError(where + ": event type must be STO or DTO");
            spec.events.push_back(e);
        } else {
            throw ParseError(where + ": unknown key '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

std::vector<MotRow> gt_to_mot(const GroundTruth& gt) {
    std::vector<MotRow> rows;
    for (int frame = 1; frame <= gt.frames; ++frame) {
        for (const auto& pl : gt.players) {
            MotRow r;
            r.frame = frame;
            r.id = pl.id;
            r.bbox = synth_box(gt.court_to_image, pl.pos[frame - 1]);
            r.conf = 1.0;
            r.extra1 = 1.0; // class: player
            r.extra2 = pl.detectable[frame - 1] ? 1.0 : 0.0; // visibility
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<MotRow> detections_to_mot(const Degraded& degraded) {
    std::vector<MotRow> rows;
    for (const auto& [frame, dets] : degraded.detections) {
        for (const auto& d : dets) {
            MotRow r;
            r.frame = frame;
            r.id = -1;
            r.bbox = d.bbox;
            r.conf = d.confidence;
            rows.push_back(r);
        }
    }
    return rows;
}

std::string render_court_svg(const std::vector<OutputRow>& rows, int first_frame,
                             int last_frame) {
    // 1 SVG unit = 2 cm, 40-unit margin.
    const double s = 0.5;
    const double mx = 40.0, my = 40.0;
    auto X = [&](double cm) { return mx + cm * s; };
    auto Y = [&](double cm) { return my + cm * s; };

    std::ostringstream out;
    out.precision(2);
    out << std::fixed;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << (2 * mx + kCourtLengthCm * s)
        << "' height='" << (2 * my + kCourtWidthCm * s) << "'>\n";
    out << "<rect x='" << mx << "' y='" << my << "' width='" << kCourtLengthCm * s
        << "' height='" << kCourtWidthCm * s
        << "' fill='#f7e8ce' stroke='#333' stroke-width='2'/>\n";
    out << "<line x1='" << X(1400) << "' y1='" << Y(0) << "' x2='" << X(1400) << "' y2='"
        << Y(1400) << "' stroke='#333'/>\n";
    out << "<circle cx='" << X(1400) << "' cy='" << Y(700)
        << "' r='" << 180 * s << "' fill='none' stroke='#333'/>\n";
    for (const auto& p : court_template()) {
        out << "<circle cx='" << X(p.x) << "' cy='" << Y(p.y)
            << "' r='4' fill='#c0392b'/>\n";
    }

    static const char* kPalette[] = {"#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
                                     "#46f0f0", "#f032e6", "#bcf60c", "#008080", "#9a6324",
                                     "#800000", "#808000", "#000075", "#fabebe", "#aaffc3"};
    std::map<int, std::vector<CourtPoint>> by_id;
    for (const auto& r : rows) {
        if (r.frame < first_frame || r.frame > last_frame) continue;
        by_id[r.id].push_back(r.court);
    }
    int color = 0;
    for (const auto& [id, pts] : by_id) {
        out << "<polyline fill='none' stroke='" << kPalette[color % 15]
            << "' stroke-width='1.5' points='";
        for (const auto& p : pts) out << X(p.x) << ',' << Y(p.y) << ' ';
        out << "'/>\n";
        ++color;
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace bsort
