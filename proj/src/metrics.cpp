// SPDX-License-Identifier: Apache-2.0
#include "bsort/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bsort/association.hpp"

namespace bsort {

double iou(const BBox& a, const BBox& b) {
    const double x1 = std::max(a.x, b.x);
    const double y1 = std::max(a.y, b.y);
    const double x2 = std::min(a.x + a.w, b.x + b.w);
    const double y2 = std::min(a.y + a.h, b.y + b.h);
    const double inter = std::max(0.0, x2 - x1) * std::max(0.0, y2 - y1);
    const double uni = a.w * a.h + b.w * b.h - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

FrameMatching match_frame(std::span<const BBox> gt, std::span<const BBox> pred, double a) {
    FrameMatching out;
    if (gt.empty() || pred.empty()) return out;
    // Feasible entries cost 1 - IoU <= 1; infeasible entries stay +inf so
    // the solver maximizes cardinality first, then total IoU.
    CostMatrix m;
    m.cost.resize(static_cast<int>(gt.size()), static_cast<int>(pred.size()));
    m.cost.setConstant(CostMatrix::kInfeasible);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            const double s = iou(gt[i], pred[j]);
            if (s >= a) m.cost(i, j) = 1.0 - s;
        }
    }
    const Assignment assignment = solve_assignment(m);
    out.pairs = assignment.matches;
    return out;
}

ClearResult compute_clear(const Sequence& gt, const Sequence& pred) {
    ClearResult r;
    for (const auto& [f, boxes] : gt) r.num_gt += static_cast<int>(boxes.size());
    if (r.num_gt == 0) {
        throw Error(ErrorKind::Runtime, "MOTA undefined for empty ground truth");
    }

    std::set<int> frames;
    for (const auto& [f, _] : gt) frames.insert(f);
    for (const auto& [f, _] : pred) frames.insert(f);

    std::map<int, int> carry;        // gt id -> pred id matched in previous frame
    std::map<int, int> last_matched; // gt id -> last matched pred id ever
    static const std::vector<SeqBox> kEmpty;

    for (int f : frames) {
        auto git = gt.find(f);
        auto pit = pred.find(f);
        const auto& g = git != gt.end() ? git->second : kEmpty;
        const auto& p = pit != pred.end() ? pit->second : kEmpty;

        std::vector<char> g_used(g.size(), 0), p_used(p.size(), 0);
        std::map<int, int> matched; // gt id -> pred id this frame

        // Carry over last frame's pairings when they still overlap.
        for (size_t i = 0; i < g.size(); ++i) {
            auto c = carry.find(g[i].id);
            if (c == carry.end()) continue;
            for (size_t j = 0; j < p.size(); ++j) {
                if (!p_used[j] && p[j].id == c->second && iou(g[i].bbox, p[j].bbox) >= 0.5) {
                    g_used[i] = p_used[j] = 1;
                    matched[g[i].id] = p[j].id;
                    break;
                }
            }
        }

        // Optimal assignment for whatever is left.
        std::vector<int> g_idx, p_idx;
        std::vector<BBox> g_rem, p_rem;
        for (size_t i = 0; i < g.size(); ++i) {
            if (!g_used[i]) { g_idx.push_back(static_cast<int>(i)); g_rem.push_back(g[i].bbox); }
        }
        for (size_t j = 0; j < p.size(); ++j) {
            if (!p_used[j]) { p_idx.push_back(static_cast<int>(j)); p_rem.push_back(p[j].bbox); }
        }
        const FrameMatching fm = match_frame(g_rem, p_rem, 0.5);
        for (const auto& [gi, pj] : fm.pairs) {
            matched[g[g_idx[gi]].id] = p[p_idx[pj]].id;
            g_used[g_idx[gi]] = 1;
            p_used[p_idx[pj]] = 1;
        }

        for (size_t i = 0; i < g.size(); ++i) {
            if (!g_used[i]) ++r.fn;
        }
        for (size_t j = 0; j < p.size(); ++j) {
            if (!p_used[j]) ++r.fp;
        }
        for (const auto& [gid, pid] : matched) {
            auto lm = last_matched.find(gid);
            if (lm != last_matched.end() && lm->second != pid) ++r.ids;
            last_matched[gid] = pid;
        }
        carry = matched;
    }

    r.mota = 100.0 * (1.0 - static_cast<double>(r.fp + r.fn + r.ids) / r.num_gt);
    return r;
}

HotaResult compute_hota(const Sequence& gt, const Sequence& pred) {
    // Global per-id detection counts (threshold independent).
    std::map<int, int> gt_count, pred_count;
    for (const auto& [f, boxes] : gt) {
        for (const auto& b : boxes) ++gt_count[b.id];
    }
    for (const auto& [f, boxes] : pred) {
        for (const auto& b : boxes) ++pred_count[b.id];
    }

    std::set<int> frames;
    for (const auto& [f, _] : gt) frames.insert(f);
    for (const auto& [f, _] : pred) frames.insert(f);

    double hota_sum = 0.0, deta_sum = 0.0, assa_sum = 0.0, loca_sum = 0.0;
    const int num_thresholds = 19;
    static const std::vector<SeqBox> kEmpty;

    for (int ti = 1; ti <= num_thresholds; ++ti) {
        const double a = 0.05 * ti;
        long long tp = 0, fn = 0, fp = 0;
        double iou_sum = 0.0;
        std::map<std::pair<int, int>, long long> pair_tp;

        for (int f : frames) {
            auto git = gt.find(f);
            auto pit = pred.find(f);
            const auto& g = git != gt.end() ? git->second : kEmpty;
            const auto& p = pit != pred.end() ? pit->second : kEmpty;
            std::vector<BBox> gb(g.size()), pb(p.size());
            for (size_t i = 0; i < g.size(); ++i) gb[i] = g[i].bbox;
            for (size_t j = 0; j < p.size(); ++j) pb[j] = p[j].bbox;
            const FrameMatching fm = match_frame(gb, pb, a);
            tp += static_cast<long long>(fm.pairs.size());
            fn += static_cast<long long>(g.size()) - static_cast<long long>(fm.pairs.size());
            fp += static_cast<long long>(p.size()) - static_cast<long long>(fm.pairs.size());
            for (const auto& [gi, pj] : fm.pairs) {
                iou_sum += iou(gb[gi], pb[pj]);
                ++pair_tp[{g[gi].id, p[pj].id}];
            }
        }

        double deta = 0.0, assa = 0.0, loca = 0.0;
        if (tp + fn + fp > 0) {
            deta = static_cast<double>(tp) / static_cast<double>(tp + fn + fp);
        }
        if (tp > 0) {
            double ass_sum = 0.0;
            for (const auto& [ids, tpa] : pair_tp) {
                const long long uni = gt_count[ids.first] + pred_count[ids.second] - tpa;
                ass_sum += static_cast<double>(tpa) * (static_cast<double>(tpa) / uni);
            }
            assa = ass_sum / static_cast<double>(tp);
            loca = iou_sum / static_cast<double>(tp);
        }
        deta_sum += deta;
        assa_sum += assa;
        loca_sum += loca;
        hota_sum += std::sqrt(deta * assa);
    }

    HotaResult r;
    r.hota = 100.0 * hota_sum / num_thresholds;
    r.deta = 100.0 * deta_sum / num_thresholds;
    r.assa = 100.0 * assa_sum / num_thresholds;
    r.loca = 100.0 * loca_sum / num_thresholds;
    return r;
}

EvalResult evaluate(const Sequence& gt, const Sequence& pred) {
    const HotaResult h = compute_hota(gt, pred);
    const ClearResult c = compute_clear(gt, pred);
    EvalResult r;
    r.hota = h.hota;
    r.deta = h.deta;
    r.assa = h.assa;
    r.loca = h.loca;
    r.mota = c.mota;
    r.fp = c.fp;
    r.fn = c.fn;
    r.ids = c.ids;
    return r;
}

} // namespace bsort
