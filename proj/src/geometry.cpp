// SPDX-License-Identifier: Apache-2.0
#include "bsort/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace bsort {

Homography::Homography(const Eigen::Matrix3d& m) : m_(m) {
    if (std::abs(m_(2, 2)) > kDegenerateEps) {
        m_ /= m_(2, 2);
    }
    if (std::abs(m_.determinant()) < kDegenerateEps) {
        throw DegenerateGeometry("homography is singular");
    }
}

Homography Homography::identity() {
    return Homography(Eigen::Matrix3d::Identity());
}

Homography Homography::inverse() const {
    return Homography(m_.inverse().eval());
}

CourtPoint project(const Homography& h, const ImagePoint& p) {
    const Eigen::Vector3d q = h.matrix() * Eigen::Vector3d(p.x, p.y, 1.0);
    if (std::abs(q.z()) < Homography::kDegenerateEps) {
        throw PointAtInfinity("projected point at infinity");
    }
    return {q.x() / q.z(), q.y() / q.z()};
}

ImagePoint foot_point(const BBox& bbox) {
    if (bbox.w <= 0.0 || bbox.h <= 0.0) {
        throw InvalidBBox("bounding box must have positive extent");
    }
    return {bbox.x + bbox.w / 2.0, bbox.y + bbox.h};
}

namespace {

// Hartley normalization: translate to centroid, scale mean distance to sqrt(2).
Eigen::Matrix3d normalizing_transform(std::span<const Correspondence> pairs, bool image_side) {
    double cx = 0.0, cy = 0.0;
    for (const auto& c : pairs) {
        cx += image_side ? c.image.x : c.court.x;
        cy += image_side ? c.image.y : c.court.y;
    }
    const double n = static_cast<double>(pairs.size());
    cx /= n;
    cy /= n;
    double mean_dist = 0.0;
    for (const auto& c : pairs) {
        const double dx = (image_side ? c.image.x : c.court.x) - cx;
        const double dy = (image_side ? c.image.y : c.court.y) - cy;
        mean_dist += std::sqrt(dx * dx + dy * dy);
    }
    mean_dist /= n;
    const double s = mean_dist > 1e-15 ? std::sqrt(2.0) / mean_dist : 1.0;
    Eigen::Matrix3d t;
    t << s, 0, -s * cx,
         0, s, -s * cy,
         0, 0, 1;
    return t;
}

} // namespace

HomographyEstimate estimate_homography(std::span<const Correspondence> pairs) {
    if (pairs.size() < 4) {
        throw InsufficientCorrespondences("need at least 4 correspondences, got " +
                                          std::to_string(pairs.size()));
    }

    const Eigen::Matrix3d t_img = normalizing_transform(pairs, true);
    const Eigen::Matrix3d t_crt = normalizing_transform(pairs, false);

    Eigen::MatrixXd a(2 * static_cast<int>(pairs.size()), 9);
    for (int i = 0; i < static_cast<int>(pairs.size()); ++i) {
        const Eigen::Vector3d pi = t_img * Eigen::Vector3d(pairs[i].image.x, pairs[i].image.y, 1.0);
        const Eigen::Vector3d pc = t_crt * Eigen::Vector3d(pairs[i].court.x, pairs[i].court.y, 1.0);
        const double xi = pi.x() / pi.z(), yi = pi.y() / pi.z();
        const double xc = pc.x() / pc.z(), yc = pc.y() / pc.z();
        a.row(2 * i) << -xi, -yi, -1, 0, 0, 0, xc * xi, xc * yi, xc;
        a.row(2 * i + 1) << 0, 0, 0, -xi, -yi, -1, yc * xi, yc * yi, yc;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    // Rank deficiency beyond the expected single null vector means the
    // points are degenerate (e.g. collinear court points).
    const auto& sigma = svd.singularValues();
    if (sigma(7) < 1e-9 * sigma(0)) {
        throw DegenerateGeometry("degenerate correspondence configuration");
    }
    const Eigen::VectorXd h_vec = svd.matrixV().col(8);
    Eigen::Matrix3d hn;
    hn << h_vec(0), h_vec(1), h_vec(2),
          h_vec(3), h_vec(4), h_vec(5),
          h_vec(6), h_vec(7), h_vec(8);

    const Eigen::Matrix3d h_mat = t_crt.inverse() * hn * t_img;
    if (std::abs(h_mat.determinant()) < Homography::kDegenerateEps) {
        throw DegenerateGeometry("estimated homography is singular");
    }
    Homography h(h_mat);

    double sq_sum = 0.0;
    for (const auto& c : pairs) {
        const CourtPoint r = project(h, c.image);
        const double dx = r.x - c.court.x;
        const double dy = r.y - c.court.y;
        sq_sum += dx * dx + dy * dy;
    }
    const double rms = std::sqrt(sq_sum / static_cast<double>(pairs.size()));
    return {h, rms};
}

const std::array<CourtPoint, 20>& court_template() {
    // Key is 490 cm wide (y in [455, 945]) and 580 cm deep from each
    // baseline; center circle radius 180 cm; three-point line meets the
    // baselines 90 cm from the sidelines.
    static const std::array<CourtPoint, 20> kTemplate = {{
        {0.0, 0.0}, {2800.0, 0.0}, {2800.0, 1400.0}, {0.0, 1400.0},       // corners
        {1400.0, 0.0}, {1400.0, 1400.0},                                  // halfway line
        {0.0, 455.0}, {0.0, 945.0}, {580.0, 455.0}, {580.0, 945.0},       // left key
        {2800.0, 455.0}, {2800.0, 945.0}, {2220.0, 455.0}, {2220.0, 945.0}, // right key
        {1400.0, 520.0}, {1400.0, 880.0},                                 // center circle
        {0.0, 90.0}, {0.0, 1310.0}, {2800.0, 90.0}, {2800.0, 1310.0},     // 3pt / baseline
    }};
    return kTemplate;
}

} // namespace bsort
