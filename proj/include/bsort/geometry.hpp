// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <vector>

#include "bsort/errors.hpp"

namespace bsort {

struct ImagePoint {
    double x = 0.0; // pixels
    double y = 0.0;
};

// Court coordinates in centimeters. The court interior is
// [0, 2800] x [0, 1400]; points outside are legal (spectators) but
// can be flagged via in_court().
struct CourtPoint {
    double x = 0.0;
    double y = 0.0;
};

inline constexpr double kCourtLengthCm = 2800.0;
inline constexpr double kCourtWidthCm = 1400.0;

inline bool in_court(const CourtPoint& p) {
    return p.x >= 0.0 && p.x <= kCourtLengthCm && p.y >= 0.0 && p.y <= kCourtWidthCm;
}

inline double court_distance(const CourtPoint& a, const CourtPoint& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

struct BBox {
    double x = 0.0; // top-left, pixels
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
};

struct Correspondence {
    ImagePoint image;
    CourtPoint court;
};

// 3x3 projective map from image plane to court plane. Stored normalized so
// that the bottom-right entry is 1 when nonzero. Must be invertible:
// |det| >= kDegenerateEps after normalization.
class Homography {
public:
    static constexpr double kDegenerateEps = 1e-12;

    explicit Homography(const Eigen::Matrix3d& m);
    static Homography identity();

    const Eigen::Matrix3d& matrix() const { return m_; }
    Homography inverse() const;

private:
    Eigen::Matrix3d m_;
};

struct HomographyEstimate {
    Homography h;
    double rms_residual = 0.0; // court-space reprojection RMS over the input pairs
};

// Normalized DLT over all pairs. Requires >= 4 correspondences and a
// non-degenerate configuration (no 3 court points collinear among a
// spanning set; detected via conditioning of the linear system).
HomographyEstimate estimate_homography(std::span<const Correspondence> pairs);

// Projects p through h; throws PointAtInfinity when the third homogeneous
// coordinate falls below Homography::kDegenerateEps.
CourtPoint project(const Homography& h, const ImagePoint& p);

// Bottom midpoint of the detection box: (x + w/2, y + h).
ImagePoint foot_point(const BBox& bbox);

// The 20-keypoint template of the standard 2800x1400 cm court:
// 4 corners, 2 halfway-line endpoints, 8 key (painted area) corners,
// 2 center-circle extremes, 4 three-point/baseline intersections.
const std::array<CourtPoint, 20>& court_template();

} // namespace bsort
