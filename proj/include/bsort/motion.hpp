// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "bsort/geometry.hpp"

namespace bsort {

// Constant-velocity model on the court plane: state [x, y, vx, vy] in
// cm and cm/frame. Noise magnitudes are not dictated by the domain;
// these defaults are player-scale and configurable.
struct MotionNoise {
    double meas_sigma = 15.0;     // cm per axis
    double accel_sigma = 2.0;     // cm/frame^2 (white-acceleration process noise)
    double init_pos_sigma = 50.0; // cm, prior on position
    double init_vel_sigma = 15.0; // cm/frame, prior on velocity
};

struct KinematicState {
    Eigen::Vector4d x = Eigen::Vector4d::Zero();
    Eigen::Matrix4d cov = Eigen::Matrix4d::Identity();

    CourtPoint position() const { return {x(0), x(1)}; }
    double vx() const { return x(2); }
    double vy() const { return x(3); }
};

KinematicState kf_init(const CourtPoint& obs, const MotionNoise& noise = {});

// dt >= 1 frames; covariance grows by the white-acceleration process term.
KinematicState kf_predict(const KinematicState& s, double dt,
                          const MotionNoise& noise = {});

// Linear measurement update observing (x, y).
KinematicState kf_update(const KinematicState& s, const CourtPoint& obs,
                         const MotionNoise& noise = {});

} // namespace bsort
