// SPDX-License-Identifier: Apache-2.0
#include "bsort/motion.hpp"

namespace bsort {

KinematicState kf_init(const CourtPoint& obs, const MotionNoise& noise) {
    KinematicState s;
    s.x << obs.x, obs.y, 0.0, 0.0;
    s.cov.setZero();
    s.cov(0, 0) = s.cov(1, 1) = noise.init_pos_sigma * noise.init_pos_sigma;
    s.cov(2, 2) = s.cov(3, 3) = noise.init_vel_sigma * noise.init_vel_sigma;
    return s;
}

KinematicState kf_predict(const KinematicState& s, double dt, const MotionNoise& noise) {
    Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
    f(0, 2) = dt;
    f(1, 3) = dt;

    // Discrete white-acceleration noise per axis.
    const double q = noise.accel_sigma * noise.accel_sigma;
    const double dt2 = dt * dt, dt3 = dt2 * dt, dt4 = dt2 * dt2;
    Eigen::Matrix4d qm = Eigen::Matrix4d::Zero();
    qm(0, 0) = qm(1, 1) = q * dt4 / 4.0;
    qm(0, 2) = qm(2, 0) = q * dt3 / 2.0;
    qm(1, 3) = qm(3, 1) = q * dt3 / 2.0;
    qm(2, 2) = qm(3, 3) = q * dt2;

    KinematicState out;
    out.x = f * s.x;
    out.cov = f * s.cov * f.transpose() + qm;
    out.cov = (out.cov + out.cov.transpose().eval()) / 2.0; // keep symmetric
    return out;
}

KinematicState kf_update(const KinematicState& s, const CourtPoint& obs, const MotionNoise& noise) {
    Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
    h(0, 0) = 1.0;
    h(1, 1) = 1.0;
    const Eigen::Matrix2d r = Eigen::Matrix2d::Identity() * noise.meas_sigma * noise.meas_sigma;

    const Eigen::Vector2d innovation = Eigen::Vector2d(obs.x, obs.y) - h * s.x;
    const Eigen::Matrix2d sc = h * s.cov * h.transpose() + r;
    const Eigen::Matrix<double, 4, 2> k = s.cov * h.transpose() * sc.inverse();

    KinematicState out;
    out.x = s.x + k * innovation;
    // Joseph form keeps the covariance positive-definite.
    const Eigen::Matrix4d ikh = Eigen::Matrix4d::Identity() - k * h;
    out.cov = ikh * s.cov * ikh.transpose() + k * r * k.transpose();
    out.cov = (out.cov + out.cov.transpose().eval()) / 2.0;
    return out;
}

} // namespace bsort
