#pragma once

#include <cmath>
#include <stdexcept>

#include "loscover/channel.hpp"
#include "loscover/geometry.hpp"

namespace loscover {

/// A wireless device at a known location whose view of the sky is restricted
/// to a spherical-sector cone: axis lov_axis, half-angle aov_deg.
struct User {
    int id = 0;
    Vec3 position;   // meters
    Vec3 lov_axis;   // unit direction
    double aov_deg = 180.0;  // angle of view, in (0, 180]

    void validate() const {
        if (!position.is_finite() || !lov_axis.is_finite())
            throw std::invalid_argument("user fields must be finite");
        if (!(aov_deg > 0.0 && aov_deg <= 180.0))
            throw std::invalid_argument("aov_deg must be in (0, 180]");
        if (std::abs(lov_axis.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("lov_axis must be unit-norm");
    }
};

/// A deployed transmitter: position plus directional-antenna orientation.
struct UavPose {
    Vec3 position;     // meters
    Vec3 orientation;  // unit direction
};

/// Range and beam geometry derived once from RadioParams, for use in hot loops.
struct CoverageLimits {
    double d_max_m = 0.0;
    double beam_half_angle_rad = 0.0;
    double cos_half_beam = 1.0;

    CoverageLimits() = default;
    explicit CoverageLimits(const RadioParams& p)
        : d_max_m(max_range_m(p)),
          beam_half_angle_rad(deg_to_rad(p.hpbw_deg) / 2.0),
          cos_half_beam(std::cos(deg_to_rad(p.hpbw_deg) / 2.0)) {}
};

/// The UAV-side condition: the user is within range and inside the antenna
/// beam cone of half-angle hpbw/2. Same arithmetic as cone_contains with the
/// boundary cosine precomputed.
inline bool uav_covers(const UavPose& pose, const User& user, const CoverageLimits& lim) {
    const Vec3 diff = user.position - pose.position;
    const double d2 = diff.squared_norm();
    if (d2 > lim.d_max_m * lim.d_max_m) return false;
    if (d2 == 0.0) return true;
    const double an = pose.orientation.norm();
    if (an == 0.0) throw std::invalid_argument("degenerate direction");
    const double cos_angle = dot(pose.orientation, diff) / (an * std::sqrt(d2));
    return cos_angle >= lim.cos_half_beam - kConeBoundaryTol;
}

inline bool uav_covers(const UavPose& pose, const User& user, const RadioParams& params) {
    return uav_covers(pose, user, CoverageLimits(params));
}

/// The user-side condition: the transmitter is within range and inside the
/// user's line-of-view cone. The angle of view is the full cone half-angle.
inline bool user_sees(const User& user, const UavPose& pose, const CoverageLimits& lim) {
    return cone_contains(user.position, user.lov_axis, deg_to_rad(user.aov_deg),
                         lim.d_max_m, pose.position);
}

inline bool user_sees(const User& user, const UavPose& pose, const RadioParams& params) {
    return user_sees(user, pose, CoverageLimits(params));
}

/// Guaranteed line-of-sight indicator: both cone conditions hold and the pair
/// is within the SNR-threshold range (the range check is shared).
inline bool f_los(const UavPose& pose, const User& user, const CoverageLimits& lim) {
    return uav_covers(pose, user, lim) && user_sees(user, pose, lim);
}

inline bool f_los(const UavPose& pose, const User& user, const RadioParams& params) {
    return f_los(pose, user, CoverageLimits(params));
}

/// True iff a transmitter placed at grid_point admits at least one orientation
/// with f_los = 1 for this user; the point-at-user boresight orientation is
/// always such an orientation.
inline bool in_lov_region(const Vec3& grid_point, const User& user, const CoverageLimits& lim) {
    return cone_contains(user.position, user.lov_axis, deg_to_rad(user.aov_deg),
                         lim.d_max_m, grid_point);
}

inline bool in_lov_region(const Vec3& grid_point, const User& user, const RadioParams& params) {
    return in_lov_region(grid_point, user, CoverageLimits(params));
}

}  // namespace loscover
