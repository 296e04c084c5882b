#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace loscover {

constexpr double kPi = 3.14159265358979323846;

// Absolute tolerance applied to cosine comparisons against cone boundaries,
// so points sitting exactly on a cone surface test as contained.
constexpr double kConeBoundaryTol = 1e-9;

constexpr double kUnbounded = std::numeric_limits<double>::infinity();

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// 3D Cartesian vector. Meters when used as a point, dimensionless as a direction.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

    double squared_norm() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(squared_norm()); }

    bool is_finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }

    Vec3 normalized() const {
        const double n = norm();
        if (n == 0.0) throw std::invalid_argument("degenerate direction");
        return {x / n, y / n, z / n};
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y,
            a.z * b.x - a.x * b.z,
            a.x * b.y - a.y * b.x};
}

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

/// Angle between two nonzero vectors, in radians within [0, pi].
/// Symmetric and invariant under positive scaling of either argument.
inline double angle_between(const Vec3& v, const Vec3& w) {
    const double nv = v.norm();
    const double nw = w.norm();
    if (nv == 0.0 || nw == 0.0) throw std::invalid_argument("degenerate direction");
    const double c = dot(v, w) / (nv * nw);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

/// Spherical-sector cone membership: p is inside the cone with the given apex,
/// axis and half-angle, truncated at max_range (pass kUnbounded for no range cap).
/// The apex itself is contained by convention (the angle at zero distance is
/// taken as 0). The angular test compares cosines with kConeBoundaryTol slack.
inline bool cone_contains(const Vec3& apex, const Vec3& axis, double half_angle_rad,
                          double max_range, const Vec3& p) {
    const Vec3 diff = p - apex;
    const double d2 = diff.squared_norm();
    if (d2 > max_range * max_range) return false;
    if (d2 == 0.0) return true;
    const double an = axis.norm();
    if (an == 0.0) throw std::invalid_argument("degenerate direction");
    const double cos_angle = dot(axis, diff) / (an * std::sqrt(d2));
    return cos_angle >= std::cos(half_angle_rad) - kConeBoundaryTol;
}

/// Circle of beam-boundary contact points around a focal point.
///
/// For a transmitter at ck with beamwidth phi, the set of antenna orientations
/// that keep the point uj exactly on the beam edge is parametrized by the
/// circle centered at uj, of radius |ck-uj|*tan(phi/2), lying in the plane
/// through uj whose normal is the uj->ck direction. A point of the circle is
///
///     p(omega) = center + radius * (basis_a*sin(omega) + basis_b*cos(omega))
///
/// and every axis ck->p(omega) makes the angle phi/2 with ck->uj.
struct OrientationCircle {
    Vec3 center;
    double radius = 0.0;
    Vec3 basis_a;  // unit, in-plane
    Vec3 basis_b;  // unit, in-plane, perpendicular to basis_a
    Vec3 normal;   // unit, uj -> ck

    Vec3 point(double omega_deg) const {
        const double w = deg_to_rad(omega_deg);
        return center + radius * (basis_a * std::sin(w) + basis_b * std::cos(w));
    }
};

namespace detail {

// Deterministic in-plane unit vector perpendicular to n: cross n with the
// first coordinate axis that is not parallel to it.
inline Vec3 any_perpendicular(const Vec3& n) {
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const Vec3& e : axes) {
        const Vec3 c = cross(n, e);
        if (c.norm() > 1e-9) return c.normalized();
    }
    throw std::invalid_argument("degenerate direction");
}

}  // namespace detail

inline OrientationCircle orientation_circle(const Vec3& ck, const Vec3& uj, double phi_deg) {
    if (!(phi_deg > 0.0 && phi_deg < 180.0))
        throw std::invalid_argument("beamwidth out of range (0, 180)");
    const Vec3 to_ck = ck - uj;
    const double len = to_ck.norm();
    if (len == 0.0) throw std::invalid_argument("coincident points");

    OrientationCircle c;
    c.center = uj;
    c.radius = len * std::tan(deg_to_rad(phi_deg) / 2.0);
    c.normal = to_ck * (1.0 / len);
    c.basis_a = detail::any_perpendicular(c.normal);
    c.basis_b = cross(c.basis_a, c.normal);
    return c;
}

/// One candidate antenna orientation for a transmitter position, built so that
/// a chosen anchor point sits either on the beam boundary (omega sample of the
/// orientation circle) or on the beam axis (boresight).
struct OrientationCandidate {
    Vec3 axis;             // unit
    int anchor_user = -1;  // id of the anchor the candidate was built from
    double omega_deg = 0.0;
    bool boresight = false;
};

/// Finite orientation set for (ck, uj): n_samples boundary orientations at
/// omega = i*360/n_samples, plus the boresight orientation ck->uj appended
/// last, for n_samples + 1 candidates in total.
inline std::vector<OrientationCandidate> candidate_orientations(
    const Vec3& ck, const Vec3& uj, double phi_deg, int n_samples, int anchor_id = -1) {
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    const OrientationCircle circle = orientation_circle(ck, uj, phi_deg);

    std::vector<OrientationCandidate> out;
    out.reserve(static_cast<std::size_t>(n_samples) + 1);
    for (int i = 0; i < n_samples; ++i) {
        const double omega = 360.0 * i / n_samples;
        OrientationCandidate cand;
        cand.axis = (circle.point(omega) - ck).normalized();
        cand.anchor_user = anchor_id;
        cand.omega_deg = omega;
        out.push_back(cand);
    }
    OrientationCandidate bore;
    bore.axis = (uj - ck).normalized();
    bore.anchor_user = anchor_id;
    bore.omega_deg = 0.0;
    bore.boresight = true;
    out.push_back(bore);
    return out;
}

}  // namespace loscover
