#pragma once

#include <cmath>
#include <numbers>

#include "heis/point.hpp"

namespace heis {

// Rotation about the t-axis: (z;t) -> (e^{i theta} z; t).
inline Point rotate(double theta, const Point& p) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * p.x - s * p.y, s * p.x + c * p.y, p.t};
}

// The flip (z;t) -> (conj z; -t).
inline Point reflect(const Point& p) { return {p.x, -p.y, -p.t}; }

inline double normalize_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(a, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;  // tiny negatives round up to exactly 2*pi
    return r;
}

// An isometry of the group in the canonical form L_w o R_theta o J^m,
// where L_w is left translation, R_theta rotation about the t-axis and
// J the flip (z;t) -> (conj z; -t). Every isometry has a unique
// representation of this form, which makes equality tests and fitting
// possible.
struct IsometryDescriptor {
    Point w;             // left-translation element
    double theta = 0.0;  // rotation angle in [0, 2*pi)
    int m = 0;           // 0 or 1: flip applied m times

    static IsometryDescriptor identity() { return {}; }
    static IsometryDescriptor rotation(double theta) {
        return {origin, normalize_angle(theta), 0};
    }
    static IsometryDescriptor translation(const Point& w) { return {w, 0.0, 0}; }
    static IsometryDescriptor flip() { return {origin, 0.0, 1}; }
};

inline Point apply_isometry(const IsometryDescriptor& g, const Point& p) {
    const Point q = g.m ? reflect(p) : p;
    return multiply(g.w, rotate(g.theta, q));
}

// Composition a o b, renormalized into canonical order via the
// commutation relations R_theta L_w = L_{R_theta w} R_theta and
// J L_w = L_{Jw} J, J R_theta = R_{-theta} J.
inline IsometryDescriptor compose(const IsometryDescriptor& a, const IsometryDescriptor& b) {
    IsometryDescriptor r;
    r.w = multiply(a.w, rotate(a.theta, a.m ? reflect(b.w) : b.w));
    r.theta = normalize_angle(a.theta + (a.m ? -b.theta : b.theta));
    r.m = a.m ^ b.m;
    return r;
}

inline IsometryDescriptor inverse_isometry(const IsometryDescriptor& g) {
    IsometryDescriptor r;
    const Point wi = rotate(-g.theta, inverse(g.w));
    r.w = g.m ? reflect(wi) : wi;
    r.theta = normalize_angle(g.m ? g.theta : -g.theta);
    r.m = g.m;
    return r;
}

}  // namespace heis
