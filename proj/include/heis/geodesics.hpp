#pragma once

#include <limits>

#include "heis/point.hpp"

namespace heis {

// Unit-speed geodesic: signed curvature phi (phi = 0 is a straight line),
// initial heading alpha, left-translated by base. A curvature-phi geodesic
// is length-minimizing over arcs of length at most 2*pi/|phi| (its
// lifetime).
struct GeodesicParams {
    double phi = 0.0;
    double alpha = 0.0;
    Point base;
};

// The geodesic of curvature 1/q running from (0,0,-2 pi q^2) up the axis:
// it crosses the plane t = 0 at arclength pi*q in the point
// (2q cos alpha, 2q sin alpha, 0) and ends at (0,0, 2 pi q^2) at 2 pi q.
GeodesicParams axis_chord_geodesic(double q, double alpha);

Point geodesic_point(const GeodesicParams& g, double s);

// Solved geodesic coordinates of a point p != O relative to the origin:
// sweep angle psi = |phi| r in [0, 2 pi], cc-distance r, lifetime ratio
// lambda = 2 pi / psi (infinite on the plane t = 0), and the heading of
// the (canonical-branch) geodesic from O through p.
struct PolarSolve {
    double psi = 0.0;
    double r = 0.0;
    double lambda = std::numeric_limits<double>::infinity();
    double heading = 0.0;
};

PolarSolve solve_polar(const Point& p);

double cc_distance(const Point& p, const Point& q);

// Geodesic sphere point of radius r at sweep parameter phi (|phi*r| <= 2 pi)
// and polar angle alpha.
struct SpherePoint {
    double r = 1.0;
    double phi = 0.0;
    double alpha = 0.0;
};

Point sphere_point(const SpherePoint& sp);

// Height u(|z|) of the upper unit hemisphere above horizontal radius
// |z| in [0, 1]; scale as t/r^2 = u(|z|/r) for other radii.
double hemisphere_height(double rho_z);

// Euclidean convex hull membership for the ball B(O, r): the solid bounded
// by the |phi r| <= pi portion of the sphere and the two discs
// t = +-(2/pi) r^2, |z| <= (2/pi) r.
bool in_convex_hull(const Point& p, double r);

// Aperture a(lambda) of the cone {t = a |z|^2} carrying the points of
// lifetime ratio lambda > 1.
double cone_aperture(double lambda);

struct SphereDistance {
    double distance = 0.0;
    bool realized_at_north_pole = false;
};

// Distance from a point p (inside B(O,R), t >= 0) to the sphere S(O,R):
// realized by the north pole (0; R^2/pi) when the lifetime ratio of p does
// not exceed R/d(O,p), by prolonging p's geodesic otherwise.
SphereDistance dist_to_sphere(const Point& p, double R);

// Distance between two points of the unit circle in the plane t = 0 with
// angle theta apart: rho(theta) = d((1;0), (e^{i theta};0)), theta in (0, pi].
double rho(double theta);

// Closed-form derivative of rho on (0, pi), via the sweep angle of the
// chord point; strictly positive there.
double rho_prime(double theta);

namespace detail {

// (u - sin u)/(1 - cos u): the ratio t/|z|^2 along a geodesic arc of sweep
// angle u. Strictly increasing from 0 to +infinity on (0, 2 pi).
double arc_height_ratio(double u);

// d/du of arc_height_ratio.
double arc_height_ratio_prime(double u);

// Inverse of arc_height_ratio on (0, 2 pi): bracketed bisection to width
// 1e-6 followed by a Newton polish to residual 1e-13 (scaled).
double solve_arc_ratio(double target);

// (u - sin u)/u^2 and sin(u)/u with series branches near u = 0.
double tc(double u);
double sinc(double u);

}  // namespace detail

}  // namespace heis
