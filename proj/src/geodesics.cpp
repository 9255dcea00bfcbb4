#include "heis/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heis {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

namespace detail {

double sinc(double u) {
    const double a = std::abs(u);
    if (a < 1e-1) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0));
    }
    return std::sin(u) / u;
}

double tc(double u) {
    const double a = std::abs(u);
    if (a < 1e-1) {
        // (u - sin u)/u^2 = u/6 - u^3/120 + u^5/5040 - u^7/362880 + ...
        const double u2 = u * u;
        return u / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0 * (1.0 - u2 / 72.0)));
    }
    return (u - std::sin(u)) / (u * u);
}

double arc_height_ratio(double u) {
    if (u <= 0.0) return 0.0;
    if (u < 2e-2) {
        // u/3 + u^3/90 + u^5/2520 + u^7/75600 + ...
        const double u2 = u * u;
        return u / 3.0 * (1.0 + u2 / 30.0 + u2 * u2 / 840.0 + u2 * u2 * u2 / 25200.0);
    }
    const double sh = std::sin(0.5 * u);
    return (u - std::sin(u)) / (2.0 * sh * sh);
}

double arc_height_ratio_prime(double u) {
    if (u < 2e-2) {
        const double u2 = u * u;
        return 1.0 / 3.0 + u2 / 30.0 + u2 * u2 / 504.0;
    }
    // m'(u) = 1 - m(u) * cot(u/2)
    return 1.0 - arc_height_ratio(u) / std::tan(0.5 * u);
}

double solve_arc_ratio(double target) {
    if (!(target > 0.0)) return 0.0;
    if (!std::isfinite(target)) return kTwoPi;

    double lo = 0.0;
    double hi = kTwoPi - 1e-12;
    if (arc_height_ratio(hi) <= target) return hi;

    // Asymptotic seeds: m(u) ~ u/3 near 0, m(u) ~ 4 pi/(2 pi - u)^2 near 2 pi.
    double seed;
    if (target < 1.0) {
        seed = std::min(3.0 * target, 0.5 * kPi);
    } else {
        seed = kTwoPi - std::sqrt(4.0 * kPi / target);
    }
    seed = std::clamp(seed, 1e-9, hi);
    if (arc_height_ratio(seed) < target)
        lo = seed;
    else
        hi = seed;

    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (arc_height_ratio(mid) < target)
            lo = mid;
        else
            hi = mid;
    }

    double u = 0.5 * (lo + hi);
    const double tol = 1e-13 * (1.0 + target);
    for (int it = 0; it < 32; ++it) {
        const double f = arc_height_ratio(u) - target;
        if (std::abs(f) <= tol) break;
        const double d = arc_height_ratio_prime(u);
        double next = u - f / d;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (f < 0.0)
            lo = u;
        else
            hi = u;
        u = next;
    }
    return u;
}

}  // namespace detail

GeodesicParams axis_chord_geodesic(double q, double alpha) {
    if (!(q > 0.0))
        throw std::invalid_argument("axis_chord_geodesic: q must be positive");
    // Heading offset pi/2: this family starts pointing sideways from the
    // axis so that the t = 0 crossing lands at angle alpha.
    return {1.0 / q, alpha + 0.5 * kPi, {0.0, 0.0, -2.0 * kPi * q * q}};
}

Point geodesic_point(const GeodesicParams& g, double s) {
    double zx, zy, tl;
    const double ca = std::cos(g.alpha), sa = std::sin(g.alpha);
    if (g.phi == 0.0) {
        zx = s * ca;
        zy = s * sa;
        tl = 0.0;
    } else {
        const double u = g.phi * s;
        const double a = s * detail::sinc(u);                          // sin(u)/phi
        const double b = (std::abs(u) < 1e-1) ? s * (0.5 * u) * (1.0 - u * u / 12.0 * (1.0 - u * u / 30.0))
                                              : (1.0 - std::cos(u)) / g.phi;
        zx = sa * b + ca * a;
        zy = sa * a - ca * b;
        tl = 2.0 * s * s * detail::tc(u);
    }
    return multiply(g.base, {zx, zy, tl});
}

PolarSolve solve_polar(const Point& p) {
    const double rz = p.abs_z();
    if (rz == 0.0 && p.t == 0.0)
        throw std::invalid_argument("solve_polar: point must differ from the origin");

    PolarSolve out;
    if (rz == 0.0) {
        // Axis point: full-lifetime geodesics, heading conventionally 0.
        out.psi = kTwoPi;
        out.r = std::sqrt(kPi * std::abs(p.t));
        out.lambda = 1.0;
        out.heading = 0.0;
        return out;
    }
    if (p.t == 0.0) {
        out.psi = 0.0;
        out.r = rz;
        out.lambda = std::numeric_limits<double>::infinity();
        out.heading = std::atan2(p.y, p.x);
        return out;
    }

    const double ratio = std::abs(p.t) / (rz * rz);
    const double psi = detail::solve_arc_ratio(ratio);
    out.psi = psi;
    out.r = rz * psi / (2.0 * std::sin(0.5 * psi));
    out.lambda = kTwoPi / psi;
    const double sign = p.t > 0.0 ? 1.0 : -1.0;
    out.heading = std::atan2(p.y, p.x) + sign * 0.5 * psi;
    return out;
}

double cc_distance(const Point& p, const Point& q) {
    const Point d = multiply(inverse(p), q);
    if (d.x == 0.0 && d.y == 0.0 && d.t == 0.0) return 0.0;
    return solve_polar(d).r;
}

Point sphere_point(const SpherePoint& sp) {
    if (!(sp.r > 0.0))
        throw std::invalid_argument("sphere_point: radius must be positive");
    const double u = sp.phi * sp.r;
    if (std::abs(u) > kTwoPi * (1.0 + 1e-12))
        throw std::invalid_argument("sphere_point: |phi*r| exceeds the lifetime bound 2*pi");
    const double zmag = sp.r * detail::sinc(0.5 * u);
    const double t = 2.0 * sp.r * sp.r * detail::tc(u);
    return {zmag * std::cos(sp.alpha), zmag * std::sin(sp.alpha), t};
}

namespace {

// Solve sinc(v) = x for v in [0, vmax] (sinc is strictly decreasing on
// [0, pi]).
double invert_sinc(double x, double vmax) {
    double lo = 0.0, hi = vmax;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (detail::sinc(mid) > x)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * vmax) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double hemisphere_height(double rho_z) {
    if (!(rho_z >= 0.0 && rho_z <= 1.0))
        throw std::invalid_argument("hemisphere_height: |z| must lie in [0, 1]");
    if (rho_z == 0.0) return 1.0 / kPi;
    if (rho_z == 1.0) return 0.0;
    const double v = invert_sinc(rho_z, kPi);  // v = psi/2
    return 2.0 * detail::tc(2.0 * v);
}

bool in_convex_hull(const Point& p, double r) {
    if (!(r > 0.0))
        throw std::invalid_argument("in_convex_hull: radius must be positive");
    // Membership is boundary-inclusive with a relative rounding slack, so
    // points generated exactly on the cap land inside.
    const double slack = 1e-12 * std::max(1.0, r * r);
    const double rz = p.abs_z();
    if (rz > r * (1.0 + 1e-12)) return false;
    const double disc_radius = 2.0 / kPi * r;
    double height;
    if (rz <= disc_radius) {
        height = 2.0 / kPi * r * r;
    } else {
        // Cap portion |phi r| <= pi: solve the sphere equation for the
        // sweep angle at this horizontal radius.
        const double v = invert_sinc(std::min(rz / r, 1.0), 0.5 * kPi);
        height = 2.0 * r * r * detail::tc(2.0 * v);
    }
    return std::abs(p.t) <= height + slack;
}

double cone_aperture(double lambda) {
    if (!(lambda > 1.0))
        throw std::invalid_argument("cone_aperture: lambda must exceed 1");
    return detail::arc_height_ratio(kTwoPi / lambda);
}

SphereDistance dist_to_sphere(const Point& p, double R) {
    if (!(R > 0.0))
        throw std::invalid_argument("dist_to_sphere: radius must be positive");
    if (p.t < 0.0)
        throw std::invalid_argument("dist_to_sphere: point must lie in the upper half-space");
    if (p == origin) return {R, false};
    const PolarSolve ps = solve_polar(p);
    if (!(ps.r < R))
        throw std::invalid_argument("dist_to_sphere: point must lie inside the open ball");
    if (ps.lambda <= R / ps.r) {
        const Point north{0.0, 0.0, R * R / kPi};
        return {cc_distance(p, north), true};
    }
    return {R - ps.r, false};
}

double rho(double theta) {
    if (!(theta > 0.0 && theta <= kPi))
        throw std::invalid_argument("rho: theta must lie in (0, pi]");
    const double sh = std::sin(0.5 * theta);
    const Point p{2.0 * sh, 0.0, 4.0 * sh * std::cos(0.5 * theta)};
    return cc_distance(origin, p);
}

double rho_prime(double theta) {
    if (!(theta > 0.0 && theta < kPi))
        throw std::invalid_argument("rho_prime: theta must lie in (0, pi)");
    const double sh = std::sin(0.5 * theta);
    const double ch = std::cos(0.5 * theta);
    // The chord point has |z| = 2 sin(theta/2), t = 2 sin(theta); its sweep
    // angle a solves arc_height_ratio(a) = cot(theta/2).
    const double a = detail::solve_arc_ratio(ch / sh);
    const double r = 2.0 * sh * a / (2.0 * std::sin(0.5 * a));
    return (0.5 * a) / std::sin(0.5 * a) * std::sin(0.5 * a + theta) / r;
}

}  // namespace heis
