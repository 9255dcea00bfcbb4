#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace heis {

// A point (x, y, t) of the first Heisenberg group. z = x + iy is the
// horizontal part, t the vertical coordinate.
struct Point {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;

    std::complex<double> z() const { return {x, y}; }
    double abs_z() const { return std::hypot(x, y); }

    bool operator==(const Point&) const = default;
};

constexpr Point origin{};

// Group product: (x,y,t)*(x',y',t') = (x+x', y+y', t+t'+2(x'y - xy')).
inline Point multiply(const Point& p, const Point& q) {
    return {p.x + q.x, p.y + q.y, p.t + q.t + 2.0 * (q.x * p.y - p.x * q.y)};
}

inline Point inverse(const Point& p) { return {-p.x, -p.y, -p.t}; }

// Anisotropic dilation (z;t) -> (lambda z; lambda^2 t), lambda > 0.
inline Point dilate(double lambda, const Point& p) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("dilate: lambda must be positive");
    return {lambda * p.x, lambda * p.y, lambda * lambda * p.t};
}

// Homogeneous gauge of p^{-1}q: |z'-z| + |t'-t-2 Im(z conj(z'))|^{1/2}.
// A quasi-distance globally equivalent to the control distance; used for
// bounding boxes and bracketing, never as the exact distance.
inline double gauge_distance(const Point& p, const Point& q) {
    const Point d = multiply(inverse(p), q);
    return std::hypot(d.x, d.y) + std::sqrt(std::abs(d.t));
}

inline bool finite(const Point& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.t);
}

}  // namespace heis
