#pragma once

#include <cstdint>
#include <vector>

#include "heis/maps.hpp"
#include "heis/point.hpp"

namespace heis {

struct Mat2 {
    // Row-major [[a, b], [c, d]].
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 rotation(double theta);

    Mat2 transpose() const { return {a, c, b, d}; }
    double det() const { return a * d - b * c; }

    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 scaled(double s) const { return {s * a, s * b, s * c, s * d}; }
};

// Operator 2-norm (largest singular value), in closed form from the
// characteristic quadratic of M^T M.
double operator_norm(const Mat2& m);

// ||A^T A - I||.
double orthogonality_defect(const Mat2& j);

struct PansuJacobian {
    Mat2 j;
    double det = 0.0;
};

double orthogonality_defect(const PansuJacobian& j);

enum class DiffScheme { OneSided, Central };

struct DiffConfig {
    double sigma = 1e-4;
    DiffScheme scheme = DiffScheme::Central;
};

// Finite-difference Pansu differential: columns are horizontal parts of
// the rescaled group increments along the dilated horizontal directions.
PansuJacobian pansu_jacobian(const MapDescriptor& m, const Point& p, const DiffConfig& cfg = {});
PansuJacobian pansu_jacobian(const std::function<Point(const Point&)>& f, const Point& p,
                             const DiffConfig& cfg = {});

// Rescaled vertical increment against the central direction; converges to
// det(Jf) for morphism differentials.
double vertical_quotient(const MapDescriptor& m, const Point& p, const DiffConfig& cfg = {});

// n points uniformly distributed in the ball B(O, R), by rejection inside
// the box |x|,|y| <= R, |t| <= (2/pi) R^2. Deterministic in (seed, index)
// and independent of evaluation order.
std::vector<Point> ball_sample(double R, int n, std::uint64_t seed);

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

// Monte-Carlo ball average of ||Jf - A|| for an orthogonal A.
McEstimate bmo_average(const MapDescriptor& m, const Mat2& A, double R, int n,
                       std::uint64_t seed, const DiffConfig& cfg = {});

// Monte-Carlo ball average of exp(||Jf - (Jf)_B|| / c_scale), where (Jf)_B
// is the entrywise mean over the same sample. Returns +infinity on
// overflow at tiny c_scale.
double exp_integrability_check(const MapDescriptor& m, double R, double c_scale, int n,
                               std::uint64_t seed, const DiffConfig& cfg = {});

}  // namespace heis
