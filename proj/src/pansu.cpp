#include "heis/pansu.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heis/geodesics.hpp"
#include "heis/parallel.hpp"
#include "heis/rng.hpp"

namespace heis {

namespace {

constexpr double kPi = std::numbers::pi;

}

Mat2 Mat2::rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, -s, s, c};
}

double operator_norm(const Mat2& m) {
    const double f2 = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
    const double det = m.det();
    const double disc = std::max(0.0, f2 * f2 - 4.0 * det * det);
    return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

double orthogonality_defect(const Mat2& j) {
    return operator_norm(j.transpose() * j - Mat2::identity());
}

double orthogonality_defect(const PansuJacobian& j) { return orthogonality_defect(j.j); }

namespace {

template <typename F>
PansuJacobian jacobian_impl(F&& f, const Point& p, const DiffConfig& cfg) {
    if (!(cfg.sigma > 0.0 && cfg.sigma <= 1.0))
        throw std::invalid_argument("pansu_jacobian: sigma must lie in (0, 1]");
    const double s = cfg.sigma;
    const Point fp = f(p);
    // Group increment f(p)^{-1} f(p * q) for a horizontal probe q.
    auto incr = [&](double qx, double qy) {
        return multiply(inverse(fp), f(multiply(p, Point{qx, qy, 0.0})));
    };
    double c1x, c1y, c2x, c2y;
    if (cfg.scheme == DiffScheme::OneSided) {
        const Point g1 = incr(s, 0.0), g2 = incr(0.0, s);
        c1x = g1.x / s;
        c1y = g1.y / s;
        c2x = g2.x / s;
        c2y = g2.y / s;
    } else {
        const Point g1p = incr(s, 0.0), g1m = incr(-s, 0.0);
        const Point g2p = incr(0.0, s), g2m = incr(0.0, -s);
        c1x = (g1p.x - g1m.x) / (2.0 * s);
        c1y = (g1p.y - g1m.y) / (2.0 * s);
        c2x = (g2p.x - g2m.x) / (2.0 * s);
        c2y = (g2p.y - g2m.y) / (2.0 * s);
    }
    PansuJacobian out;
    out.j = {c1x, c2x, c1y, c2y};
    out.det = out.j.det();
    if (!std::isfinite(out.det))
        throw std::runtime_error("pansu_jacobian: probe evaluation not finite");
    return out;
}

}  // namespace

PansuJacobian pansu_jacobian(const MapDescriptor& m, const Point& p, const DiffConfig& cfg) {
    return jacobian_impl([&m](const Point& q) { return eval_map(m, q); }, p, cfg);
}

PansuJacobian pansu_jacobian(const std::function<Point(const Point&)>& f, const Point& p,
                             const DiffConfig& cfg) {
    return jacobian_impl(f, p, cfg);
}

double vertical_quotient(const MapDescriptor& m, const Point& p, const DiffConfig& cfg) {
    const double s = cfg.sigma;
    const Point fp = eval_map(m, p);
    const Point g = multiply(inverse(fp), eval_map(m, multiply(p, Point{0.0, 0.0, s * s})));
    return g.t / (s * s);
}

std::vector<Point> ball_sample(double R, int n, std::uint64_t seed) {
    if (n <= 0) throw std::invalid_argument("ball_sample: n must be positive");
    if (!(R > 0.0)) throw std::invalid_argument("ball_sample: R must be positive");
    std::vector<Point> out(static_cast<std::size_t>(n));
    const double tmax = 2.0 / kPi * R * R;
    parallel_for(out.size(), [&](std::size_t i) {
        SampleRng rng(seed, i);
        for (;;) {
            const Point p{rng.uniform(-R, R), rng.uniform(-R, R), rng.uniform(-tmax, tmax)};
            if (p == origin) continue;
            if (cc_distance(origin, p) < R) {
                out[i] = p;
                break;
            }
        }
    });
    return out;
}

namespace {

// Sample points for Jacobian evaluation, resampling away from the axis
// when the map is singular there (differentiability holds only a.e.).
std::vector<Point> probe_points(const MapDescriptor& m, double R, int n, std::uint64_t seed,
                                const DiffConfig& cfg) {
    std::vector<Point> pts = ball_sample(R, n, seed);
    if (has_axis_singularity(m)) {
        const double margin = 10.0 * cfg.sigma;
        parallel_for(pts.size(), [&](std::size_t i) {
            SampleRng rng(seed ^ 0xA5A5A5A5ull, i);
            const double tmax = 2.0 / kPi * R * R;
            while (pts[i].abs_z() <= margin) {
                const Point p{rng.uniform(-R, R), rng.uniform(-R, R), rng.uniform(-tmax, tmax)};
                if (p.abs_z() > margin && cc_distance(origin, p) < R) pts[i] = p;
            }
        });
    }
    return pts;
}

McEstimate reduce_mean(const std::vector<double>& vals) {
    double sum = 0.0;
    for (double v : vals) sum += v;
    const double mean = sum / static_cast<double>(vals.size());
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    McEstimate out;
    out.mean = mean;
    out.stderr_ = vals.size() > 1
                      ? std::sqrt(ss / (static_cast<double>(vals.size()) - 1.0) /
                                  static_cast<double>(vals.size()))
                      : 0.0;
    return out;
}

}  // namespace

McEstimate bmo_average(const MapDescriptor& m, const Mat2& A, double R, int n,
                       std::uint64_t seed, const DiffConfig& cfg) {
    if (orthogonality_defect(A) > 1e-10)
        throw std::invalid_argument("bmo_average: A must be orthogonal");
    const std::vector<Point> pts = probe_points(m, R, n, seed, cfg);
    std::vector<double> vals(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        vals[i] = operator_norm(pansu_jacobian(m, pts[i], cfg).j - A);
    });
    return reduce_mean(vals);
}

double exp_integrability_check(const MapDescriptor& m, double R, double c_scale, int n,
                               std::uint64_t seed, const DiffConfig& cfg) {
    if (!(c_scale > 0.0))
        throw std::invalid_argument("exp_integrability_check: c_scale must be positive");
    const std::vector<Point> pts = probe_points(m, R, n, seed, cfg);
    std::vector<Mat2> js(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { js[i] = pansu_jacobian(m, pts[i], cfg).j; });
    Mat2 mean{};
    for (const Mat2& j : js) mean = mean + j;
    mean = mean.scaled(1.0 / static_cast<double>(js.size()));
    double sum = 0.0;
    for (const Mat2& j : js) {
        const double arg = operator_norm(j - mean) / c_scale;
        if (arg > 700.0) return std::numeric_limits<double>::infinity();
        sum += std::exp(arg);
    }
    return sum / static_cast<double>(js.size());
}

}  // namespace heis
