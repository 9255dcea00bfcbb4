#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heis/maps.hpp"
#include "heis/pansu.hpp"
#include "heis/point.hpp"

namespace heis {

// Descending epsilon ladder for the stability experiments.
struct EpsGrid {
    std::vector<double> values;

    EpsGrid() : values{1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4} {}
    explicit EpsGrid(std::vector<double> v);
};

struct ReportRow {
    double eps = 0.0;
    double error = 0.0;
    double bound = 0.0;
    bool pass = false;
    bool flagged = false;
    std::map<std::string, double> aux;
    std::string note;
};

struct ExperimentReport {
    std::string id;
    std::string family;
    std::uint64_t seed = 0;
    double c_bound = 10.0;
    std::map<std::string, double> config;  // sampling radii, counts, steps
    std::vector<ReportRow> rows;
    double slope = 0.0;
    bool has_slope = false;
    bool pass = false;
    std::string notes;

    std::string to_json() const;
    std::string to_csv() const;
};

// Least-squares log-log slope of error against eps; rows with error below
// 1e-12 are dropped (zero-error isometry rows would poison the fit).
std::optional<double> fit_slope(const std::vector<ReportRow>& rows);

// Errors should shrink with eps up to sampling noise: at most one 5%
// inversion among the significant rows, and the smallest-eps error no
// larger than the largest-eps one.
bool monotone_trend_ok(const std::vector<ReportRow>& rows);

// An eps-indexed family of zoo maps, e.g. eps -> dilation(1 + eps).
struct MapFamily {
    std::string name;
    std::function<MapDescriptor(double eps)> at;
};

// "dilation", "isometry", "spiral", "krflow[:p=sin_x,h=...]".
MapFamily make_family(const std::string& text);

// Best isometry T = L_w o R_theta o J^m through matched point pairs:
// rotation from the centered cross-covariance closed form, horizontal
// translation from residual means, vertical translation from the median of
// vertical residuals. Residual is the mean squared cc-distance.
struct FitResult {
    Mat2 A;             // horizontal action, orthogonal
    Point translation;  // w
    double theta = 0.0;
    int m = 0;
    double residual = 0.0;

    IsometryDescriptor isometry() const { return {translation, theta, m}; }
};

FitResult fit_isometry(const std::vector<std::pair<Point, Point>>& pairs, bool allow_reflection);

// Origin-anchored orthogonal fit of horizontal images (the Theorem B
// matrix A).
struct PlaneFit {
    Mat2 A;
    double theta = 0.0;
    int m = 0;
};

PlaneFit fit_plane_rotation(const std::vector<std::pair<std::complex<double>, std::complex<double>>>&
                                pairs,
                            bool allow_reflection = true);

struct GridConfig {
    EpsGrid grid;
    double c_bound = 10.0;
    std::uint64_t seed = 0;
};

struct TheoremAConfig : GridConfig {
    double half_length = 1.0;  // chords measured over [-L, L]
    int intervals = 64;        // finest dyadic level (rounded up to a power of two)
};

struct TheoremBConfig : GridConfig {
    double radius = 1.0;
    int samples = 512;
};

struct TheoremCConfig : GridConfig {
    std::vector<double> t_grid = {-4.0, -2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0, 4.0};
    double fit_radius = 1.0;
    int fit_samples = 256;
};

struct TheoremDConfig : GridConfig {
    double radius = 1.0;
    int samples = 400;
};

struct TheoremEConfig : GridConfig {
    double radius = 1.0;
    int samples = 200000;
    int plane_samples = 256;
    DiffConfig diff;
};

struct SestoConfig {
    double q = 1.0;
    double s = 1.5707963267948966;
    double sigma = 1e-4;
    double sigma_max = 1e-3;
    std::vector<double> sigma_grid = {1e-3, 1e-4, 1e-5};
    int samples = 100000;
    double c0 = 10.0;
    double tol = 1e-8;
    std::uint64_t seed = 0;
};

struct CartozzoConfig {
    std::vector<double> radii = {10.0, 100.0, 1000.0};
};

// Quasigeodesic image of the straight line s -> (s, 0, 0): per-eps chord
// ratios over dyadic intervals, sup |tau(s)|/s^2, and cone avoidance.
ExperimentReport run_theorem_a(const MapFamily& family, const TheoremAConfig& cfg);

// Image of the plane t = 0: per-eps sup d(f(z;0), (Az;0))/R with fitted
// A in O(2).
ExperimentReport run_theorem_b(const MapFamily& family, const TheoremBConfig& cfg);

// Image of the t-axis: per-eps sup d(f(0;t), (0;t)) / sqrt(pi |t|), with
// the better of the two orientations (x,y,t) -> (x,-y,-t); includes the
// vertical sign check when the fitted A is a rotation.
ExperimentReport run_theorem_c(const MapFamily& family, const TheoremCConfig& cfg);

// Pointwise approximation by a full isometry over a ball, with the fitted
// isometry reported per row.
ExperimentReport run_theorem_d(const MapFamily& family, const TheoremDConfig& cfg);

// Ball average of ||Jf - A|| with the plane-fitted A.
ExperimentReport run_theorem_e(const MapFamily& family, const TheoremEConfig& cfg);

// Sphere tangency at the plane t = 0 and the pinch of the enlarged ball's
// shadow: max t over S(P, d(P,Q)) stays at 0 (attained at Q only), and the
// upper part of S(P, (1+sigma) d(P,Q)) projects into a sigma^{1/4}-size
// disc around the touching point.
ExperimentReport check_sesto(const SestoConfig& cfg);

// Large-radius geodesic tail: t(1)*R -> 2 pi/3 and (1 - |z(1)|)*R^2 ->
// pi^2/6, with errors decreasing along the radius grid.
ExperimentReport check_cartozzo_b(const CartozzoConfig& cfg);

// The distances d(O,(0,1,1)) and d(O,(0,1,3)) differ by more than 0.01.
ExperimentReport appendix_inequality_check();

}  // namespace heis
