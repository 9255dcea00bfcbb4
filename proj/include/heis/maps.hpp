#pragma once

#include <array>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "heis/isometry.hpp"
#include "heis/point.hpp"

namespace heis {

// Scalar potential with analytic horizontal derivatives Xp, Yp and a
// declared bound c0 on its second horizontal derivatives. Derivatives are
// supplied in closed form and audited against finite differences at
// registration; a silent derivative bug would corrupt every flow.
struct PotentialField {
    std::string id;
    std::function<double(const Point&)> p;
    std::function<double(const Point&)> xp;
    std::function<double(const Point&)> yp;
    double c0 = 0.0;
};

// Built-in potentials: "const" (p = 1), "x", "sin_x", "xy_bump".
const PotentialField& builtin_potential(const std::string& id);
std::vector<std::string> builtin_potential_ids();

// Max deviation of (xp, yp) from central differences of p over n seeded
// probes.
double audit_potential(const PotentialField& pf, int n, std::uint64_t seed);

struct DilationSpec {
    double lambda = 1.0;
};

struct SpiralSpec {
    double k = 0.0;
};

struct KrFlowSpec {
    std::string potential_id;
    double time = 0.0;
    double step = 1e-3;
};

// A member of the biLipschitz map zoo. Composition applies right to left:
// the last listed map acts first.
struct MapDescriptor {
    using Composition = std::vector<MapDescriptor>;
    std::variant<IsometryDescriptor, DilationSpec, SpiralSpec, KrFlowSpec, Composition> v;

    static MapDescriptor isometry(const IsometryDescriptor& g) { return {g}; }
    static MapDescriptor dilation(double lambda);
    static MapDescriptor spiral(double k) { return {SpiralSpec{k}}; }
    static MapDescriptor kr_flow(const std::string& potential_id, double time,
                                 double step = 1e-3);
    static MapDescriptor composition(Composition maps);
};

Point eval_map(const MapDescriptor& m, const Point& p);

// True when the map can be non-differentiable on the vertical axis (spiral
// factor present); Pansu probes then keep clear of |z| = 0.
bool has_axis_singularity(const MapDescriptor& m);

// Korányi–Reimann field v = -1/4 (Yp) X + 1/4 (Xp) Y + p T in coordinates.
std::array<double, 3> kr_vector_field(const PotentialField& pf, const Point& p);

// Classical fixed-step RK4 flow of the Korányi–Reimann field over [0, s].
Point integrate_flow(const PotentialField& pf, double s, const Point& p, double h);

struct BilipEstimate {
    double upper = 0.0;
    double lower = 0.0;
    int skipped = 0;  // coincident pairs
};

BilipEstimate bilip_estimate(const MapDescriptor& m,
                             const std::vector<std::pair<Point, Point>>& samples);

// f(p)^{-1} * p for an arbitrary self-map f.
Point phi_conjugate(const std::function<Point(const Point&)>& f, const Point& p);
Point phi_conjugate(const MapDescriptor& m, const Point& p);

// Parses zoo descriptors of the form "spiral:k=0.05", "dilation:eps=1e-3",
// "krflow:p=sin_x,s=0.1,h=1e-3", "isometry[:theta=...,m=...,wx=...,...]".
MapDescriptor parse_map(const std::string& text);

}  // namespace heis
