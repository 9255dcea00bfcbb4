#include "heis/maps.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "heis/geodesics.hpp"
#include "heis/rng.hpp"

namespace heis {

namespace {

PotentialField make_builtin(const std::string& id) {
    PotentialField pf;
    pf.id = id;
    if (id == "const") {
        pf.p = [](const Point&) { return 1.0; };
        pf.xp = [](const Point&) { return 0.0; };
        pf.yp = [](const Point&) { return 0.0; };
        pf.c0 = 0.0;
    } else if (id == "x") {
        pf.p = [](const Point& q) { return q.x; };
        pf.xp = [](const Point&) { return 1.0; };
        pf.yp = [](const Point&) { return 0.0; };
        pf.c0 = 0.0;
    } else if (id == "sin_x") {
        pf.p = [](const Point& q) { return std::sin(q.x); };
        pf.xp = [](const Point& q) { return std::cos(q.x); };
        pf.yp = [](const Point&) { return 0.0; };
        pf.c0 = 1.0;
    } else if (id == "xy_bump") {
        auto bump = [](const Point& q) { return std::exp(-(q.x * q.x + q.y * q.y)); };
        pf.p = [bump](const Point& q) { return q.x * q.y * bump(q); };
        pf.xp = [bump](const Point& q) { return q.y * (1.0 - 2.0 * q.x * q.x) * bump(q); };
        pf.yp = [bump](const Point& q) { return q.x * (1.0 - 2.0 * q.y * q.y) * bump(q); };
        pf.c0 = 4.0;  // measured sup of the four second horizontal derivatives is < 3.1
    } else {
        throw std::invalid_argument("unknown potential: " + id);
    }
    if (audit_potential(pf, 64, 20240u) > 1e-6)
        throw std::logic_error("potential " + id + " failed the derivative audit");
    return pf;
}

}  // namespace

const PotentialField& builtin_potential(const std::string& id) {
    static const std::map<std::string, PotentialField> registry = [] {
        std::map<std::string, PotentialField> r;
        for (const char* name : {"const", "x", "sin_x", "xy_bump"})
            r.emplace(name, make_builtin(name));
        return r;
    }();
    const auto it = registry.find(id);
    if (it == registry.end()) throw std::invalid_argument("unknown potential: " + id);
    return it->second;
}

std::vector<std::string> builtin_potential_ids() { return {"const", "x", "sin_x", "xy_bump"}; }

double audit_potential(const PotentialField& pf, int n, std::uint64_t seed) {
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        SampleRng rng(seed, static_cast<std::uint64_t>(i));
        const Point q{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        // Horizontal increments along the left-invariant frame: the X
        // integral curve through q is q*(s,0,0), the Y one q*(0,s,0).
        const double fd_x =
            (pf.p(multiply(q, {h, 0, 0})) - pf.p(multiply(q, {-h, 0, 0}))) / (2.0 * h);
        const double fd_y =
            (pf.p(multiply(q, {0, h, 0})) - pf.p(multiply(q, {0, -h, 0}))) / (2.0 * h);
        worst = std::max(worst, std::abs(fd_x - pf.xp(q)));
        worst = std::max(worst, std::abs(fd_y - pf.yp(q)));
    }
    return worst;
}

MapDescriptor MapDescriptor::dilation(double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("dilation: lambda must be positive");
    return {DilationSpec{lambda}};
}

MapDescriptor MapDescriptor::kr_flow(const std::string& potential_id, double time, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("kr_flow: step must be positive");
    builtin_potential(potential_id);  // validates the id
    return {KrFlowSpec{potential_id, time, step}};
}

MapDescriptor MapDescriptor::composition(Composition maps) {
    if (maps.empty()) throw std::invalid_argument("composition: needs at least one map");
    return {std::move(maps)};
}

Point eval_map(const MapDescriptor& m, const Point& p) {
    return std::visit(
        [&p](const auto& spec) -> Point {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, IsometryDescriptor>) {
                return apply_isometry(spec, p);
            } else if constexpr (std::is_same_v<T, DilationSpec>) {
                return dilate(spec.lambda, p);
            } else if constexpr (std::is_same_v<T, SpiralSpec>) {
                const double rz = p.abs_z();
                if (rz == 0.0) return p;  // axis extension S_k(0;t) = (0;t)
                const double ang = spec.k * std::log(rz);
                const double c = std::cos(ang), s = std::sin(ang);
                return {c * p.x - s * p.y, s * p.x + c * p.y, p.t - spec.k * rz * rz};
            } else if constexpr (std::is_same_v<T, KrFlowSpec>) {
                return integrate_flow(builtin_potential(spec.potential_id), spec.time, p,
                                      spec.step);
            } else {
                Point q = p;
                for (auto it = spec.rbegin(); it != spec.rend(); ++it) q = eval_map(*it, q);
                return q;
            }
        },
        m.v);
}

bool has_axis_singularity(const MapDescriptor& m) {
    return std::visit(
        [](const auto& spec) -> bool {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, SpiralSpec>) {
                return spec.k != 0.0;
            } else if constexpr (std::is_same_v<T, MapDescriptor::Composition>) {
                for (const auto& part : spec)
                    if (has_axis_singularity(part)) return true;
                return false;
            } else {
                return false;
            }
        },
        m.v);
}

std::array<double, 3> kr_vector_field(const PotentialField& pf, const Point& p) {
    const double a = -0.25 * pf.yp(p);  // X component
    const double b = 0.25 * pf.xp(p);   // Y component
    const double c = pf.p(p);           // T component
    // X = (1, 0, 2y), Y = (0, 1, -2x), T = (0, 0, 1)
    return {a, b, 2.0 * p.y * a - 2.0 * p.x * b + c};
}

Point integrate_flow(const PotentialField& pf, double s, const Point& p, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("integrate_flow: step must be positive");
    if (s == 0.0) return p;
    const auto steps = static_cast<long>(std::ceil(std::abs(s) / h));
    const double dt = s / static_cast<double>(steps);
    auto field = [&pf](const Point& q) { return kr_vector_field(pf, q); };
    Point q = p;
    for (long i = 0; i < steps; ++i) {
        const auto k1 = field(q);
        const auto at = [&](const std::array<double, 3>& k, double f) {
            return Point{q.x + f * dt * k[0], q.y + f * dt * k[1], q.t + f * dt * k[2]};
        };
        const auto k2 = field(at(k1, 0.5));
        const auto k3 = field(at(k2, 0.5));
        const auto k4 = field(at(k3, 1.0));
        q.x += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        q.y += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        q.t += dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
        if (!finite(q)) throw std::runtime_error("integrate_flow: state became non-finite");
    }
    return q;
}

BilipEstimate bilip_estimate(const MapDescriptor& m,
                             const std::vector<std::pair<Point, Point>>& samples) {
    if (samples.empty()) throw std::invalid_argument("bilip_estimate: no sample pairs");
    BilipEstimate out;
    out.upper = 0.0;
    out.lower = std::numeric_limits<double>::infinity();
    for (const auto& [p, q] : samples) {
        const double d0 = cc_distance(p, q);
        if (d0 == 0.0) {
            ++out.skipped;
            continue;
        }
        const double ratio = cc_distance(eval_map(m, p), eval_map(m, q)) / d0;
        out.upper = std::max(out.upper, ratio);
        out.lower = std::min(out.lower, ratio);
    }
    if (out.skipped == static_cast<int>(samples.size()))
        throw std::invalid_argument("bilip_estimate: all sample pairs coincident");
    return out;
}

Point phi_conjugate(const std::function<Point(const Point&)>& f, const Point& p) {
    return multiply(inverse(f(p)), p);
}

Point phi_conjugate(const MapDescriptor& m, const Point& p) {
    return multiply(inverse(eval_map(m, p)), p);
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("map parameter must look like key=value: " + item);
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

double to_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad number: " + s);
    return v;
}

}  // namespace

MapDescriptor parse_map(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string params = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto kv = params.empty() ? std::map<std::string, std::string>{} : parse_kv(params);

    if (name == "dilation") {
        if (kv.count("eps")) return MapDescriptor::dilation(1.0 + to_double(kv.at("eps")));
        if (kv.count("lambda")) return MapDescriptor::dilation(to_double(kv.at("lambda")));
        throw std::invalid_argument("dilation needs eps= or lambda=");
    }
    if (name == "spiral") {
        if (!kv.count("k")) throw std::invalid_argument("spiral needs k=");
        return MapDescriptor::spiral(to_double(kv.at("k")));
    }
    if (name == "krflow") {
        if (!kv.count("p") || !kv.count("s"))
            throw std::invalid_argument("krflow needs p= and s=");
        const double h = kv.count("h") ? to_double(kv.at("h")) : 1e-3;
        return MapDescriptor::kr_flow(kv.at("p"), to_double(kv.at("s")), h);
    }
    if (name == "isometry") {
        IsometryDescriptor g;
        if (kv.count("theta")) g.theta = normalize_angle(to_double(kv.at("theta")));
        if (kv.count("m")) g.m = static_cast<int>(to_double(kv.at("m")));
        if (kv.count("wx")) g.w.x = to_double(kv.at("wx"));
        if (kv.count("wy")) g.w.y = to_double(kv.at("wy"));
        if (kv.count("wt")) g.w.t = to_double(kv.at("wt"));
        if (g.m != 0 && g.m != 1) throw std::invalid_argument("isometry: m must be 0 or 1");
        return MapDescriptor::isometry(g);
    }
    throw std::invalid_argument("unknown map: " + name);
}

}  // namespace heis
