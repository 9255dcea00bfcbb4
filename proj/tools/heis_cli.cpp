#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "heis/experiments.hpp"
#include "heis/geodesics.hpp"
#include "heis/maps.hpp"
#include "heis/point.hpp"
#include "heis/rng.hpp"

namespace {

heis::Point parse_point(const std::string& text) {
    heis::Point p;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf%c", &p.x, &p.y, &p.t, &extra) != 3)
        throw CLI::ValidationError("point must look like x,y,t: " + text);
    return p;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << content;
}

int run(int argc, char** argv) {
    CLI::App app{"heis: Carnot-Carathéodory distances, geodesics, biLipschitz map "
                 "distortion and stability experiments on the first Heisenberg group"};
    app.require_subcommand(1);

    // dist
    auto* dist = app.add_subcommand(
        "dist", "Control distance between two points (exact geodesic solve; on the "
                "vertical axis it equals sqrt(pi |dt|))");
    std::string dist_p, dist_q;
    dist->add_option("p", dist_p, "first point x,y,t")->required();
    dist->add_option("q", dist_q, "second point x,y,t")->required();
    dist->callback([&] {
        std::printf("%.12f\n", heis::cc_distance(parse_point(dist_p), parse_point(dist_q)));
    });

    // geodesic
    auto* geo = app.add_subcommand(
        "geodesic", "Trace a unit-speed geodesic (curvature phi, heading alpha, left "
                    "translate base) to CSV");
    double g_phi = 0.0, g_alpha = 0.0, g_len = 1.0;
    int g_steps = 100;
    std::string g_base = "0,0,0", g_out;
    geo->add_option("--phi", g_phi, "signed curvature (0 = straight line)");
    geo->add_option("--alpha", g_alpha, "initial heading in radians");
    geo->add_option("--base", g_base, "base point x,y,t");
    geo->add_option("--length", g_len, "arclength to trace")->required();
    geo->add_option("--steps", g_steps, "number of CSV rows");
    geo->add_option("--out", g_out, "output file (stdout if omitted)");
    geo->callback([&] {
        const heis::GeodesicParams g{g_phi, g_alpha, parse_point(g_base)};
        std::string csv = "s,x,y,t\n";
        char line[160];
        for (int i = 0; i <= g_steps; ++i) {
            const double s = g_len * i / g_steps;
            const heis::Point p = heis::geodesic_point(g, s);
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", s, p.x, p.y, p.t);
            csv += line;
        }
        write_or_print(g_out, csv);
    });

    // sphere
    auto* sph = app.add_subcommand(
        "sphere", "Sample the geodesic sphere S(O, r) (sweep parameter within the "
                  "lifetime bound |phi r| <= 2 pi) to CSV");
    double s_r = 1.0;
    int s_n = 1000;
    std::uint64_t s_seed = 0;
    std::string s_out;
    sph->add_option("--radius", s_r, "sphere radius");
    sph->add_option("--n", s_n, "sample count");
    sph->add_option("--seed", s_seed, "sampling seed (required; no wall-clock default)")
        ->required();
    sph->add_option("--out", s_out, "output file (stdout if omitted)");
    sph->callback([&] {
        std::string csv = "phi,alpha,x,y,t\n";
        char line[200];
        for (int i = 0; i < s_n; ++i) {
            heis::SampleRng rng(s_seed, static_cast<std::uint64_t>(i));
            const double u = rng.uniform(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
            const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const heis::Point p = heis::sphere_point({s_r, u / s_r, a});
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", u / s_r, a, p.x,
                          p.y, p.t);
            csv += line;
        }
        write_or_print(s_out, csv);
    });

    // rho
    auto* rho_cmd = app.add_subcommand(
        "rho", "Table of the unit-circle chord distance rho(theta) = d((1;0),(e^{i "
               "theta};0)) and its closed-form derivative");
    double r_min = 0.05, r_max = 3.0;
    int r_count = 50;
    std::string r_out;
    rho_cmd->add_option("--min", r_min, "smallest theta (>0)");
    rho_cmd->add_option("--max", r_max, "largest theta (<= pi)");
    rho_cmd->add_option("--count", r_count, "row count");
    rho_cmd->add_option("--out", r_out, "output file (stdout if omitted)");
    rho_cmd->callback([&] {
        std::string csv = "theta,rho,rho_prime\n";
        char line[160];
        for (int i = 0; i < r_count; ++i) {
            const double th =
                r_count == 1 ? r_min : r_min + (r_max - r_min) * i / (r_count - 1);
            const double rp = th < std::numbers::pi ? heis::rho_prime(th)
                                                    : std::numeric_limits<double>::quiet_NaN();
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", th, heis::rho(th), rp);
            csv += line;
        }
        write_or_print(r_out, csv);
    });

    // flow
    auto* flow = app.add_subcommand(
        "flow", "Integrate the contact flow of a scalar potential (fixed-step RK4 of "
                "the Korányi-Reimann field)");
    std::string f_pot = "sin_x", f_point = "0,0,0";
    double f_time = 0.0, f_step = 1e-3;
    flow->add_option("--potential", f_pot, "one of: const, x, sin_x, xy_bump");
    flow->add_option("--time", f_time, "flow time")->required();
    flow->add_option("--step", f_step, "integrator step");
    flow->add_option("--point", f_point, "start point x,y,t");
    flow->callback([&] {
        const heis::Point out = heis::integrate_flow(heis::builtin_potential(f_pot), f_time,
                                                     parse_point(f_point), f_step);
        std::printf("%.12g,%.12g,%.12g\n", out.x, out.y, out.t);
    });

    // experiment
    auto* exp = app.add_subcommand(
        "experiment",
        "Run a stability experiment: a (quasigeodesic horizontal speed and cone "
        "avoidance), b (plane image vs orthogonal action), c (axis image vs vertical "
        "translation), d (pointwise isometry approximation), e (ball average of the "
        "differential vs orthogonal matrix), sesto (sphere tangency pinch), cartozzo-b "
        "(large-radius geodesic tail), appendix (axis distance inequality)");
    std::string e_theorem, e_family = "dilation", e_out, e_format = "both", e_grid;
    std::uint64_t e_seed = 0;
    double e_c = 10.0, e_radius = 1.0, e_q = 1.0, e_s = 1.5707963267948966, e_sigma = 1e-4;
    int e_samples = -1;
    std::string e_sigma_grid, e_radii;
    exp->add_option("--theorem", e_theorem, "one of: a, b, c, d, e, sesto, cartozzo-b, appendix")
        ->required();
    exp->add_option("--family", e_family,
                    "map family: dilation, isometry, spiral, krflow[:p=...,h=...]");
    exp->add_option("--seed", e_seed, "sampling seed (required; no wall-clock default)")
        ->required();
    exp->add_option("--out", e_out, "report basename (writes <out>.json / <out>.csv)");
    exp->add_option("--format", e_format, "json, csv or both");
    exp->add_option("--c", e_c, "harness constant C in the bounds");
    exp->add_option("--grid", e_grid, "comma-separated descending eps grid");
    exp->add_option("--radius", e_radius, "sampling radius R");
    exp->add_option("--samples", e_samples, "per-row sample count");
    exp->add_option("--q", e_q, "geodesic scale (sesto)");
    exp->add_option("--s", e_s, "arclength of the sphere center (sesto)");
    exp->add_option("--sigma", e_sigma, "sphere enlargement (sesto)");
    exp->add_option("--sigma-grid", e_sigma_grid, "comma-separated sigma grid (sesto)");
    exp->add_option("--radii", e_radii, "comma-separated radius grid (cartozzo-b)");
    exp->callback([&] {
        heis::EpsGrid grid = e_grid.empty() ? heis::EpsGrid{} : heis::EpsGrid{parse_list(e_grid)};
        heis::ExperimentReport rep;
        if (e_theorem == "a") {
            heis::TheoremAConfig cfg;
            cfg.grid = grid;
            cfg.c_bound = e_c;
            cfg.seed = e_seed;
            rep = heis::run_theorem_a(heis::make_family(e_family), cfg);
        } else if (e_theorem == "b") {
            heis::TheoremBConfig cfg;
            cfg.grid = grid;
            cfg.c_bound = e_c;
            cfg.seed = e_seed;
            cfg.radius = e_radius;
            if (e_samples > 0) cfg.samples = e_samples;
            rep = heis::run_theorem_b(heis::make_family(e_family), cfg);
        } else if (e_theorem == "c") {
            heis::TheoremCConfig cfg;
            cfg.grid = grid;
            cfg.c_bound = e_c;
            cfg.seed = e_seed;
            rep = heis::run_theorem_c(heis::make_family(e_family), cfg);
        } else if (e_theorem == "d") {
            heis::TheoremDConfig cfg;
            cfg.grid = grid;
            cfg.c_bound = e_c;
            cfg.seed = e_seed;
            cfg.radius = e_radius;
            if (e_samples > 0) cfg.samples = e_samples;
            rep = heis::run_theorem_d(heis::make_family(e_family), cfg);
        } else if (e_theorem == "e") {
            heis::TheoremEConfig cfg;
            cfg.grid = grid;
            cfg.c_bound = e_c;
            cfg.seed = e_seed;
            cfg.radius = e_radius;
            if (e_samples > 0) cfg.samples = e_samples;
            rep = heis::run_theorem_e(heis::make_family(e_family), cfg);
        } else if (e_theorem == "sesto") {
            heis::SestoConfig cfg;
            cfg.q = e_q;
            cfg.s = e_s;
            cfg.sigma = e_sigma;
            cfg.seed = e_seed;
            cfg.c0 = e_c;
            if (e_samples > 0) cfg.samples = e_samples;
            if (!e_sigma_grid.empty()) cfg.sigma_grid = parse_list(e_sigma_grid);
            rep = heis::check_sesto(cfg);
        } else if (e_theorem == "cartozzo-b") {
            heis::CartozzoConfig cfg;
            if (!e_radii.empty()) cfg.radii = parse_list(e_radii);
            rep = heis::check_cartozzo_b(cfg);
        } else if (e_theorem == "appendix") {
            rep = heis::appendix_inequality_check();
        } else {
            throw CLI::ValidationError("unknown theorem id: " + e_theorem);
        }

        if (!e_out.empty()) {
            if (e_format == "json" || e_format == "both")
                write_or_print(e_out + ".json", rep.to_json());
            if (e_format == "csv" || e_format == "both")
                write_or_print(e_out + ".csv", rep.to_csv());
        }
        if (rep.has_slope)
            std::printf("%s theorem=%s family=%s slope=%.4f\n", rep.pass ? "PASS" : "FAIL",
                        rep.id.c_str(), rep.family.c_str(), rep.slope);
        else
            std::printf("%s theorem=%s family=%s\n", rep.pass ? "PASS" : "FAIL", rep.id.c_str(),
                        rep.family.c_str());
        if (!rep.pass) throw CLI::RuntimeError(1);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::RuntimeError& e) {
        return e.get_exit_code();  // quantitative failure: 1
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
