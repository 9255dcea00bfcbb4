#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heis/geodesics.hpp"
#include "heis/isometry.hpp"
#include "heis/json_io.hpp"
#include "heis/point.hpp"
#include "heis/rng.hpp"

using namespace heis;
namespace {
constexpr double kPi = std::numbers::pi;

Point random_point(SampleRng& rng, double box = 3.0) {
    return {rng.uniform(-box, box), rng.uniform(-box, box), rng.uniform(-3 * box, 3 * box)};
}

double linf(const Point& a, const Point& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.t - b.t)});
}
}  // namespace

TEST_CASE("group product") {
    const Point p = multiply({1, 0, 0}, {0, 1, 0});
    CHECK(p.x == 1.0);
    CHECK(p.y == 1.0);
    CHECK(p.t == -2.0);

    CHECK(multiply(origin, {4.0, -5.0, 6.0}) == Point{4.0, -5.0, 6.0});

    const Point q{0.3, -1.2, 5.0};
    CHECK(linf(multiply(q, inverse(q)), origin) == 0.0);
}

TEST_CASE("inverse") {
    CHECK(inverse({1, 2, 3}) == Point{-1, -2, -3});
    CHECK(inverse(origin) == origin);
    for (int i = 0; i < 100; ++i) {
        SampleRng rng(1, i);
        const Point p = random_point(rng);
        CHECK(inverse(inverse(p)) == p);
    }
}

TEST_CASE("group axioms on random triples") {
    double worst_assoc = 0.0, worst_inv = 0.0;
    for (int i = 0; i < 10000; ++i) {
        SampleRng rng(2, i);
        const Point a = random_point(rng), b = random_point(rng), c = random_point(rng);
        worst_assoc = std::max(worst_assoc,
                               linf(multiply(multiply(a, b), c), multiply(a, multiply(b, c))));
        worst_inv = std::max(worst_inv, linf(multiply(a, inverse(a)), origin));
    }
    CHECK(worst_assoc <= 1e-12);
    CHECK(worst_inv <= 1e-12);
}

TEST_CASE("isometry action") {
    SUBCASE("quarter rotation") {
        const Point p = apply_isometry({origin, kPi / 2, 0}, {1, 0, 0});
        CHECK(std::abs(p.x) < 1e-15);
        CHECK(p.y == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(p.t == 0.0);
    }
    SUBCASE("flip") {
        CHECK(apply_isometry(IsometryDescriptor::flip(), {1, 2, 3}) == Point{1, -2, -3});
    }
    SUBCASE("central translation commutes") {
        CHECK(apply_isometry({{0, 0, 5}, 0.0, 0}, {1, 1, 0}) == Point{1, 1, 5});
    }
}

TEST_CASE("dilation") {
    CHECK(dilate(2.0, {1, 0, 1}) == Point{2, 0, 4});
    const Point p{0.4, -0.9, 2.3};
    CHECK(dilate(1.0, p) == p);
    const double eps = 1e-3;
    CHECK(dilate(1.0 + eps, {0, 0, 1}).t == doctest::Approx((1 + eps) * (1 + eps)).epsilon(1e-15));
    CHECK_THROWS_AS(dilate(0.0, p), std::invalid_argument);
    CHECK_THROWS_AS(dilate(-2.0, p), std::invalid_argument);

    // dilation homogeneity of the gauge
    for (int i = 0; i < 200; ++i) {
        SampleRng rng(3, i);
        const Point a = random_point(rng), b = random_point(rng);
        const double lam = rng.uniform(0.1, 6.0);
        const double g1 = gauge_distance(dilate(lam, a), dilate(lam, b));
        const double g2 = lam * gauge_distance(a, b);
        CHECK(std::abs(g1 - g2) <= 1e-13 * g2);
    }
}

TEST_CASE("gauge quasi-distance") {
    CHECK(gauge_distance(origin, {1, 0, 0}) == 1.0);
    CHECK(gauge_distance(origin, {0, 0, 4}) == 2.0);
    // the twist term makes this 2*sqrt(2), not sqrt(2)
    CHECK(gauge_distance({1, 0, 0}, {0, 1, 0}) ==
          doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("canonical composition acts like sequential application") {
    for (int i = 0; i < 300; ++i) {
        SampleRng rng(4, i);
        IsometryDescriptor gens[3];
        for (auto& g : gens) {
            g.w = random_point(rng, 1.5);
            g.theta = normalize_angle(rng.uniform(0.0, 2 * kPi));
            g.m = rng.uniform() < 0.5 ? 0 : 1;
        }
        const IsometryDescriptor combined = compose(gens[0], compose(gens[1], gens[2]));
        const Point p = random_point(rng);
        const Point direct =
            apply_isometry(gens[0], apply_isometry(gens[1], apply_isometry(gens[2], p)));
        CHECK(linf(apply_isometry(combined, p), direct) <= 1e-12);
        CHECK(combined.theta >= 0.0);
        CHECK(combined.theta < 2 * kPi);
        CHECK((combined.m == 0 || combined.m == 1));
    }
}

TEST_CASE("isometry inverse cancels") {
    for (int i = 0; i < 200; ++i) {
        SampleRng rng(5, i);
        IsometryDescriptor g{random_point(rng, 2.0), normalize_angle(rng.uniform(0.0, 2 * kPi)),
                             rng.uniform() < 0.5 ? 0 : 1};
        const IsometryDescriptor id = compose(g, inverse_isometry(g));
        const Point p = random_point(rng);
        CHECK(linf(apply_isometry(id, p), p) <= 1e-12);
    }
}

TEST_CASE("isometries preserve gauge and control distance") {
    double worst_gauge = 0.0, worst_cc = 0.0;
    for (int i = 0; i < 400; ++i) {
        SampleRng rng(6, i);
        IsometryDescriptor g{random_point(rng, 2.0), normalize_angle(rng.uniform(0.0, 2 * kPi)),
                             rng.uniform() < 0.5 ? 0 : 1};
        const Point p = random_point(rng), q = random_point(rng);
        const Point gp = apply_isometry(g, p), gq = apply_isometry(g, q);
        const double gd = gauge_distance(p, q);
        worst_gauge = std::max(worst_gauge, std::abs(gauge_distance(gp, gq) - gd) / gd);
        const double cd = cc_distance(p, q);
        worst_cc = std::max(worst_cc, std::abs(cc_distance(gp, gq) - cd) / cd);
    }
    CHECK(worst_gauge <= 1e-12);
    CHECK(worst_cc <= 1e-8);
}

TEST_CASE("json wire format") {
    const nlohmann::json jp = Point{1.5, -2.0, 0.25};
    CHECK(jp.dump() == "[1.5,-2.0,0.25]");
    CHECK(jp.get<Point>() == Point{1.5, -2.0, 0.25});

    const IsometryDescriptor g{{1, 2, 3}, 0.5, 1};
    const nlohmann::json jg = g;
    CHECK(jg["w"].dump() == "[1.0,2.0,3.0]");
    CHECK(jg["theta"] == 0.5);
    CHECK(jg["m"] == 1);
    const auto back = jg.get<IsometryDescriptor>();
    CHECK(back.w == g.w);
    CHECK(back.theta == g.theta);
    CHECK(back.m == g.m);

    nlohmann::json bad = {{"w", {1, 2, 3}}, {"theta", 0.1}, {"m", 7}};
    CHECK_THROWS_AS(bad.get<IsometryDescriptor>(), std::invalid_argument);
}
