#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "heis/geodesics.hpp"
#include "heis/pansu.hpp"
#include "heis/rng.hpp"

using namespace heis;
namespace {
constexpr double kPi = std::numbers::pi;

// Euclidean Jacobian of the plane spiral z e^{ik log|z|}; for
// vertical-line-preserving maps this is the exact differential.
Mat2 spiral_plane_jacobian(double k, double x, double y) {
    const double r2 = x * x + y * y;
    const std::complex<double> z{x, y}, I{0.0, 1.0};
    const std::complex<double> eia = std::polar(1.0, k * 0.5 * std::log(r2));
    const std::complex<double> cx = eia * (1.0 + I * k * z * x / r2);
    const std::complex<double> cy = eia * (I + I * k * z * y / r2);
    return {cx.real(), cy.real(), cx.imag(), cy.imag()};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}
}  // namespace

TEST_CASE("operator norm closed form") {
    CHECK(operator_norm(Mat2::identity()) == 1.0);
    CHECK(operator_norm({3, 0, 0, -2}) == 3.0);
    CHECK(operator_norm({0, 5, 0, 0}) == 5.0);
    const Mat2 r = Mat2::rotation(1.1);
    CHECK(operator_norm(r) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(orthogonality_defect(r) <= 1e-14);
    const double eps = 0.01;
    CHECK(orthogonality_defect(Mat2::identity().scaled(1 + eps)) ==
          doctest::Approx((1 + eps) * (1 + eps) - 1).epsilon(1e-12));
}

TEST_CASE("difference-quotient differential") {
    SUBCASE("rotation") {
        const double th = 0.8;
        const auto j = pansu_jacobian(
            MapDescriptor::isometry(IsometryDescriptor::rotation(th)), {0.4, -0.2, 1.0});
        const Mat2 want = Mat2::rotation(th);
        CHECK(operator_norm(j.j - want) <= 1e-10);
        CHECK(j.det == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("dilation") {
        const double eps = 0.05;
        const auto j = pansu_jacobian(MapDescriptor::dilation(1 + eps), {0.3, 0.3, -0.5});
        CHECK(operator_norm(j.j - Mat2::identity().scaled(1 + eps)) <= 1e-10);
        CHECK(j.det == doctest::Approx((1 + eps) * (1 + eps)).epsilon(1e-9));
    }
    SUBCASE("spiral at (1,0,0)") {
        const double k = 0.25;
        const auto j = pansu_jacobian(MapDescriptor::spiral(k), {1, 0, 0});
        CHECK(std::abs(j.j.a - 1.0) <= 1e-7);
        CHECK(std::abs(j.j.b) <= 1e-7);
        CHECK(std::abs(j.j.c - k) <= 1e-7);
        CHECK(std::abs(j.j.d - 1.0) <= 1e-7);
    }
    SUBCASE("sigma validation") {
        CHECK_THROWS_AS(
            pansu_jacobian(MapDescriptor::dilation(2.0), origin, DiffConfig{0.0}),
            std::invalid_argument);
    }
}

TEST_CASE("difference-quotient convergence orders") {
    const double k = 0.3;
    const MapDescriptor m = MapDescriptor::spiral(k);
    std::vector<double> one_sided, central;
    for (int i = 0; i < 100; ++i) {
        SampleRng rng(41, i);
        const Point p{rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const Mat2 exact = spiral_plane_jacobian(k, p.x, p.y);
        for (auto scheme : {DiffScheme::OneSided, DiffScheme::Central}) {
            const double e1 =
                operator_norm(pansu_jacobian(m, p, {1e-3, scheme}).j - exact);
            const double e2 =
                operator_norm(pansu_jacobian(m, p, {5e-4, scheme}).j - exact);
            (scheme == DiffScheme::OneSided ? one_sided : central).push_back(e1 / e2);
        }
    }
    const double r1 = median(one_sided), r2 = median(central);
    CHECK(r1 >= 1.5);
    CHECK(r1 <= 3.0);
    CHECK(r2 >= 3.0);
    CHECK(r2 <= 6.0);
}

TEST_CASE("near-isometries have nearly unit diagonal") {
    const double eps = 0.02;
    const std::vector<MapDescriptor> almost = {
        MapDescriptor::dilation(1 + eps), MapDescriptor::spiral(eps),
        MapDescriptor::kr_flow("sin_x", eps)};
    for (const auto& m : almost) {
        for (int i = 0; i < 60; ++i) {
            SampleRng rng(42, i);
            Point p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-4, 4)};
            if (has_axis_singularity(m) && p.abs_z() < 1e-2) p.x += 0.3;
            const auto j = pansu_jacobian(m, p);
            CHECK(std::abs(j.j.a) <= 1 + 10 * eps);
            CHECK(std::abs(j.j.d) <= 1 + 10 * eps);
        }
    }
}

TEST_CASE("vertical quotient matches the determinant") {
    SUBCASE("dilation is exact") {
        CHECK(vertical_quotient(MapDescriptor::dilation(1.1), {0.3, 0.2, 0.1}) ==
              doctest::Approx(1.21).epsilon(1e-9));
    }
    SUBCASE("vertical-line-preserving maps and isometries hit it directly") {
        // For these maps the vertical group increment is exactly det * w,
        // so the quotient agrees with the 2x2 determinant at any sigma.
        const std::vector<MapDescriptor> maps = {
            MapDescriptor::spiral(0.2),
            MapDescriptor::isometry(IsometryDescriptor::rotation(0.9))};
        for (const auto& m : maps) {
            const Point p{1.1, -0.4, 0.6};
            const double det = pansu_jacobian(m, p).det;
            CHECK(std::abs(vertical_quotient(m, p, {1e-2}) - det) <= 1e-7);
            CHECK(std::abs(vertical_quotient(m, p, {5e-3}) - det) <= 1e-7);
        }
    }
}

TEST_CASE("ball sampling") {
    SUBCASE("all samples inside, deterministic") {
        const auto a = ball_sample(2.0, 500, 77);
        const auto b = ball_sample(2.0, 500, 77);
        CHECK(a == b);
        for (const Point& p : a) CHECK(cc_distance(origin, p) < 2.0);
        const auto c = ball_sample(2.0, 500, 78);
        CHECK(a != c);
    }
    SUBCASE("acceptance ratio is scale free") {
        auto ratio = [](double R, int n, std::uint64_t seed) {
            int acc = 0;
            for (int i = 0; i < n; ++i) {
                SampleRng rng(seed, i);
                const Point p{rng.uniform(-R, R), rng.uniform(-R, R),
                              rng.uniform(-2 / kPi * R * R, 2 / kPi * R * R)};
                if (cc_distance(origin, p) < R) ++acc;
            }
            return static_cast<double>(acc) / n;
        };
        const double r1 = ratio(1.0, 20000, 5);
        const double r2 = ratio(4.0, 20000, 5);
        CHECK(std::abs(r1 - r2) <= 0.02);
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(ball_sample(1.0, 0, 1), std::invalid_argument);
        CHECK_THROWS_AS(ball_sample(0.0, 10, 1), std::invalid_argument);
    }
}

TEST_CASE("ball average of the differential deviation") {
    SUBCASE("dilation against the identity") {
        const double eps = 0.1;
        const auto mc =
            bmo_average(MapDescriptor::dilation(1 + eps), Mat2::identity(), 1.0, 5000, 42);
        CHECK(mc.mean == doctest::Approx(eps).epsilon(1e-8));
        CHECK(mc.stderr_ <= 1e-10);
    }
    SUBCASE("rotation against itself") {
        const auto mc = bmo_average(MapDescriptor::isometry(IsometryDescriptor::rotation(0.7)),
                                    Mat2::rotation(0.7), 1.0, 5000, 42);
        CHECK(mc.mean <= 1e-10);
    }
    SUBCASE("spiral stays within a small multiple of k") {
        const double k = 0.01;
        const auto mc = bmo_average(MapDescriptor::spiral(k), Mat2::identity(), 1.0, 5000, 43);
        CHECK(mc.mean <= 3 * k);
        CHECK(mc.mean > 0.0);
    }
    SUBCASE("left translation leaves the average unchanged") {
        const MapDescriptor m = MapDescriptor::spiral(0.05);
        const MapDescriptor shifted = MapDescriptor::composition(
            {MapDescriptor::isometry(IsometryDescriptor::translation({0.4, -0.8, 1.2})), m});
        const auto a = bmo_average(m, Mat2::identity(), 1.0, 2000, 44);
        const auto b = bmo_average(shifted, Mat2::identity(), 1.0, 2000, 44);
        CHECK(std::abs(a.mean - b.mean) <= 1e-9);
    }
    SUBCASE("A must be orthogonal") {
        CHECK_THROWS_AS(
            bmo_average(MapDescriptor::dilation(1.1), Mat2::identity().scaled(1.01), 1.0, 100, 1),
            std::invalid_argument);
    }
}

TEST_CASE("exponential integrability scale") {
    SUBCASE("isometry integrand is identically one") {
        const double v = exp_integrability_check(
            MapDescriptor::isometry(IsometryDescriptor::rotation(1.2)), 1.0, 0.05, 2000, 51);
        CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("constant Jacobian maps equal their mean exactly") {
        const double v =
            exp_integrability_check(MapDescriptor::dilation(1.1), 1.0, 0.1, 2000, 52);
        CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(v <= std::exp(1.0));
    }
    SUBCASE("smallest admissible scale grows linearly in k") {
        auto smallest = [](double k) {
            const MapDescriptor m = MapDescriptor::spiral(k);
            double lo = 1e-5, hi = 1.0;
            for (int it = 0; it < 30; ++it) {
                const double mid = std::sqrt(lo * hi);
                (exp_integrability_check(m, 1.0, mid, 2000, 53) <= 2.0 ? hi : lo) = mid;
            }
            return hi;
        };
        const double c1 = smallest(0.01), c2 = smallest(0.02), c4 = smallest(0.04);
        CHECK(c2 / c1 == doctest::Approx(2.0).epsilon(0.15));
        CHECK(c4 / c2 == doctest::Approx(2.0).epsilon(0.15));
    }
    SUBCASE("overflow reports the infinity sentinel") {
        const double v =
            exp_integrability_check(MapDescriptor::spiral(0.5), 1.0, 1e-12, 200, 54);
        CHECK(std::isinf(v));
        CHECK_THROWS_AS(exp_integrability_check(MapDescriptor::dilation(1.1), 1.0, 0.0, 10, 1),
                        std::invalid_argument);
    }
}
