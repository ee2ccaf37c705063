#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "newsrank/error.hpp"
#include "newsrank/relevance.hpp"
#include "newsrank/rng.hpp"

using namespace newsrank;

namespace {

// Independent reference: textbook Hermite evaluation between two flat
// control points, written from the basis polynomials, not shared with the
// library path.
double hermite_flat_reference(double y, double y0, double p0, double y1, double p1) {
    if (y <= y0) return p0;
    if (y >= y1) return p1;
    const double s = (y - y0) / (y1 - y0);
    return p0 * (2 * s * s * s - 3 * s * s + 1) + p1 * (-2 * s * s * s + 3 * s * s);
}

std::vector<double> skewed_sample(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> y(n);
    for (double& v : y) v = std::floor(std::exp(3.0 + rng.normal()));
    return y;
}

}  // namespace

TEST_CASE("control points pin phi to 0 and 1") {
    const std::vector<double> y = skewed_sample(7, 500);
    const RelevanceFn rel = build_relevance(y);
    std::vector<double> sorted(y);
    std::sort(sorted.begin(), sorted.end());

    const double median = rel.control_points().front().y;
    const double upper = rel.control_points().back().y;
    CHECK(rel(median) == 0.0);
    CHECK(rel(median - 100) == 0.0);
    CHECK(rel(upper) == 1.0);
    CHECK(rel(upper + 1) == 1.0);
    CHECK(rel(upper * 10) == 1.0);
}

TEST_CASE("midpoint value matches the independent Hermite reference") {
    const std::vector<double> y = skewed_sample(11, 400);
    const RelevanceFn rel = build_relevance(y);
    const double y0 = rel.control_points().front().y;
    const double y1 = rel.control_points().back().y;

    const double mid = 0.5 * (y0 + y1);
    CHECK(rel(mid) == doctest::Approx(hermite_flat_reference(mid, y0, 0, y1, 1)).epsilon(1e-12));
    CHECK(rel(mid) == doctest::Approx(0.5).epsilon(1e-12));  // flat-slope Hermite midpoint
    CHECK(rel(mid) > 0.0);
    CHECK(rel(mid) < 1.0);
    for (double frac : {0.1, 0.25, 0.4, 0.6, 0.8, 0.95}) {
        const double v = y0 + frac * (y1 - y0);
        CHECK(rel(v) ==
              doctest::Approx(hermite_flat_reference(v, y0, 0, y1, 1)).epsilon(1e-12));
    }
}

TEST_CASE("monotone and in range over random draws") {
    const std::vector<double> y = skewed_sample(3, 1000);
    const RelevanceFn rel = build_relevance(y);
    Rng rng(99);
    const double lo = -10.0, hi = 2000.0;
    for (int i = 0; i < 10000; ++i) {
        double a = lo + rng.next_unit() * (hi - lo);
        double b = lo + rng.next_unit() * (hi - lo);
        if (a > b) std::swap(a, b);
        const double pa = rel(a);
        const double pb = rel(b);
        CHECK(pa <= pb);
        CHECK(pa >= 0.0);
        CHECK(pb <= 1.0);
    }
}

TEST_CASE("build_relevance input contract") {
    CHECK_THROWS_AS(build_relevance({1.0, 2.0, 3.0}), ValidationError);  // too few
    CHECK_THROWS_AS(build_relevance({5.0, 5.0, 5.0, 5.0, 5.0}), ValidationError);  // no spread
    CHECK_THROWS_AS(RelevanceFn::from_points({{0.0, 0.0}}), ValidationError);
    CHECK_THROWS_AS(RelevanceFn::from_points({{0.0, 0.0}, {1.0, 0.5}}), ValidationError);
    CHECK_THROWS_AS(RelevanceFn::from_points({{0.0, 0.0}, {0.0, 1.0}}), ValidationError);
    CHECK_THROWS_AS(RelevanceFn::from_points({{0.0, 0.0}, {1.0, 1.0}}, 1.5), ValidationError);
}

TEST_CASE("explicit multi-point functions stay monotone") {
    const RelevanceFn rel =
        RelevanceFn::from_points({{0.0, 0.0}, {10.0, 0.3}, {50.0, 0.3}, {100.0, 1.0}}, 0.8);
    double prev = -1.0;
    for (double v = -5.0; v <= 120.0; v += 0.5) {
        const double p = rel(v);
        CHECK(p >= prev - 1e-15);
        prev = p;
    }
    CHECK(rel(10.0) == doctest::Approx(0.3));
    CHECK(rel(30.0) == doctest::Approx(0.3));  // flat plateau between equal phis
}

TEST_CASE("partition splits and preserves rows") {
    Dataset d;
    d.feature_names = {"f"};
    d.n_cols = 1;
    for (int i = 0; i < 100; ++i) {
        d.x.push_back(static_cast<double>(i));
        d.y.push_back(static_cast<double>(i));
        d.ids.push_back("r" + std::to_string(i));
        ++d.n_rows;
    }
    // phi crosses 0.9 at s where 3s^2-2s^3=0.9 -> y = 50 + s*(92-50)
    const RelevanceFn rel = RelevanceFn::from_points({{50.0, 0.0}, {92.0, 1.0}});
    auto [rare, normal] = partition(d, rel);
    CHECK(rare.n_rows + normal.n_rows == d.n_rows);
    for (std::size_t i = 0; i < rare.n_rows; ++i) CHECK(rel.is_rare(rare.y[i]));
    for (std::size_t i = 0; i < normal.n_rows; ++i) CHECK_FALSE(rel.is_rare(normal.y[i]));
    // count the rare rows independently
    std::size_t expect_rare = 0;
    for (double v : d.y) expect_rare += rel(v) >= rel.threshold();
    CHECK(rare.n_rows == expect_rare);
    CHECK(expect_rare > 0);

    SUBCASE("all below threshold gives an empty rare part") {
        const RelevanceFn high = RelevanceFn::from_points({{200.0, 0.0}, {300.0, 1.0}});
        auto [r2, n2] = partition(d, high);
        CHECK(r2.n_rows == 0);
        CHECK(n2.n_rows == d.n_rows);
    }
}
