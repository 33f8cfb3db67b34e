// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "vitaliq/errors.hpp"
#include "vitaliq/iq_series.hpp"

using namespace vitaliq;

TEST_CASE("IqSeries enforces its invariants") {
    CHECK_NOTHROW(IqSeries({1.0, 2.0}, {0.0, 0.0}, 20.0));
    CHECK_THROWS_AS(IqSeries({1.0, 2.0}, {0.0}, 20.0), DomainError);
    CHECK_THROWS_AS(IqSeries({1.0}, {0.0}, 20.0), DomainError);
    CHECK_THROWS_AS(IqSeries({1.0, 2.0}, {0.0, 0.0}, 0.0), DomainError);
    CHECK_THROWS_AS(IqSeries({1.0, 2.0}, {0.0, 0.0}, -5.0), DomainError);
    CHECK_THROWS_AS(IqSeries({1.0, std::numeric_limits<double>::quiet_NaN()}, {0.0, 0.0}, 20.0), DomainError);
    CHECK_THROWS_AS(IqSeries({1.0, 2.0}, {0.0, INFINITY}, 20.0), DomainError);

    const IqSeries s({1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}, 20.0);
    CHECK(s.size() == 3);
    CHECK(s.dt() == doctest::Approx(0.05));
    CHECK(s.q()[2] == 6.0);
}

TEST_CASE("IndexRange intersection") {
    const auto r = intersect({2, 10}, {5, 20});
    CHECK(r.begin == 5);
    CHECK(r.end == 10);
    CHECK(intersect({0, 3}, {5, 8}).empty());
    CHECK(IndexRange{4, 6}.contains(5));
    CHECK_FALSE(IndexRange{4, 6}.contains(6));
}

TEST_CASE("displacement follows lambda * phase / (4 pi)") {
    const double lambda = 0.005;
    const auto p = make_phase_series({0.0, std::numbers::pi, -2.0}, 20.0, {0, 3}, lambda);
    REQUIRE(p.has_displacement());
    for (std::size_t n = 0; n < p.size(); ++n) {
        CHECK(std::abs(p.displacement_m[n] - lambda * p.phase_rad[n] / (4.0 * std::numbers::pi)) < 1e-12);
    }
    CHECK(std::abs(phase_to_displacement(std::numbers::pi, lambda) - lambda / 4.0) < 1e-15);
    CHECK_FALSE(make_phase_series({0.0, 1.0}, 20.0, {0, 2}, 0.0).has_displacement());
}

TEST_CASE("ParseError carries the line number") {
    const ParseError e("bad value", 7);
    CHECK(e.line() == 7);
    CHECK(std::string(e.what()).find("line 7") != std::string::npos);
}
