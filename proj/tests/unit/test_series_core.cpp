#include "hetvol/aggregate.hpp"
#include "hetvol/calendar.hpp"
#include "hetvol/daily_series.hpp"
#include "hetvol/date.hpp"
#include "hetvol/errors.hpp"
#include "hetvol/stats.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

using namespace hetvol;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<HourlyRecord> flat_day(Date d, double price, double qty, int hours = 24) {
    std::vector<HourlyRecord> out;
    for (int h = 1; h <= hours; ++h) out.push_back({d, h, price, qty});
    return out;
}

}  // namespace

TEST_CASE("dates parse, format and count ISO weekdays", "[series-core]") {
    const Date d = parse_date("2015-01-01");
    CHECK(format_date(d) == "2015-01-01");
    CHECK(iso_weekday(d) == 4);
    CHECK(iso_weekday(parse_date("2016-05-28")) == 6);
    CHECK(days_between(d, parse_date("2016-05-28")) == 513);
    CHECK_THROWS_AS(parse_date("2015-02-30"), InputError);
    CHECK_THROWS_AS(parse_date("2015-1-01"), InputError);
    CHECK_THROWS_AS(parse_date("yesterday"), InputError);
}

TEST_CASE("day of year cycles over 365 with Feb 29 coded 60", "[series-core]") {
    CHECK(day_of_year_365(parse_date("2015-01-01")) == 1);
    CHECK(day_of_year_365(parse_date("2015-12-31")) == 365);
    CHECK(day_of_year_365(parse_date("2016-02-28")) == 59);
    CHECK(day_of_year_365(parse_date("2016-02-29")) == 60);
    CHECK(day_of_year_365(parse_date("2016-03-01")) == 60);
    CHECK(day_of_year_365(parse_date("2016-12-31")) == 365);
}

TEST_CASE("weighted daily average", "[series-core]") {
    SECTION("equal quantities reduce to the plain mean") {
        const std::vector<double> p(24, 50.0), q(24, 7.0);
        CHECK(weighted_average(p, q).value() == 50.0);
    }
    SECTION("two-hour toy day") {
        const std::vector<double> p{10.0, 30.0}, q{1.0, 3.0};
        CHECK_THAT(weighted_average(p, q).value(), WithinAbs(25.0, 1e-12));
    }
    SECTION("all-zero quantities flag the day missing with a warning") {
        auto recs = flat_day(parse_date("2015-01-01"), 40.0, 10.0);
        const auto zero = flat_day(parse_date("2015-01-02"), 40.0, 0.0);
        recs.insert(recs.end(), zero.begin(), zero.end());
        const auto r = weighted_daily_average(recs);
        REQUIRE(r.series.size() == 2);
        CHECK_FALSE(r.series.missing(0));
        CHECK(r.series.missing(1));
        CHECK(r.warnings.size() == 1);
    }
    SECTION("negative quantities are rejected") {
        const std::vector<double> p{10.0, 30.0}, q{1.0, -3.0};
        CHECK_THROWS_AS(weighted_average(p, q), std::invalid_argument);
        auto recs = flat_day(parse_date("2015-01-01"), 40.0, 10.0);
        recs[3].quantity = -1.0;
        CHECK_THROWS_AS(weighted_daily_average(recs), std::invalid_argument);
    }
    SECTION("days below the hour threshold are missing, others use present hours") {
        auto recs = flat_day(parse_date("2015-01-01"), 40.0, 10.0, 20);
        const auto sparse = flat_day(parse_date("2015-01-02"), 40.0, 10.0, 19);
        recs.insert(recs.end(), sparse.begin(), sparse.end());
        const auto r = weighted_daily_average(recs);
        CHECK(r.series.value(0) == 40.0);
        CHECK(r.series.missing(1));
        AggregationOptions loose;
        loose.min_hours = 19;
        CHECK_FALSE(weighted_daily_average(recs, loose).series.missing(1));
    }
    SECTION("gaps between reported dates become missing days") {
        auto recs = flat_day(parse_date("2015-01-01"), 40.0, 10.0);
        const auto later = flat_day(parse_date("2015-01-04"), 41.0, 10.0);
        recs.insert(recs.end(), later.begin(), later.end());
        const auto r = weighted_daily_average(recs);
        REQUIRE(r.series.size() == 4);
        CHECK(r.series.missing(1));
        CHECK(r.series.missing(2));
        CHECK(r.series.value(3) == 41.0);
    }
    SECTION("rescaling a day's quantities leaves the average unchanged") {
        const auto p = oracle::normal_draws(24, 3, 20.0);
        auto q = oracle::normal_draws(24, 4, 1.0);
        for (auto& v : q) v = std::abs(v) + 0.1;
        const double base = weighted_average(p, q).value();
        for (double k : {1e-3, 0.7, 12.0, 1e4}) {
            std::vector<double> qs(q);
            for (auto& v : qs) v *= k;
            CHECK_THAT(weighted_average(p, qs).value(), WithinRel(base, 1e-13));
        }
    }
}

TEST_CASE("calendar design", "[series-core]") {
    SECTION("weekdays from a Thursday start") {
        const auto cal = build_calendar(parse_date("2015-01-01"), 3, {});
        CHECK(cal.dayweek == std::vector<int>{4, 5, 6});
        CHECK(cal.trend == std::vector<int>{1, 2, 3});
    }
    SECTION("bank holiday flag follows the table") {
        const auto cal = build_calendar(parse_date("2015-12-24"), 3, {parse_date("2015-12-25")});
        CHECK(cal.bank == std::vector<int>{0, 1, 0});
    }
    SECTION("invariants over four years") {
        const Date start = parse_date("2015-01-01");
        const auto cal = build_calendar(start, 1461, italian_holidays(2015, 2018));
        REQUIRE(cal.size() == 1461);
        for (std::size_t i = 0; i < cal.size(); ++i) {
            CHECK(cal.trend[i] == static_cast<int>(i) + 1);
            CHECK(cal.dayweek[i] == iso_weekday(add_days(start, static_cast<long>(i))));
            CHECK(cal.dayyear[i] >= 1);
            CHECK(cal.dayyear[i] <= 365);
            if (i > 0) {
                const bool wraps = cal.dayweek[i - 1] == 7;
                CHECK(cal.dayweek[i] == (wraps ? 1 : cal.dayweek[i - 1] + 1));
                if (cal.dayyear[i - 1] == 365) CHECK(cal.dayyear[i] == 1);
            }
        }
        const auto feb29 = static_cast<std::size_t>(days_between(start, parse_date("2016-02-29")));
        CHECK(cal.dayyear[feb29] == 60);
        CHECK(cal.dayyear[feb29 - 1] == 59);
    }
    SECTION("Italian holidays include Easter Monday and fixed dates") {
        CHECK(easter_sunday(2016) == parse_date("2016-03-27"));
        CHECK(easter_sunday(2018) == parse_date("2018-04-01"));
        const auto h = italian_holidays(2016, 2016);
        CHECK(h.count(parse_date("2016-03-28")) == 1);
        CHECK(h.count(parse_date("2016-06-02")) == 1);
        CHECK(h.count(parse_date("2016-12-25")) == 1);
        CHECK(h.count(parse_date("2016-03-27")) == 0);
        CHECK(h.size() == 11);
    }
}

TEST_CASE("rolling variance", "[series-core]") {
    const Date d0 = parse_date("2015-01-01");
    SECTION("constant series is zero where defined") {
        const auto rv = rolling_variance(DailySeries(d0, std::vector<double>(40, 3.3)), 30);
        for (std::size_t i = 0; i < 29; ++i) CHECK(rv.missing(i));
        for (std::size_t i = 29; i < 40; ++i) CHECK(rv.value(i) == 0.0);
    }
    SECTION("pairwise sample variances") {
        const auto rv = rolling_variance(DailySeries(d0, {1.0, 2.0, 3.0, 4.0}), 2);
        CHECK(rv.missing(0));
        for (std::size_t i = 1; i < 4; ++i) CHECK_THAT(rv.value(i), WithinAbs(0.5, 1e-15));
    }
    SECTION("balanced two-point data") {
        std::vector<double> v(60);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = i % 2 ? 10.0 : 0.0;
        const auto rv = rolling_variance(DailySeries(d0, v), 30);
        for (std::size_t i = 29; i < v.size(); ++i) CHECK_THAT(rv.value(i), WithinAbs(25.862068965517242, 1e-12));
    }
    SECTION("errors") {
        CHECK_THROWS_AS(rolling_variance(DailySeries(d0, std::vector<double>(10, 1.0)), 30), std::invalid_argument);
        CHECK_THROWS_AS(rolling_variance(DailySeries(d0, std::vector<double>(10, 1.0)), 1), std::invalid_argument);
    }
    SECTION("windows with a missing day are missing") {
        std::vector<double> v{1.0, 2.0, kNaN, 4.0, 5.0, 6.0};
        std::vector<bool> m{false, false, true, false, false, false};
        const auto rv = rolling_variance(DailySeries(d0, v, m), 2);
        CHECK(rv.missing(2));
        CHECK(rv.missing(3));
        CHECK_THAT(rv.value(4), WithinAbs(0.5, 1e-15));
    }
    SECTION("non-negative and shift invariant") {
        const auto x = oracle::normal_draws(300, 11, 5.0);
        std::vector<double> shifted(x);
        for (auto& v : shifted) v += 1234.5;
        const auto a = rolling_variance(DailySeries(d0, x), 30);
        const auto b = rolling_variance(DailySeries(d0, shifted), 30);
        for (std::size_t i = 29; i < x.size(); ++i) {
            CHECK(a.value(i) >= 0.0);
            CHECK_THAT(b.value(i), WithinRel(a.value(i), 1e-9));
        }
    }
}

TEST_CASE("autocorrelation function", "[series-core]") {
    SECTION("rho(0) is one and values stay in [-1, 1]") {
        const auto x = oracle::normal_draws(500, 5);
        const auto r = acf(std::span<const double>(x), 30);
        CHECK(r[0] == 1.0);
        for (double v : r) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    }
    SECTION("white noise stays inside 4/sqrt(n) bands") {
        const auto x = oracle::normal_draws(2000, 21);
        const auto r = acf(std::span<const double>(x), 30);
        int inside = 0;
        for (std::size_t k = 1; k <= 30; ++k) inside += std::abs(r[k]) < 4.0 / std::sqrt(2000.0) ? 1 : 0;
        CHECK(inside >= 29);
    }
    SECTION("7-periodic series peaks at lags 7 and 14") {
        std::vector<double> x(700);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * double(i % 7) / 7.0) + 0.3 * double(i % 7 == 2);
        const auto r = acf(std::span<const double>(x), 20);
        for (std::size_t k : {7u, 14u}) {
            CHECK(r[k] > r[k - 1]);
            CHECK(r[k] > r[k + 1]);
        }
    }
    SECTION("matches the divisor-n definition") {
        const std::vector<double> x{1.0, 3.0, 2.0, 5.0, 4.0};
        const auto r = acf(std::span<const double>(x), 2);
        // mean 3; c0 = 10/5; c1 = (-2*0 + 0*-1 + -1*2 + 2*1)/5 = 0; c2 = (-2*-1 + 0*2 + -1*1)/5 = 0.2
        CHECK_THAT(r[1], WithinAbs(0.0, 1e-15));
        CHECK_THAT(r[2], WithinAbs(0.1, 1e-15));
    }
    SECTION("affine invariance") {
        const auto x = oracle::normal_draws(400, 8);
        std::vector<double> y(x);
        for (auto& v : y) v = 3.7 * v - 12.0;
        const auto rx = acf(std::span<const double>(x), 30);
        const auto ry = acf(std::span<const double>(y), 30);
        for (std::size_t k = 0; k <= 30; ++k) CHECK_THAT(ry[k], WithinAbs(rx[k], 1e-12));
    }
    SECTION("errors") {
        const std::vector<double> flat(50, 2.0);
        CHECK_THROWS_AS(acf(std::span<const double>(flat), 5), std::invalid_argument);
        const std::vector<double> shortv{1.0, 2.0, 3.0};
        CHECK_THROWS_AS(acf(std::span<const double>(shortv), 3), std::invalid_argument);
        const DailySeries gappy(parse_date("2015-01-01"), {1.0, kNaN, 2.0, 4.0}, {false, true, false, false});
        CHECK_THROWS_AS(acf(gappy, 1), std::invalid_argument);
    }
}

TEST_CASE("series alignment", "[series-core]") {
    const Date d0 = parse_date("2015-01-01");
    SECTION("identical complete ranges are unchanged") {
        const DailySeries a(d0, {1.0, 2.0, 3.0}), b(d0, {4.0, 5.0, 6.0});
        const auto p = align_series(a, b);
        CHECK(p.a == std::vector<double>{1.0, 2.0, 3.0});
        CHECK(p.b == std::vector<double>{4.0, 5.0, 6.0});
        CHECK(p.dates.front() == d0);
    }
    SECTION("a day missing in either series is dropped from both") {
        const DailySeries a(d0, {1.0, 2.0, 3.0});
        const DailySeries b(add_days(d0, 1), {5.0, kNaN, 7.0}, {false, true, false});
        const auto p = align_series(a, b);
        CHECK(p.a == std::vector<double>{2.0});
        CHECK(p.b == std::vector<double>{5.0});
    }
    SECTION("disjoint ranges are an error") {
        const DailySeries a(d0, {1.0, 2.0}), b(add_days(d0, 10), {1.0, 2.0});
        CHECK_THROWS_AS(align_series(a, b), std::invalid_argument);
    }
}

TEST_CASE("daily series bookkeeping", "[series-core]") {
    const Date d0 = parse_date("2015-01-01");
    CHECK_THROWS_AS(DailySeries(d0, std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(DailySeries(d0, {1.0, kNaN}), std::invalid_argument);
    const DailySeries s(d0, {1.0, kNaN, 3.0}, {false, true, false});
    CHECK(s.count_present() == 2);
    CHECK_FALSE(s.complete());
    CHECK(s.present_values() == std::vector<double>{1.0, 3.0});
    CHECK(s.index_of(add_days(d0, 2)) == 2u);
    CHECK_FALSE(s.index_of(add_days(d0, 3)));
    CHECK(s.between(add_days(d0, 1), add_days(d0, 9)).size() == 2);
    CHECK(s.end() == add_days(d0, 2));
}
