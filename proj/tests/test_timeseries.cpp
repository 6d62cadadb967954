#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "vibroident/errors.hpp"
#include "vibroident/timeseries.hpp"
#include "vibroident/types.hpp"

using namespace vibroident;

namespace {

TimeSeries make_series(double rate, std::size_t n, double (*f)(double), double start = 0.0) {
    TimeSeries ts;
    ts.sample_rate = rate;
    ts.start_time = start;
    for (std::size_t i = 0; i < n; ++i) ts.values.push_back(f(start + i / rate));
    return ts;
}

TimeSeriesSet one(TimeSeries ts, const std::string& label) {
    ts.label = label;
    return TimeSeriesSet{{ts}};
}

} // namespace

TEST(ParseCsv, ThreeRowFile) {
    std::istringstream in("t,a\n0,0\n0.005,1\n0.01,0\n");
    auto set = parse_timeseries_csv(in);
    ASSERT_EQ(set.size(), 1u);
    const auto& a = set.at("a");
    EXPECT_DOUBLE_EQ(a.sample_rate, 200.0);
    EXPECT_EQ(a.values, (std::vector<double>{0, 1, 0}));
    EXPECT_DOUBLE_EQ(a.duration(), 0.01);
}

TEST(ParseCsv, AlternatingSpacingRejected) {
    std::ostringstream text;
    text << "t,a\n";
    double t = 0;
    for (int i = 0; i < 10; ++i) {
        text << t << "," << i << "\n";
        t += (i % 2 == 0) ? 0.005 : 0.006;
    }
    std::istringstream in(text.str());
    EXPECT_THROW(parse_timeseries_csv(in), SpacingError);
}

TEST(ParseCsv, RateAndDurationFrom1024Rows) {
    std::ostringstream text;
    text << "t,f\n";
    for (int i = 0; i < 1024; ++i) text << format_double(i / 512.0) << "," << i << "\n";
    std::istringstream in(text.str());
    auto set = parse_timeseries_csv(in);
    EXPECT_DOUBLE_EQ(set.at("f").sample_rate, 512.0);
    EXPECT_NEAR(set.at("f").duration(), 1023.0 / 512.0, 1e-12);
    EXPECT_NEAR(set.at("f").duration(), 1.998, 1e-3);
}

TEST(ParseCsv, NanRejected) {
    std::istringstream in("t,a\n0,0\n0.005,nan\n0.01,0\n");
    EXPECT_THROW(parse_timeseries_csv(in), ParseError);
}

TEST(ParseCsv, RoundTripIsBitExact) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    TimeSeriesSet set;
    for (const char* name : {"a", "b"}) {
        TimeSeries ts;
        ts.sample_rate = 200;
        ts.label = name;
        for (int i = 0; i < 500; ++i) ts.values.push_back(u(rng) * std::pow(10.0, i % 17 - 8));
        set.series.push_back(ts);
    }
    std::ostringstream out;
    write_timeseries_csv(out, set);
    std::istringstream in(out.str());
    auto back = parse_timeseries_csv(in);
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t k = 0; k < 2; ++k) {
        ASSERT_EQ(back.series[k].values.size(), set.series[k].values.size());
        for (std::size_t i = 0; i < set.series[k].size(); ++i)
            EXPECT_EQ(back.series[k].values[i], set.series[k].values[i]);
    }
    std::ostringstream again;
    write_timeseries_csv(again, back);
    EXPECT_EQ(again.str(), out.str());
}

TEST(Synchronize, IdentityWhenGridsMatch) {
    auto r = make_series(200, 600, [](double t) { return std::sin(3 * t); });
    auto rec = synchronize(one(r, "r"), one(r, "f"));
    ASSERT_EQ(rec.force.at("f").values.size(), r.values.size());
    for (std::size_t i = 0; i < r.size(); ++i) EXPECT_EQ(rec.force.at("f").values[i], r.values[i]);
    auto again = synchronize(rec.response, rec.force);
    EXPECT_EQ(again.force.at("f").values, rec.force.at("f").values);
    EXPECT_EQ(again.response.at("r").values, rec.response.at("r").values);
}

TEST(Synchronize, RampInterpolatesExactly) {
    auto f = make_series(512, 512 * 4, [](double t) { return t; });
    auto r = make_series(200, 700, [](double) { return 0.0; });
    auto rec = synchronize(one(r, "r"), one(f, "f"));
    const auto& out = rec.force.at("f");
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out.values[i], out.time_at(i), 1e-12);
}

TEST(Synchronize, SineInterpolationErrorWithinSecondDerivativeBound) {
    auto f = make_series(512, 512 * 4, [](double t) { return std::sin(2 * kPi * 5 * t); });
    auto r = make_series(200, 700, [](double) { return 0.0; });
    auto rec = synchronize(one(r, "r"), one(f, "f"));
    const auto& out = rec.force.at("f");
    double worst = 0;
    for (std::size_t i = 0; i < out.size(); ++i)
        worst = std::max(worst, std::abs(out.values[i] - std::sin(2 * kPi * 5 * out.time_at(i))));
    // Linear interpolation error bound h^2/8 * max|f''|.
    double h = 1.0 / 512, bound = h * h / 8 * std::pow(2 * kPi * 5, 2);
    EXPECT_LE(worst, bound * (1 + 1e-9));
    EXPECT_GE(worst, 0.95 * bound);  // grids drift through every phase, so the bound is nearly reached
}

TEST(Synchronize, ShortOverlapRejected) {
    auto f = make_series(512, 256, [](double) { return 1.0; });
    auto r = make_series(200, 100, [](double) { return 0.0; });
    EXPECT_THROW(synchronize(one(r, "r"), one(f, "f")), AlignmentError);
}

TEST(ExtractWindow, FullSpanIsIdentity) {
    auto s = make_series(200, 401, [](double t) { return t * t; }, 3.0);
    auto w = extract_window(s, s.start_time, s.end_time());
    EXPECT_EQ(w.values, s.values);
    EXPECT_EQ(w.start_time, s.start_time);
}

TEST(ExtractWindow, HalfOfConstantSeries) {
    auto s = make_series(200, 1001, [](double) { return 2.5; });
    auto w = extract_window(s, 0.0, 0.5 * s.duration());
    EXPECT_NEAR(static_cast<double>(w.size()), 0.5 * s.size(), 1.0);
    for (double v : w.values) EXPECT_EQ(v, 2.5);
}

TEST(ExtractWindow, StartPastEndRejected) {
    auto s = make_series(200, 100, [](double) { return 0.0; });
    EXPECT_THROW(extract_window(s, s.end_time() + 1.0, s.end_time() + 2.0), WindowError);
}

TEST(ExtractWindow, Idempotent) {
    auto s = make_series(200, 2000, [](double t) { return std::cos(t); }, 0.37);
    for (auto [a, b] : {std::pair{1.0, 4.0}, std::pair{0.3, 9.99}, std::pair{2.0025, 2.0125}}) {
        auto w1 = extract_window(s, a, b);
        auto w2 = extract_window(w1, a, b);
        EXPECT_EQ(w1.values, w2.values);
        EXPECT_EQ(w1.start_time, w2.start_time);
    }
}
