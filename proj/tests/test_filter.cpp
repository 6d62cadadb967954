#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vibroident/errors.hpp"
#include "vibroident/filter.hpp"
#include "vibroident/sine_fit.hpp"
#include "vibroident/types.hpp"

using namespace vibroident;

namespace {

TimeSeries tone(double f, double fs, double seconds, double phase = 0.0) {
    TimeSeries ts;
    ts.sample_rate = fs;
    auto n = static_cast<std::size_t>(seconds * fs);
    for (std::size_t i = 0; i < n; ++i) ts.values.push_back(std::sin(2 * kPi * f * i / fs + phase));
    return ts;
}

// Direct evaluation of b(z)/a(z) on the unit circle from the expanded polynomials.
std::complex<double> polynomial_response(const FilterCoefficients& c, double f) {
    std::complex<double> zinv = std::polar(1.0, -2 * kPi * f / c.design.fs), num = 0, den = 0, p = 1;
    for (std::size_t i = 0; i < c.b.size(); ++i, p *= zinv) num += c.b[i] * p;
    p = 1;
    for (std::size_t i = 0; i < c.a.size(); ++i, p *= zinv) den += c.a[i] * p;
    return num / den;
}

} // namespace

TEST(DesignBandpass, CornersAtMinus3dB) {
    auto c = design_bandpass(5, 1, 25, 200);
    EXPECT_NEAR(c.gain(1.0), std::pow(10.0, -3.0 / 20), 0.01);
    EXPECT_NEAR(c.gain(25.0), std::pow(10.0, -3.0 / 20), 0.01);
}

TEST(DesignBandpass, CentreGainNearUnity) {
    auto c = design_bandpass(5, 1, 25, 200);
    EXPECT_GE(c.gain(std::sqrt(25.0)), 0.999);
}

TEST(DesignBandpass, ZeroAtDcAndNyquist) {
    auto c = design_bandpass(5, 1, 25, 200);
    EXPECT_EQ(c.gain(0.0), 0.0);
    EXPECT_LT(c.gain(100.0), 1e-12);
}

TEST(DesignBandpass, SectionsAgreeWithExpandedPolynomials) {
    auto c = design_bandpass(4, 2, 30, 250);
    ASSERT_EQ(c.b.size(), 9u);
    ASSERT_EQ(c.a.size(), 9u);
    EXPECT_EQ(c.a[0], 1.0);
    for (double f : {0.5, 2.0, 7.0, 30.0, 80.0}) EXPECT_LT(std::abs(c.response(f) - polynomial_response(c, f)), 1e-7);  // direct form loses digits near the band edges
}

TEST(DesignBandpass, PolesInsideUnitCircle) {
    for (int n = 1; n <= 8; ++n)
        for (auto [lo, hi, fs] : {std::tuple{1.0, 25.0, 200.0}, std::tuple{0.2, 40.0, 100.0}, std::tuple{5.0, 6.0, 512.0}}) {
            auto c = design_bandpass(n, lo, hi, fs);
            for (auto p : c.poles()) EXPECT_LT(std::abs(p), 1.0) << "n=" << n << " band " << lo << "-" << hi;
        }
}

TEST(DesignBandpass, InvalidBandRejected) {
    EXPECT_THROW(design_bandpass(5, 25, 1, 200), DesignError);
    EXPECT_THROW(design_bandpass(5, 1, 120, 200), DesignError);
    EXPECT_THROW(design_bandpass(0, 1, 25, 200), DesignError);
}

TEST(Filtfilt, InBandToneGainAndPhase) {
    auto c = design_bandpass(5, 1, 25, 200);
    auto x = tone(10, 200, 20, 0.4);
    auto y = filtfilt(c, x);
    auto fy = fit_sine(extract_window(y, 5, 15), 10);
    auto fx = fit_sine(extract_window(x, 5, 15), 10);
    double g2 = std::pow(c.gain(10), 2);
    EXPECT_NEAR(fy.amplitude / fx.amplitude, g2, 0.01 * g2);
    EXPECT_LT(std::abs(std::remainder(fy.phase - fx.phase, 2 * kPi)) * 180 / kPi, 0.5);
}

TEST(Filtfilt, ConstantRemoved) {
    auto c = design_bandpass(5, 1, 25, 200);
    TimeSeries x;
    x.sample_rate = 200;
    x.values.assign(3000, 4.0);
    auto y = filtfilt(c, x);
    for (double v : y.values) EXPECT_LT(std::abs(v), 1e-6 * 4.0);
}

TEST(Filtfilt, FiftyHertzAttenuated) {
    auto c = design_bandpass(5, 1, 25, 200);
    EXPECT_LE(20 * std::log10(std::pow(c.gain(50), 2)), -60.0);
    auto y = filtfilt(c, tone(50, 200, 20));
    auto w = extract_window(y, 5, 15);
    double peak = 0;
    for (double v : w.values) peak = std::max(peak, std::abs(v));
    EXPECT_LE(peak, 1e-3);
}

TEST(Filtfilt, TimeReversalSymmetry) {
    auto c = design_bandpass(5, 1, 25, 200);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    TimeSeries x;
    x.sample_rate = 200;
    for (int i = 0; i < 1500; ++i) x.values.push_back(n(rng));
    TimeSeries xr = x;
    std::reverse(xr.values.begin(), xr.values.end());
    auto y = filtfilt(c, x), yr = filtfilt(c, xr);
    std::reverse(yr.values.begin(), yr.values.end());
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(y.values[i], yr.values[i], 1e-12);
}

TEST(Filtfilt, ShortSeriesRejected) {
    auto c = design_bandpass(5, 1, 25, 200);
    TimeSeries x;
    x.sample_rate = 200;
    x.values.assign(20, 1.0);
    EXPECT_THROW(filtfilt(c, x), FilterError);
}

TEST(Sosfilt, ImpulseResponseMatchesDifferenceEquation) {
    auto c = design_bandpass(2, 3, 20, 100);
    std::vector<double> x(64, 0.0);
    x[0] = 1.0;
    auto y = sosfilt(c.sos, x);
    // Direct form from the expanded polynomials.
    std::vector<double> ref(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double acc = 0;
        for (std::size_t k = 0; k < c.b.size() && k <= i; ++k) acc += c.b[k] * x[i - k];
        for (std::size_t k = 1; k < c.a.size() && k <= i; ++k) acc -= c.a[k] * ref[i - k];
        ref[i] = acc;
    }
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], ref[i], 1e-12);
}

TEST(FilterJson, ExportsCoefficients) {
    auto c = design_bandpass(5, 1, 25, 200);
    auto j = c.to_json();
    EXPECT_EQ(j["b"].size(), 11u);
    EXPECT_EQ(j["a"].size(), 11u);
    EXPECT_EQ(j["design"]["order"], 5);
}
