#pragma once

#include <array>
#include <complex>
#include <vector>

#include <nlohmann/json.hpp>

#include "vibroident/timeseries.hpp"

namespace vibroident {

/// Biquad with a0 = 1.
struct Sos {
    double b0 = 0, b1 = 0, b2 = 0, a1 = 0, a2 = 0;
};

struct FilterDesign {
    int order = 0;
    double f_low = 0, f_high = 0, fs = 0;
};

struct FilterCoefficients {
    std::vector<double> b;  // expanded, length 2n+1
    std::vector<double> a;  // expanded, a[0] = 1
    std::vector<Sos> sos;
    FilterDesign design;

    std::complex<double> response(double f) const;
    double gain(double f) const { return std::abs(response(f)); }
    std::vector<std::complex<double>> poles() const;
    nlohmann::json to_json() const;
};

/// Butterworth band-pass via prototype -> band-pass -> prewarped bilinear transform.
FilterCoefficients design_bandpass(int order, double f_low, double f_high, double fs);

/// Causal cascade filtering with optional per-section initial state.
std::vector<double> sosfilt(const std::vector<Sos>& sos, const std::vector<double>& x,
                            const std::vector<std::array<double, 2>>* zi = nullptr);

/// Zero-phase filtering with odd padding of length 3(2n+1).
TimeSeries filtfilt(const FilterCoefficients& coeffs, const TimeSeries& ts);

} // namespace vibroident
