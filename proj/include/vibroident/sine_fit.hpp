#pragma once

#include <string>

#include "vibroident/errors.hpp"
#include "vibroident/timeseries.hpp"

namespace vibroident {

/// u(t) = amplitude * sin(omega * (t - t0) + phase), phase referenced to the window start t0.
struct SineFit {
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;
    double residual_rms = 0.0;
    double t0 = 0.0;
    double t1 = 0.0;
    int iterations = 0;

    double frequency() const;
};

class FitError : public Error {
public:
    FitError(const std::string& what, SineFit best)
        : Error(ErrorKind::Numeric, "FitError", what), best_(best) {}
    const SineFit& best() const { return best_; }

private:
    SineFit best_;
};

/// Linear fit at 2 pi f_init, golden-section refinement of omega within +-10%, Gauss-Newton polish.
SineFit fit_sine(const TimeSeries& ts, double f_init);

/// Least-squares amplitude/phase at a fixed angular frequency.
SineFit fit_sine_fixed(const TimeSeries& ts, double omega);

struct WindowPolicy {
    double skip_cycles = 10.0;
    double max_len = 40.0;  // s
};

struct Window {
    double t0 = 0.0;
    double t1 = 0.0;
};

Window extract_steady_window(const TimeSeries& ts, double f_force, const WindowPolicy& policy = {});

struct LowFreqResult {
    TimeSeries series;
    bool subtracted = false;
    double frequency = 0.0;  // Hz of the removed component
    SineFit fit;
};

/// Removes the dominant spectral component below f_cut when it stands 3x above the noise floor.
LowFreqResult subtract_low_freq(const TimeSeries& ts, double f_cut);

} // namespace vibroident
