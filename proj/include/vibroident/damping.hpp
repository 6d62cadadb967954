#pragma once

#include <string>
#include <vector>

#include "vibroident/frc.hpp"

namespace vibroident {

/// Dynamic amplification of a viscously damped SDOF oscillator.
double rd_curve(double xi, double r);

struct XiGrid {
    double start = 0.05;
    double stop = 0.95;
    double step = 0.025;

    std::vector<double> values() const;
};

struct DampingOptions {
    XiGrid grid;
    double r_min = 0.3;
    double r_max = 1.5;
    std::string axis;              // empty: excited axis of the FRC
    std::vector<std::string> ids;  // empty: every station curve
};

struct StationDamping {
    std::string id;
    double xi = 0.0;
    bool boundary = false;
    double static_amplitude = 0.0;  // mm
};

struct DampingEstimate {
    double xi_lo = 0.0;
    double xi_hi = 0.0;
    double fn = 0.0;
    std::vector<StationDamping> stations;
    double normalization_freqs[2] = {0.0, 0.0};
};

/// Mean of the two lowest-frequency amplitudes; throws NormalizationError unless both lie below 0.5 fn.
double static_amplitude(const std::vector<CurvePoint>& curve, double fn_hint, double* f_used = nullptr);

/// Grid value of xi whose rd_curve is closest (L2) to the normalized curve over r in [r_min, r_max].
StationDamping fit_damping_curve(const std::vector<CurvePoint>& curve, double fn_hint, const DampingOptions& options);

DampingEstimate estimate_damping(const FrequencyResponseCurve& frc, double fn_hint, const DampingOptions& options = {});

/// Peak scaled amplitude over the low-frequency normalization amplitude.
double amplification_factor(const std::vector<CurvePoint>& curve, double fn_hint);
double amplification_factor(const FrequencyResponseCurve& frc, const std::string& id, const std::string& axis,
                            double fn_hint);

} // namespace vibroident
