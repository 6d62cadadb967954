#pragma once

#include <cstdint>
#include <string>

#include "vibroident/excitation.hpp"
#include "vibroident/integrator.hpp"
#include "vibroident/layout.hpp"
#include "vibroident/timeseries.hpp"

namespace vibroident {

struct NoiseModel {
    double rms = 0.0;             // white noise, channel units
    std::uint64_t seed = 0;
    /// Additive harmonic at `harmonic_order` times the drive frequency while forcing is active.
    double harmonic_amplitude = 0.0;
    int harmonic_order = 2;
    /// Slow additive wave (force channels), e.g. platform drift.
    double low_freq_amplitude = 0.0;
    double low_freq_hz = 0.0;
};

/// Station accelerations a_i = a0 + th'' x r_i projected on each station axis.
TimeSeriesSet sensor_kinematics(const StateHistory& history, const SensorLayout& layout, const NoiseModel& noise = {});

/// Actuator force channels in kN sampled at `rate` directly from the program.
TimeSeriesSet force_channels(const ExcitationProgram& program, double rate, double duration,
                             const NoiseModel& noise = {});

/// Adds deterministic white noise per channel index.
void add_noise(TimeSeries& ts, double rms, std::uint64_t seed, std::uint64_t stream);

} // namespace vibroident
