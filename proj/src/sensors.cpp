#include "vibroident/sensors.hpp"

#include <cmath>
#include <random>

#include "vibroident/errors.hpp"

namespace vibroident {

void add_noise(TimeSeries& ts, double rms, std::uint64_t seed, std::uint64_t stream) {
    if (rms <= 0) return;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> nd(0.0, rms);
    for (auto& v : ts.values) v += nd(rng);
}

TimeSeriesSet sensor_kinematics(const StateHistory& history, const SensorLayout& layout, const NoiseModel& noise) {
    double max_theta = 0.0;
    for (const auto& u : history.u) max_theta = std::max(max_theta, u.tail<3>().cwiseAbs().maxCoeff());
    if (!(max_theta < 1e-3))
        throw DomainError("rotation " + std::to_string(max_theta) + " rad outside the small-rotation regime");

    TimeSeriesSet set;
    std::uint64_t stream = 0;
    for (const auto& st : layout.stations) {
        for (int k = 0; k < 3; ++k) {
            TimeSeries ts;
            ts.start_time = 0.0;
            ts.sample_rate = history.sample_rate();
            ts.unit = Unit::MetersPerSecond2;
            ts.label = SensorLayout::channel(st.id, k);
            ts.values.resize(history.size());
            // axis . (a0 + th x r) = axis . a0 + (r x axis) . th
            Vec3 lever = st.position.cross(st.axes[k]);
            for (std::size_t i = 0; i < history.size(); ++i) {
                const Vec6& a = history.a[i];
                ts.values[i] = st.axes[k].dot(a.head<3>()) + lever.dot(a.tail<3>());
            }
            if (noise.harmonic_amplitude != 0.0)
                for (std::size_t i = 0; i < history.size(); ++i) {
                    const Drive& d = history.drive[i];
                    if (d.active) ts.values[i] += noise.harmonic_amplitude * std::sin(noise.harmonic_order * d.phase);
                }
            add_noise(ts, noise.rms, noise.seed, stream++);
            set.series.push_back(std::move(ts));
        }
    }
    return set;
}

TimeSeriesSet force_channels(const ExcitationProgram& program, double rate, double duration,
                             const NoiseModel& noise) {
    auto n = static_cast<std::size_t>(std::floor(duration * rate + 1e-9)) + 1;
    TimeSeriesSet set;
    for (std::size_t k = 0; k < program.force_points.size(); ++k) {
        TimeSeries ts;
        ts.start_time = 0.0;
        ts.sample_rate = rate;
        ts.unit = Unit::KiloNewton;
        ts.label = program.force_points[k].id;
        ts.values.resize(n);
        set.series.push_back(std::move(ts));
    }
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) / rate;
        Drive d = program.drive(t);
        for (std::size_t k = 0; k < program.force_points.size(); ++k) {
            double v = program.point_force(k, d) * 1e-3;
            if (noise.low_freq_amplitude != 0.0)
                v += noise.low_freq_amplitude * std::sin(2.0 * kPi * noise.low_freq_hz * t);
            set.series[k].values[i] = v;
        }
    }
    for (std::size_t k = 0; k < set.series.size(); ++k) add_noise(set.series[k], noise.rms, noise.seed, 1000003 + k);
    return set;
}

} // namespace vibroident
