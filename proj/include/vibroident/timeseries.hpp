#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vibroident {

enum class Unit { MetersPerSecond2, KiloNewton, KiloNewtonMeter, Millimeter, Meter, None };

const char* to_string(Unit unit);
Unit unit_from_string(const std::string& s);

/// Uniformly sampled channel. Sample i sits at start_time + i / sample_rate.
struct TimeSeries {
    double start_time = 0.0;
    double sample_rate = 1.0;
    std::vector<double> values;
    Unit unit = Unit::None;
    std::string label;

    std::size_t size() const { return values.size(); }
    double duration() const;
    double end_time() const { return start_time + duration(); }
    double time_at(std::size_t i) const { return start_time + static_cast<double>(i) / sample_rate; }
};

/// Channels sharing a time grid.
struct TimeSeriesSet {
    std::vector<TimeSeries> series;

    const TimeSeries& at(const std::string& label) const;
    const TimeSeries* find(const std::string& label) const;
    std::size_t size() const { return series.size(); }
    bool empty() const { return series.empty(); }
};

struct CsvSchema {
    std::string time_column = "t";
    Unit default_unit = Unit::None;
    std::map<std::string, Unit> units;
    double spacing_tolerance = 1e-6;
};

TimeSeriesSet parse_timeseries_csv(std::istream& in, const CsvSchema& schema = {});
TimeSeriesSet parse_timeseries_csv_file(const std::string& path, const CsvSchema& schema = {});

/// Writes shortest round-trip decimal text. All series must share start_time, rate and length.
void write_timeseries_csv(std::ostream& out, const TimeSeriesSet& set);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

struct RecordMetadata {
    std::string test_id;
    std::string dof;
    std::string program;
};

struct AlignedRecord {
    TimeSeriesSet response;
    TimeSeriesSet force;
    RecordMetadata metadata;
};

/// Restricts both sets to their overlap and linearly interpolates force onto the response grid.
AlignedRecord synchronize(const TimeSeriesSet& response, const TimeSeriesSet& force,
                          RecordMetadata metadata = {});

/// Samples with timestamps in [t0, t1].
TimeSeries extract_window(const TimeSeries& ts, double t0, double t1);

} // namespace vibroident
