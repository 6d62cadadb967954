#include "vibroident/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "vibroident/errors.hpp"

namespace vibroident {

const char* to_string(Unit unit) {
    switch (unit) {
    case Unit::MetersPerSecond2: return "m/s2";
    case Unit::KiloNewton: return "kN";
    case Unit::KiloNewtonMeter: return "kN.m";
    case Unit::Millimeter: return "mm";
    case Unit::Meter: return "m";
    case Unit::None: return "";
    }
    return "";
}

Unit unit_from_string(const std::string& s) {
    if (s == "m/s2" || s == "m/s^2" || s == "m/s²") return Unit::MetersPerSecond2;
    if (s == "kN") return Unit::KiloNewton;
    if (s == "kN.m" || s == "kN·m" || s == "kNm") return Unit::KiloNewtonMeter;
    if (s == "mm") return Unit::Millimeter;
    if (s == "m") return Unit::Meter;
    if (s.empty() || s == "-") return Unit::None;
    throw ParseError("unknown unit '" + s + "'");
}

double TimeSeries::duration() const {
    if (values.empty()) return 0.0;
    return static_cast<double>(values.size() - 1) / sample_rate;
}

const TimeSeries* TimeSeriesSet::find(const std::string& label) const {
    for (const auto& s : series)
        if (s.label == label) return &s;
    return nullptr;
}

const TimeSeries& TimeSeriesSet::at(const std::string& label) const {
    const TimeSeries* s = find(label);
    if (!s) throw ParseError("missing channel '" + label + "'");
    return *s;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

void split(std::string_view line, std::vector<std::string_view>& cells) {
    cells.clear();
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(pos)));
            return;
        }
        cells.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
}

double parse_cell(std::string_view cell, std::size_t line_no, const std::string& column) {
    double v = 0.0;
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw ParseError("row " + std::to_string(line_no) + ", column '" + column + "': invalid value '" +
                         std::string(cell) + "'");
    return v;
}

double snap_rate(double rate) {
    double r = std::round(rate);
    if (r > 0 && std::abs(rate - r) <= 1e-9 * rate) return r;
    return rate;
}

} // namespace

TimeSeriesSet parse_timeseries_csv(std::istream& in, const CsvSchema& schema) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::string_view all(text);

    std::vector<std::string> header;
    std::size_t time_col = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> columns;
    std::vector<std::string_view> cells;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < all.size()) {
        std::size_t nl = all.find('\n', pos);
        std::string_view line = all.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? all.size() : nl + 1;
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        split(line, cells);
        if (header.empty()) {
            for (auto c : cells) header.emplace_back(c);
            auto it = std::find(header.begin(), header.end(), schema.time_column);
            if (it == header.end())
                throw ParseError("header has no time column '" + schema.time_column + "'");
            if (header.size() < 2) throw ParseError("header has no data column");
            time_col = static_cast<std::size_t>(it - header.begin());
            columns.resize(header.size());
            continue;
        }
        if (cells.size() != header.size())
            throw ParseError("row " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                             " cells, found " + std::to_string(cells.size()));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            double v = parse_cell(cells[c], line_no, header[c]);
            if (c == time_col)
                times.push_back(v);
            else
                columns[c].push_back(v);
        }
    }
    if (header.empty()) throw ParseError("empty input: no header row");
    if (times.size() < 2) throw ParseError("need at least 2 data rows, found " + std::to_string(times.size()));

    std::vector<double> dt(times.size() - 1);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        dt[i] = times[i + 1] - times[i];
        if (!(dt[i] > 0)) throw SpacingError("timestamps not increasing at row index " + std::to_string(i + 1));
    }
    std::vector<double> sorted = dt;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    double median = sorted[sorted.size() / 2];
    for (std::size_t i = 0; i < dt.size(); ++i)
        if (std::abs(dt[i] - median) > schema.spacing_tolerance * median)
            throw SpacingError("non-uniform spacing at row index " + std::to_string(i + 1) + ": dt=" +
                               format_double(dt[i]) + " vs median " + format_double(median));

    TimeSeriesSet set;
    double rate = snap_rate(1.0 / median);
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == time_col) continue;
        TimeSeries ts;
        ts.start_time = times.front();
        ts.sample_rate = rate;
        ts.values = std::move(columns[c]);
        ts.label = header[c];
        auto u = schema.units.find(header[c]);
        ts.unit = u != schema.units.end() ? u->second : schema.default_unit;
        set.series.push_back(std::move(ts));
    }
    return set;
}

TimeSeriesSet parse_timeseries_csv_file(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return parse_timeseries_csv(in, schema);
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_timeseries_csv(std::ostream& out, const TimeSeriesSet& set) {
    if (set.empty()) throw IoError("nothing to write");
    const TimeSeries& ref = set.series.front();
    for (const auto& s : set.series)
        if (s.size() != ref.size() || s.sample_rate != ref.sample_rate || s.start_time != ref.start_time)
            throw IoError("channel '" + s.label + "' does not share the time grid");
    std::string buf = "t";
    for (const auto& s : set.series) {
        buf += ',';
        buf += s.label;
    }
    buf += '\n';
    char num[64];
    for (std::size_t i = 0; i < ref.size(); ++i) {
        auto r = std::to_chars(num, num + sizeof num, ref.time_at(i));
        buf.append(num, r.ptr);
        for (const auto& s : set.series) {
            buf += ',';
            r = std::to_chars(num, num + sizeof num, s.values[i]);
            buf.append(num, r.ptr);
        }
        buf += '\n';
        if (buf.size() > (1u << 20)) {
            out << buf;
            buf.clear();
        }
    }
    out << buf;
}

namespace {

// Index position of time t on a series grid, snapped to integers within 1e-9.
double grid_position(const TimeSeries& ts, double t) {
    double p = (t - ts.start_time) * ts.sample_rate;
    double r = std::round(p);
    return std::abs(p - r) <= 1e-9 ? r : p;
}

} // namespace

AlignedRecord synchronize(const TimeSeriesSet& response, const TimeSeriesSet& force, RecordMetadata metadata) {
    if (response.empty() || force.empty()) throw AlignmentError("synchronize needs non-empty response and force sets");
    const TimeSeries& r0 = response.series.front();
    const TimeSeries& f0 = force.series.front();
    for (const auto& s : response.series)
        if (s.start_time != r0.start_time || s.sample_rate != r0.sample_rate || s.size() != r0.size())
            throw AlignmentError("response channel '" + s.label + "' is off the common grid");
    for (const auto& s : force.series)
        if (s.start_time != f0.start_time || s.sample_rate != f0.sample_rate || s.size() != f0.size())
            throw AlignmentError("force channel '" + s.label + "' is off the common grid");

    double lo = std::max(r0.start_time, f0.start_time);
    double hi = std::min(r0.end_time(), f0.end_time());
    if (!(hi - lo > 1.0))
        throw AlignmentError("response/force overlap is " + format_double(std::max(0.0, hi - lo)) +
                             " s; need more than 1 s");

    double p0 = grid_position(r0, lo);
    double p1 = grid_position(r0, hi);
    auto i0 = static_cast<std::size_t>(std::ceil(p0));
    auto i1 = static_cast<std::size_t>(std::floor(p1));
    i1 = std::min(i1, r0.size() - 1);

    AlignedRecord rec;
    rec.metadata = std::move(metadata);
    for (const auto& s : response.series) {
        TimeSeries out = s;
        out.values.assign(s.values.begin() + static_cast<std::ptrdiff_t>(i0),
                          s.values.begin() + static_cast<std::ptrdiff_t>(i1) + 1);
        out.start_time = s.time_at(i0);
        rec.response.series.push_back(std::move(out));
    }
    const TimeSeries& grid = rec.response.series.front();
    for (const auto& s : force.series) {
        TimeSeries out;
        out.start_time = grid.start_time;
        out.sample_rate = grid.sample_rate;
        out.unit = s.unit;
        out.label = s.label;
        out.values.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double p = grid_position(s, grid.time_at(i));
            p = std::clamp(p, 0.0, static_cast<double>(s.size() - 1));
            auto k = static_cast<std::size_t>(std::floor(p));
            double frac = p - static_cast<double>(k);
            if (frac == 0.0 || k + 1 >= s.size())
                out.values[i] = s.values[k];
            else
                out.values[i] = s.values[k] + frac * (s.values[k + 1] - s.values[k]);
        }
        rec.force.series.push_back(std::move(out));
    }
    return rec;
}

TimeSeries extract_window(const TimeSeries& ts, double t0, double t1) {
    if (ts.values.empty()) throw WindowError("empty series '" + ts.label + "'");
    if (!(t0 < t1)) throw WindowError("window start must precede end");
    double p0 = grid_position(ts, t0);
    double p1 = grid_position(ts, t1);
    double last = static_cast<double>(ts.size() - 1);
    if (p0 > last || p1 < 0.0)
        throw WindowError("window [" + format_double(t0) + ", " + format_double(t1) + "] outside series '" +
                          ts.label + "'");
    auto i0 = static_cast<std::size_t>(std::max(0.0, std::ceil(p0)));
    auto i1 = static_cast<std::size_t>(std::min(last, std::floor(p1)));
    if (i1 < i0) throw WindowError("window selects no samples of '" + ts.label + "'");
    TimeSeries out = ts;
    out.values.assign(ts.values.begin() + static_cast<std::ptrdiff_t>(i0),
                      ts.values.begin() + static_cast<std::ptrdiff_t>(i1) + 1);
    out.start_time = ts.time_at(i0);
    return out;
}

} // namespace vibroident
