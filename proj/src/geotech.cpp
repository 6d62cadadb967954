#include "vibroident/geotech.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "vibroident/errors.hpp"
#include "vibroident/timeseries.hpp"

namespace vibroident {

double vs_mayne(double fs_kpa) {
    if (!(fs_kpa > 0)) throw DomainError("vs_mayne needs fs > 0");
    return 118.8 * std::log10(fs_kpa) + 18.5;
}

double vs_andrus(double qt_kpa, double ic, double depth_m, const AndrusOptions& o) {
    if (!(qt_kpa > 0) || !(ic > 0) || !(depth_m > 0)) throw DomainError("vs_andrus needs qt, Ic, D > 0");
    double age = std::pow(o.sf, o.a);
    if (o.multiplicative)
        return 2.62 * std::pow(qt_kpa, 0.395) * std::pow(ic, 0.912) * std::pow(depth_m, 0.124) * age;
    return 2.62 * std::pow(qt_kpa, 0.395) + std::pow(ic, 0.912) * std::pow(depth_m, 0.124) * age;
}

double vs_robertson(double qt_kpa, double sigma_v_kpa, double ic) {
    if (!(qt_kpa > sigma_v_kpa)) throw DomainError("vs_robertson needs qt > sigma_v");
    return std::sqrt(std::pow(10.0, 0.55 * ic + 1.68) * (qt_kpa - sigma_v_kpa) / kAtmosphericPressureKpa);
}

void CptSounding::validate() const {
    std::size_t n = depth.size();
    if (qt.size() != n || fs.size() != n || sigma_v.size() != n || ic.size() != n)
        throw ParseError("CPT columns have different lengths");
    for (std::size_t i = 1; i < n; ++i)
        if (!(depth[i] > depth[i - 1])) throw DomainError("CPT depths must be strictly increasing");
}

std::vector<VsRow> vs_average(const CptSounding& s) {
    s.validate();
    std::vector<VsRow> rows;
    for (std::size_t i = 0; i < s.depth.size(); ++i) {
        VsRow r;
        r.depth = s.depth[i];
        auto attempt = [&](auto&& f) -> std::optional<double> {
            try {
                return f();
            } catch (const DomainError&) {
                return std::nullopt;
            }
        };
        r.mayne = attempt([&] { return vs_mayne(s.fs[i]); });
        r.andrus = attempt([&] { return vs_andrus(s.qt[i], s.ic[i], s.depth[i], s.andrus); });
        r.robertson = attempt([&] { return vs_robertson(s.qt[i], s.sigma_v[i], s.ic[i]); });
        if (r.mayne && r.andrus && r.robertson)
            r.average = (*r.mayne + *r.andrus + *r.robertson) / 3.0;
        else
            r.gap = true;
        rows.push_back(r);
    }
    return rows;
}

double bearing_capacity(double depth_m) {
    if (!(depth_m >= 0)) throw DomainError("bearing_capacity needs depth >= 0");
    return std::min(191.0 + 157.0 * depth_m, 479.0);
}

double bearing_utilization(double total_force_kn, const Footprint& fp, double depth_m) {
    double area = fp.length * fp.width - fp.excluded_area;
    if (!(area > 0)) throw GeometryError("footprint net area must be positive");
    return 100.0 * (total_force_kn / area) / bearing_capacity(depth_m);
}

CptSounding parse_cpt_csv(std::istream& in) {
    CptSounding s;
    std::string line;
    std::size_t line_no = 0;
    int col[5] = {-1, -1, -1, -1, -1};
    const char* names[5] = {"depth_m", "qt_kpa", "fs_kpa", "sigma_v_kpa", "ic"};
    bool header = false;
    std::size_t ncols = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            auto b = cell.find_first_not_of(" \t");
            auto e = cell.find_last_not_of(" \t");
            cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
        }
        if (!header) {
            for (std::size_t c = 0; c < cells.size(); ++c)
                for (int k = 0; k < 5; ++k)
                    if (cells[c] == names[k]) col[k] = static_cast<int>(c);
            for (int k = 0; k < 5; ++k)
                if (col[k] < 0) throw ParseError(std::string("CPT CSV missing column '") + names[k] + "'");
            ncols = cells.size();
            header = true;
            continue;
        }
        if (cells.size() != ncols) throw ParseError("CPT CSV row " + std::to_string(line_no) + ": wrong cell count");
        double v[5];
        for (int k = 0; k < 5; ++k) {
            const std::string& c = cells[static_cast<std::size_t>(col[k])];
            std::size_t used = 0;
            try {
                v[k] = std::stod(c, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (c.empty() || used != c.size() || !std::isfinite(v[k]))
                throw ParseError("CPT CSV row " + std::to_string(line_no) + ", column '" + names[k] + "': invalid value");
        }
        s.depth.push_back(v[0]);
        s.qt.push_back(v[1]);
        s.fs.push_back(v[2]);
        s.sigma_v.push_back(v[3]);
        s.ic.push_back(v[4]);
    }
    if (!header) throw ParseError("CPT CSV: empty input");
    s.validate();
    return s;
}

void write_vs_csv(std::ostream& out, const std::vector<VsRow>& rows) {
    out << "depth_m,vs_mayne,vs_andrus,vs_robertson,vs_avg,gap_flag\n";
    auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto& r : rows)
        out << format_double(r.depth) << ',' << cell(r.mayne) << ',' << cell(r.andrus) << ',' << cell(r.robertson)
            << ',' << cell(r.average) << ',' << (r.gap ? 1 : 0) << '\n';
}

} // namespace vibroident
