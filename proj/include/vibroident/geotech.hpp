#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vibroident {

inline constexpr double kAtmosphericPressureKpa = 101.325;

double vs_mayne(double fs_kpa);

struct AndrusOptions {
    double sf = 1.0;
    double a = 1.0;
    bool multiplicative = false;
};

double vs_andrus(double qt_kpa, double ic, double depth_m, const AndrusOptions& options = {});
double vs_robertson(double qt_kpa, double sigma_v_kpa, double ic);

struct CptSounding {
    std::vector<double> depth;    // m
    std::vector<double> qt;       // kPa
    std::vector<double> fs;       // kPa
    std::vector<double> sigma_v;  // kPa
    std::vector<double> ic;
    AndrusOptions andrus;

    void validate() const;
};

struct VsRow {
    double depth = 0.0;
    std::optional<double> mayne, andrus, robertson, average;
    bool gap = false;
};

std::vector<VsRow> vs_average(const CptSounding& sounding);

double bearing_capacity(double depth_m);

struct Footprint {
    double length = 0.0;        // m
    double width = 0.0;         // m
    double excluded_area = 0.0; // m^2
};

double bearing_utilization(double total_force_kn, const Footprint& footprint, double depth_m);

CptSounding parse_cpt_csv(std::istream& in);
void write_vs_csv(std::ostream& out, const std::vector<VsRow>& rows);

} // namespace vibroident
