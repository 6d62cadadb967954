#pragma once

#include <string>
#include <vector>

namespace vibroident {

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

std::string line_plot_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                          const std::vector<PlotSeries>& series);

/// Undeformed point with measured and rigid-predicted in-plane displacements (same units as the plane).
struct DeformationPoint {
    std::string id;
    double x = 0, y = 0;
    double mx = 0, my = 0;  // measured
    double rx = 0, ry = 0;  // rigid prediction
};

std::string deformation_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                            const std::vector<DeformationPoint>& points, double magnification);

} // namespace vibroident
