#include "vibroident/damping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vibroident/errors.hpp"

namespace vibroident {

double rd_curve(double xi, double r) {
    if (!(xi >= 0 && xi < 1)) throw DomainError("rd_curve needs 0 <= xi < 1");
    if (!(r >= 0)) throw DomainError("rd_curve needs r >= 0");
    double a = 1.0 - r * r;
    double b = 2.0 * xi * r;
    double d = a * a + b * b;
    if (d == 0.0) throw InfinityError("undamped response at resonance is unbounded");
    return 1.0 / std::sqrt(d);
}

std::vector<double> XiGrid::values() const {
    if (!(step > 0) || !(stop >= start)) throw ConfigError("invalid xi grid");
    std::vector<double> v;
    for (int k = 0;; ++k) {
        double x = start + k * step;
        if (x > stop + 1e-9 * step) break;
        v.push_back(x);
    }
    return v;
}

double static_amplitude(const std::vector<CurvePoint>& curve, double fn_hint, double* f_used) {
    if (curve.size() < 2 || !(curve[1].f < 0.5 * fn_hint))
        throw NormalizationError("need two points below " + std::to_string(0.5 * fn_hint) + " Hz for normalization");
    if (f_used) {
        f_used[0] = curve[0].f;
        f_used[1] = curve[1].f;
    }
    double s = 0.5 * (curve[0].u + curve[1].u);
    if (!(s > 0)) throw NormalizationError("non-positive low-frequency amplitude");
    return s;
}

StationDamping fit_damping_curve(const std::vector<CurvePoint>& curve, double fn_hint, const DampingOptions& options) {
    StationDamping out;
    out.static_amplitude = static_amplitude(curve, fn_hint);
    auto grid = options.grid.values();
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    bool any = false;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double sse = 0.0;
        for (const auto& p : curve) {
            double r = p.f / fn_hint;
            if (r < options.r_min || r > options.r_max) continue;
            double e = p.u / out.static_amplitude - rd_curve(grid[k], r);
            sse += e * e;
            any = true;
        }
        if (sse < best) {
            best = sse;
            best_k = k;
        }
    }
    if (!any) throw NormalizationError("no points in the damping fit range");
    out.xi = grid[best_k];
    out.boundary = best_k == 0 || best_k + 1 == grid.size();
    return out;
}

DampingEstimate estimate_damping(const FrequencyResponseCurve& frc, double fn_hint, const DampingOptions& options) {
    if (!(fn_hint > 0)) throw DomainError("fn_hint must be positive");
    std::string axis = options.axis.empty() ? excited_axis(frc.dof) : options.axis;
    std::vector<std::string> ids = options.ids.empty() ? frc.ids(CurveKind::Station) : options.ids;
    if (ids.empty()) throw NormalizationError("no station curves to estimate damping from");
    DampingEstimate est;
    est.fn = fn_hint;
    est.xi_lo = 1.0;
    est.xi_hi = 0.0;
    for (const auto& id : ids) {
        auto curve = frc.curve(id, axis);
        try {
            StationDamping sd = fit_damping_curve(curve, fn_hint, options);
            sd.id = id;
            static_amplitude(curve, fn_hint, est.normalization_freqs);
            est.xi_lo = std::min(est.xi_lo, sd.xi);
            est.xi_hi = std::max(est.xi_hi, sd.xi);
            est.stations.push_back(sd);
        } catch (const NormalizationError& e) {
            throw NormalizationError("curve '" + id + "." + axis + "': " + e.what());
        }
    }
    return est;
}

double amplification_factor(const std::vector<CurvePoint>& curve, double fn_hint) {
    double s = static_amplitude(curve, fn_hint);
    double peak = 0.0;
    for (const auto& p : curve) peak = std::max(peak, p.u);
    return peak / s;
}

double amplification_factor(const FrequencyResponseCurve& frc, const std::string& id, const std::string& axis,
                            double fn_hint) {
    return amplification_factor(frc.curve(id, axis), fn_hint);
}

} // namespace vibroident
