#include "vibroident/frc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "vibroident/errors.hpp"

namespace vibroident {

double displacement_amplitude(const SineFit& fit) {
    if (!(fit.omega > 1e-9)) throw DomainError("displacement_amplitude needs omega > 0");
    return fit.amplitude / (fit.omega * fit.omega);
}

ForceAmplitude estimate_force_amplitude(const TimeSeriesSet& channels, const std::vector<ForceGeometry>& geometry,
                                        double f, double low_freq_cut) {
    if (geometry.empty()) throw ForceEstimationError("no force channels described");
    ForceAmplitude out;
    for (const auto& g : geometry) {
        const TimeSeries* ts = channels.find(g.id);
        if (!ts) throw ForceEstimationError("force channel '" + g.id + "' missing");
        SineFit fit;
        try {
            if (low_freq_cut > 0) {
                auto lf = subtract_low_freq(*ts, low_freq_cut);
                fit = fit_sine(lf.series, f);
            } else {
                fit = fit_sine(*ts, f);
            }
        } catch (const Error& e) {
            throw ForceEstimationError("force channel '" + g.id + "' at " + format_double(f) + " Hz: " + e.what());
        }
        std::complex<double> p = std::polar(fit.amplitude, fit.phase);
        CVec3 dir = g.direction.cast<std::complex<double>>();
        out.resultant_phasor += p * dir;
        Vec3 lever = g.location.cross(g.direction);
        out.torque_phasor += p * lever.z();
        out.fits.push_back(fit);
    }
    out.resultant = out.resultant_phasor.norm();
    out.torque = std::abs(out.torque_phasor);
    out.components = out.resultant_phasor.cwiseAbs();
    return out;
}

std::vector<CurvePoint> FrequencyResponseCurve::curve(const std::string& id, const std::string& axis) const {
    std::vector<CurvePoint> out;
    for (const auto& p : points)
        if (p.id == id && p.axis == axis) out.push_back({p.f, p.u_scaled_mm});
    std::sort(out.begin(), out.end(), [](const CurvePoint& a, const CurvePoint& b) { return a.f < b.f; });
    return out;
}

std::vector<std::string> FrequencyResponseCurve::ids(CurveKind kind) const {
    std::vector<std::string> out;
    for (const auto& p : points)
        if (p.kind == kind && std::find(out.begin(), out.end(), p.id) == out.end()) out.push_back(p.id);
    return out;
}

FrequencyResponseCurve build_frc(const std::vector<StationAmplitudes>& amplitudes,
                                 const std::vector<ForceAtFrequency>& forces, const SensorLayout& layout, Dof dof,
                                 const BuildOptions& options, const std::vector<RigidMotion>* rigid) {
    if (!(options.F_ref > 0)) throw BuildError("F_ref must be positive");
    FrequencyResponseCurve frc;
    frc.dof = dof;
    auto same = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
    for (std::size_t i = 1; i < amplitudes.size(); ++i)
        if (!(amplitudes[i].f > amplitudes[i - 1].f)) throw BuildError("frequencies must be strictly increasing");

    for (const auto& amp : amplitudes) {
        auto fit = std::find_if(forces.begin(), forces.end(), [&](const ForceAtFrequency& x) { return same(x.f, amp.f); });
        if (fit == forces.end()) throw BuildError("no force amplitude at " + format_double(amp.f) + " Hz");
        double Fm = fit->F_measured;
        if (!(Fm > 0)) throw BuildError("non-positive force amplitude at " + format_double(amp.f) + " Hz");
        double s = options.F_ref / Fm;

        for (const auto& st : layout.stations) {
            auto it = amp.amplitude_m.find(st.id);
            if (it == amp.amplitude_m.end()) continue;
            for (int k = 0; k < 3; ++k)
                frc.points.push_back({amp.f, st.id, kAxisNames[k], CurveKind::Station, it->second(k) * 1e3 * s, Fm,
                                      options.F_ref});
        }
        for (const auto& [name, members] : layout.groups) {
            Vec3 sum = Vec3::Zero();
            int n = 0;
            for (const auto& m : members) {
                auto it = amp.amplitude_m.find(m);
                if (it == amp.amplitude_m.end()) continue;
                sum += it->second;
                ++n;
            }
            if (n == 0) continue;
            for (int k = 0; k < 3; ++k)
                frc.points.push_back({amp.f, name, kAxisNames[k], CurveKind::Group, sum(k) / n * 1e3 * s, Fm,
                                      options.F_ref});
        }
        if (rigid) {
            auto rit = std::find_if(rigid->begin(), rigid->end(), [&](const RigidMotion& r) { return same(r.frequency, amp.f); });
            if (rit == rigid->end()) throw BuildError("no rigid motion at " + format_double(amp.f) + " Hz");
            for (int j = 0; j < 6; ++j) {
                double mag = std::abs(rit->delta0(j)) * (j >= 3 ? options.rotation_arm : 1.0);
                frc.points.push_back({amp.f, kRigidCurveId, kDofNames[j], CurveKind::Rigid, mag * 1e3 * s, Fm,
                                      options.F_ref});
            }
        }
    }
    return frc;
}

NaturalFrequency natural_frequency(const FrequencyResponseCurve& frc, const std::string& id, const std::string& axis) {
    auto c = frc.curve(id, axis);
    if (c.empty()) throw BuildError("no curve '" + id + "." + axis + "'");
    std::vector<double> u;
    for (const auto& p : c) u.push_back(p.u);
    auto imax = static_cast<std::size_t>(std::max_element(u.begin(), u.end()) - u.begin());
    NaturalFrequency nf{c[imax].f, c[imax].u, false};
    if (u.size() > 1) {
        std::vector<double> s = u;
        std::sort(s.begin(), s.end(), std::greater<>());
        nf.flat = s[0] > 0 && (s[0] - s[1]) / s[0] < 0.05;
    }
    return nf;
}

double linearity_rms(const FrequencyResponseCurve& a, const FrequencyResponseCurve& b, double exclude_below,
                     const LinearitySelection& sel) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& pa : a.points) {
        if (!(pa.f > exclude_below)) continue;
        if (sel.id && pa.id != *sel.id) continue;
        if (sel.axis && pa.axis != *sel.axis) continue;
        for (const auto& pb : b.points) {
            if (pb.id != pa.id || pb.axis != pa.axis) continue;
            if (std::abs(pb.f - pa.f) > 1e-9 * pa.f) continue;
            double d = pa.u_scaled_mm - pb.u_scaled_mm;
            sum += d * d;
            ++n;
            break;
        }
    }
    if (n == 0) throw ComparisonError("curves share no points above " + format_double(exclude_below) + " Hz");
    return std::sqrt(sum / static_cast<double>(n));
}

void write_frc_csv(std::ostream& out, const FrequencyResponseCurve& frc) {
    out << "f_hz,station,axis,u_scaled_mm,F_measured,F_ref\n";
    for (const auto& p : frc.points)
        out << format_double(p.f) << ',' << p.id << ',' << p.axis << ',' << format_double(p.u_scaled_mm) << ','
            << format_double(p.F_measured) << ',' << format_double(p.F_ref) << '\n';
}

FrequencyResponseCurve parse_frc_csv(std::istream& in) {
    FrequencyResponseCurve frc;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!header) {
            if (cells.size() != 6 || cells[0] != "f_hz") throw ParseError("FRC CSV: unexpected header '" + line + "'");
            header = true;
            continue;
        }
        if (cells.size() != 6) throw ParseError("FRC CSV row " + std::to_string(line_no) + ": expected 6 cells");
        FrcPoint p;
        try {
            std::size_t used = 0;
            auto num = [&](const std::string& s) {
                double v = std::stod(s, &used);
                if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
                return v;
            };
            p.f = num(cells[0]);
            p.id = cells[1];
            p.axis = cells[2];
            p.u_scaled_mm = num(cells[3]);
            p.F_measured = num(cells[4]);
            p.F_ref = num(cells[5]);
        } catch (const std::exception&) {
            throw ParseError("FRC CSV row " + std::to_string(line_no) + ": invalid number");
        }
        p.kind = p.id == kRigidCurveId ? CurveKind::Rigid : CurveKind::Station;
        frc.points.push_back(p);
    }
    if (!header) throw ParseError("FRC CSV: empty input");
    return frc;
}

FrequencyResponseCurve load_frc_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return parse_frc_csv(in);
}

std::string excited_axis(Dof dof) {
    switch (dof) {
    case Dof::X: return "x";
    case Dof::Y: return "y";
    case Dof::Z: return "z";
    case Dof::Yaw: return "y";
    }
    return "x";
}

} // namespace vibroident
