#include "vibroident/excitation.hpp"

#include <algorithm>
#include <cmath>

#include "vibroident/block_model.hpp"
#include "vibroident/errors.hpp"
#include "vibroident/layout.hpp"

namespace vibroident {

double ForcePoint::amplitude_at(double f) const {
    if (profile.empty()) return amplitude;
    if (f <= profile.front().first) return profile.front().second;
    if (f >= profile.back().first) return profile.back().second;
    auto it = std::upper_bound(profile.begin(), profile.end(), f,
                               [](double v, const std::pair<double, double>& p) { return v < p.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    double w = (f - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
}

void ExcitationProgram::validate() const {
    if (kind == ProgramKind::Stepped) {
        const auto& fr = stepped.frequencies;
        if (fr.empty()) throw ConfigError("stepped program has no frequencies");
        for (std::size_t i = 0; i < fr.size(); ++i) {
            if (!(fr[i] > 0)) throw ConfigError("stepped frequencies must be positive");
            if (i > 0 && !(fr[i] > fr[i - 1])) throw ConfigError("stepped frequencies must be strictly increasing");
        }
        if (!(stepped.duration_per_step > 0) && !(stepped.cycles_per_step > 0))
            throw ConfigError("stepped program needs duration_per_step or cycles_per_step");
        if (stepped.rest_gap < 0) throw ConfigError("rest_gap must be non-negative");
    } else {
        if (!(sweep.f0 > 0) || !(sweep.f1 > sweep.f0)) throw ConfigError("sweep needs 0 < f0 < f1");
        if (!(sweep.rate > 0)) throw ConfigError("sweep rate must be positive");
    }
    if (force_points.empty()) throw ConfigError("program has no force points");
    for (const auto& p : force_points) {
        if (std::abs(p.direction.norm() - 1.0) > 1e-9)
            throw ConfigError("force point '" + p.id + "' direction is not a unit vector");
        for (std::size_t i = 1; i < p.profile.size(); ++i)
            if (!(p.profile[i].first > p.profile[i - 1].first))
                throw ConfigError("force point '" + p.id + "' profile frequencies must increase");
    }
}

std::vector<ProgramStep> ExcitationProgram::steps() const {
    std::vector<ProgramStep> out;
    if (kind == ProgramKind::Sweep) {
        out.push_back({0.0, (sweep.f1 - sweep.f0) / sweep.rate, sweep.f0});
        return out;
    }
    double t = 0.0;
    for (double f : stepped.frequencies) {
        double d = std::max(stepped.duration_per_step, stepped.cycles_per_step / f);
        out.push_back({t, t + d, f});
        t += d + stepped.rest_gap;
    }
    return out;
}

double ExcitationProgram::duration() const {
    if (kind == ProgramKind::Sweep) return (sweep.f1 - sweep.f0) / sweep.rate;
    auto s = steps();
    return s.back().t_end + stepped.rest_gap;
}

double ExcitationProgram::max_frequency() const {
    if (kind == ProgramKind::Sweep) return sweep.f1;
    return stepped.frequencies.back();
}

Drive ExcitationProgram::drive(double t) const {
    Drive d;
    if (kind == ProgramKind::Sweep) {
        double T = (sweep.f1 - sweep.f0) / sweep.rate;
        if (t < 0 || t > T) return d;
        d.active = true;
        d.frequency = sweep.f0 + sweep.rate * t;
        d.phase = 2.0 * kPi * (sweep.f0 * t + 0.5 * sweep.rate * t * t);
        d.value = std::sin(d.phase);
        return d;
    }
    // Steps are few; a linear scan keeps this simple.
    double t0 = 0.0;
    for (double f : stepped.frequencies) {
        double dur = std::max(stepped.duration_per_step, stepped.cycles_per_step / f);
        if (t < t0) break;
        if (t < t0 + dur) {
            d.active = true;
            d.frequency = f;
            d.phase = 2.0 * kPi * f * (t - t0);
            d.value = std::sin(d.phase);
            return d;
        }
        t0 += dur + stepped.rest_gap;
    }
    return d;
}

double ExcitationProgram::point_force(std::size_t k, const Drive& d) const {
    if (!d.active) return 0.0;
    return force_scale * force_points[k].amplitude_at(d.frequency) * d.value;
}

Vec6 ExcitationProgram::generalized_force(double t) const {
    Drive d = drive(t);
    Vec6 F = Vec6::Zero();
    if (!d.active) return F;
    for (std::size_t k = 0; k < force_points.size(); ++k)
        F += point_force(k, d) * spring_row(force_points[k].location, force_points[k].direction).transpose();
    return F;
}

CVec6 ExcitationProgram::force_phasor(double f) const {
    Vec6 F = Vec6::Zero();
    for (const auto& p : force_points)
        F += force_scale * p.amplitude_at(f) * spring_row(p.location, p.direction).transpose();
    return F.cast<std::complex<double>>();
}

Vec6 ExcitationProgram::peak_force() const {
    Vec6 F = Vec6::Zero();
    for (const auto& p : force_points) {
        double a = std::abs(p.amplitude);
        for (const auto& [f, v] : p.profile) a = std::max(a, std::abs(v));
        F += std::abs(force_scale) * a * spring_row(p.location, p.direction).transpose().cwiseAbs();
    }
    return F;
}

ExcitationProgram program_from_json(const nlohmann::json& j) {
    ExcitationProgram p;
    try {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "stepped")
            p.kind = ProgramKind::Stepped;
        else if (kind == "sweep")
            p.kind = ProgramKind::Sweep;
        else
            throw ConfigError("unknown program kind '" + kind + "'");
        p.dof = dof_from_string(j.value("dof", "X"));
        if (p.kind == ProgramKind::Stepped) {
            const auto& s = j.at("stepped");
            p.stepped.frequencies = s.at("frequencies").get<std::vector<double>>();
            p.stepped.duration_per_step = s.value("duration_per_step", 0.0);
            p.stepped.cycles_per_step = s.value("cycles_per_step", 0.0);
            p.stepped.rest_gap = s.value("rest_gap", 5.0);
        } else {
            const auto& s = j.at("sweep");
            p.sweep.f0 = s.at("f0").get<double>();
            p.sweep.f1 = s.at("f1").get<double>();
            p.sweep.rate = s.at("rate").get<double>();
        }
        for (const auto& f : j.at("force_points")) {
            ForcePoint fp;
            fp.id = f.at("id").get<std::string>();
            fp.location = vec3_from_json(f.at("location"));
            fp.direction = vec3_from_json(f.at("direction"));
            fp.amplitude = f.value("amplitude", 0.0);
            if (f.contains("profile"))
                for (const auto& e : f.at("profile")) fp.profile.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
            p.force_points.push_back(fp);
        }
        p.force_scale = j.value("force_scale", 1.0);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("program: ") + e.what());
    }
    p.validate();
    return p;
}

nlohmann::json program_to_json(const ExcitationProgram& p) {
    nlohmann::json j;
    j["kind"] = p.kind == ProgramKind::Stepped ? "stepped" : "sweep";
    j["dof"] = to_string(p.dof);
    if (p.kind == ProgramKind::Stepped)
        j["stepped"] = {{"frequencies", p.stepped.frequencies},
                        {"duration_per_step", p.stepped.duration_per_step},
                        {"cycles_per_step", p.stepped.cycles_per_step},
                        {"rest_gap", p.stepped.rest_gap}};
    else
        j["sweep"] = {{"f0", p.sweep.f0}, {"f1", p.sweep.f1}, {"rate", p.sweep.rate}};
    j["force_points"] = nlohmann::json::array();
    for (const auto& f : p.force_points) {
        nlohmann::json e = {{"id", f.id},
                            {"location", vec3_to_json(f.location)},
                            {"direction", vec3_to_json(f.direction)},
                            {"amplitude", f.amplitude}};
        if (!f.profile.empty()) e["profile"] = f.profile;
        j["force_points"].push_back(e);
    }
    j["force_scale"] = p.force_scale;
    return j;
}

ExcitationProgram load_program(const std::string& path) { return program_from_json(load_json(path)); }

} // namespace vibroident
