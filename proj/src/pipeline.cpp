#include "vibroident/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "vibroident/errors.hpp"
#include "vibroident/integrator.hpp"
#include "vibroident/svg.hpp"

namespace fs = std::filesystem;

namespace vibroident {

namespace {

std::string resolve(const std::string& base, const std::string& p) {
    fs::path path(p);
    if (path.is_absolute() || base.empty()) return path.lexically_normal().string();
    return (fs::path(base) / path).lexically_normal().string();
}

// Rethrows with the failing stage and channel prepended, keeping the error kind.
[[noreturn]] void rethrow(const Error& e, const std::string& context) {
    throw Error(e.kind(), e.name(), context + ": " + e.name() + ": " + e.what());
}

} // namespace

void RunConfig::validate() const {
    for (const auto* p : {&model_path, &program_path, &layout_path})
        if (p->empty() || !fs::exists(*p)) throw ConfigError("referenced file '" + *p + "' does not exist");
    if (!(analysis.F_ref > 0) || !(analysis.torque_ref > 0)) throw ConfigError("F_ref must be positive");
    if (!(simulation.dt > 0) || !(simulation.response_rate > 0) || !(simulation.force_rate > 0))
        throw ConfigError("simulation rates must be positive");
    if (filter.order < 1) throw ConfigError("filter order must be >= 1");
    if (!(window.stepped.max_len > 0) || window.stepped.skip_cycles < 0 || !(window.sweep_len > 0))
        throw ConfigError("invalid window policy");
    if (!analysis.curvature_stations.empty() && analysis.curvature_stations.size() != 3)
        throw ConfigError("curvature needs exactly 3 stations");
    analysis.xi_grid.values();
}

RunConfig config_from_json(const nlohmann::json& j, const std::string& base_dir) {
    RunConfig c;
    try {
        c.model_path = resolve(base_dir, j.at("model").get<std::string>());
        c.program_path = resolve(base_dir, j.at("program").get<std::string>());
        c.layout_path = resolve(base_dir, j.at("layout").get<std::string>());
        c.output_dir = j.value("output_dir", c.output_dir);
        c.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("simulation")) {
            const auto& s = j.at("simulation");
            auto& o = c.simulation;
            o.dt = s.value("dt", o.dt);
            o.response_rate = s.value("response_rate", o.response_rate);
            o.force_rate = s.value("force_rate", o.force_rate);
            if (s.contains("noise")) {
                o.response_noise_rms = s.at("noise").value("response_rms", 0.0);
                o.force_noise_rms = s.at("noise").value("force_rms", 0.0);
            }
            if (s.contains("harmonic")) {
                o.harmonic_amplitude = s.at("harmonic").value("amplitude", 0.0);
                o.harmonic_order = s.at("harmonic").value("order", 2);
            }
            if (s.contains("force_low_freq")) {
                o.force_low_freq_amplitude = s.at("force_low_freq").value("amplitude", 0.0);
                o.force_low_freq_hz = s.at("force_low_freq").value("frequency", 0.0);
            }
        }
        if (j.contains("filter")) {
            const auto& f = j.at("filter");
            c.filter.order = f.value("order", c.filter.order);
            c.filter.f_lo = f.value("f_lo", c.filter.f_lo);
            c.filter.f_hi = f.value("f_hi", c.filter.f_hi);
            c.filter.compensate_gain = f.value("compensate_gain", c.filter.compensate_gain);
        }
        if (j.contains("window")) {
            const auto& w = j.at("window");
            c.window.stepped.skip_cycles = w.value("skip_cycles", c.window.stepped.skip_cycles);
            c.window.stepped.max_len = w.value("max_len", c.window.stepped.max_len);
            c.window.sweep_len = w.value("sweep_len", c.window.sweep_len);
        }
        if (j.contains("analysis")) {
            const auto& a = j.at("analysis");
            auto& o = c.analysis;
            o.frequencies = a.value("frequencies", o.frequencies);
            o.low_freq_cut = a.value("low_freq_cut", o.low_freq_cut);
            o.F_ref = a.value("F_ref", o.F_ref);
            o.torque_ref = a.value("torque_ref", o.torque_ref);
            o.rotation_arm = a.value("rotation_arm", o.rotation_arm);
            if (a.contains("xi_grid")) {
                o.xi_grid.start = a.at("xi_grid").value("start", o.xi_grid.start);
                o.xi_grid.stop = a.at("xi_grid").value("stop", o.xi_grid.stop);
                o.xi_grid.step = a.at("xi_grid").value("step", o.xi_grid.step);
            }
            if (a.contains("r_range")) {
                o.r_min = a.at("r_range").at(0).get<double>();
                o.r_max = a.at("r_range").at(1).get<double>();
            }
            o.contribution_floor = a.value("contribution_floor", o.contribution_floor);
            if (a.contains("curvature")) {
                o.curvature_stations = a.at("curvature").value("stations", std::vector<std::string>{});
                o.curvature_fiber = a.at("curvature").value("fiber", o.curvature_fiber);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    RunConfig c = config_from_json(load_json(path), fs::path(path).parent_path().string());
    c.config_path = path;
    return c;
}

std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t h) {
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SimulationResult simulate(const RunConfig& cfg, const RigidBlockModel& model, const ExcitationProgram& program,
                          const SensorLayout& layout) {
    const auto& s = cfg.simulation;
    double f_limit = s.response_rate / 2.0 / 2.5;
    if (program.max_frequency() > f_limit)
        throw DesignError("program reaches " + format_double(program.max_frequency()) + " Hz, above Nyquist/2.5 = " +
                          format_double(f_limit) + " Hz");
    double ratio = 1.0 / (s.dt * s.response_rate);
    auto stride = static_cast<int>(std::llround(ratio));
    if (stride < 1 || std::abs(ratio - stride) > 1e-9 * ratio)
        throw ConfigError("dt must divide the response sample period");

    SimulationResult out;
    out.system = assemble_system(model);
    out.modes = modal_properties(out.system);
    StateHistory h = integrate(out.system, program, s.dt, stride);

    NoiseModel rn;
    rn.rms = s.response_noise_rms;
    rn.seed = cfg.seed;
    rn.harmonic_amplitude = s.harmonic_amplitude;
    rn.harmonic_order = s.harmonic_order;
    out.response = sensor_kinematics(h, layout, rn);
    for (auto& ts : out.response.series) ts.sample_rate = s.response_rate;

    NoiseModel fn;
    fn.rms = s.force_noise_rms;
    fn.seed = cfg.seed;
    fn.low_freq_amplitude = s.force_low_freq_amplitude;
    fn.low_freq_hz = s.force_low_freq_hz;
    out.force = force_channels(program, s.force_rate, program.duration(), fn);

    nlohmann::json m;
    std::uint64_t hash = 14695981039346656037ull;
    for (const auto& p : {cfg.config_path, cfg.model_path, cfg.program_path, cfg.layout_path})
        if (!p.empty() && fs::exists(p)) hash = fnv1a64(read_file(p), hash);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
    m["config_hash"] = std::string("fnv1a64:") + hex;
    m["seed"] = cfg.seed;
    m["dt"] = s.dt;
    m["response_rate"] = s.response_rate;
    m["force_rate"] = s.force_rate;
    m["duration"] = program.duration();
    m["program"] = {{"kind", program.kind == ProgramKind::Stepped ? "stepped" : "sweep"},
                    {"dof", to_string(program.dof)},
                    {"max_frequency", program.max_frequency()},
                    {"force_scale", program.force_scale}};
    m["modes"] = nlohmann::json::array();
    for (const auto& mode : out.modes) {
        std::vector<double> shape(mode.shape.data(), mode.shape.data() + 6);
        m["modes"].push_back({{"frequency_hz", mode.frequency_hz},
                              {"dominant", kDofNames[mode.dominant_dof()]},
                              {"shape", shape}});
    }
    m["files"] = {{"response", "response.csv"}, {"force", "force.csv"}};
    out.manifest = m;
    return out;
}

CVec3 ground_truth_displacement(const SystemMatrices& sys, const ExcitationProgram& program, const Vec3& position,
                                double f, double F_ref) {
    CVec3 F = CVec3::Zero();
    std::complex<double> M = 0.0;
    for (const auto& p : program.force_points) {
        double a = program.force_scale * p.amplitude_at(f) * 1e-3;
        F += a * p.direction.cast<std::complex<double>>();
        M += a * p.location.cross(p.direction).z();
    }
    double Fdof = program.dof == Dof::Yaw ? std::abs(M) : F.norm();
    CVec6 u = steady_state_response(sys, program.force_phasor(f), 2.0 * kPi * f);
    return rigid_displacement(u, position) * (F_ref / Fdof);
}

std::vector<ForceGeometry> force_geometry(const ExcitationProgram& program) {
    std::vector<ForceGeometry> g;
    for (const auto& p : program.force_points) g.push_back({p.id, p.location, p.direction});
    return g;
}

namespace {

std::vector<double> default_sweep_frequencies(const ExcitationProgram& program, double len) {
    std::vector<double> grid;
    for (double f = 1.0; f < 9.0 - 1e-9; f += 1.0) grid.push_back(f);
    for (double f = 9.0; f < 12.0 - 1e-9; f += 0.5) grid.push_back(f);
    for (double f = 12.0; f <= 25.0 + 1e-9; f += 1.0) grid.push_back(f);
    std::vector<double> out;
    const auto& s = program.sweep;
    for (double f : grid) {
        double tc = (f - s.f0) / s.rate;
        if (tc - len / 2 < 0 || tc + len / 2 > (s.f1 - s.f0) / s.rate) continue;
        if (f * len < 3.0) continue;
        out.push_back(f);
    }
    return out;
}

int rigid_index(Dof dof) {
    switch (dof) {
    case Dof::X: return 0;
    case Dof::Y: return 1;
    case Dof::Z: return 2;
    case Dof::Yaw: return 5;
    }
    return 0;
}

} // namespace

std::vector<CurvePoint> peak_curve(const FrequencyResponseCurve& frc, std::string* name) {
    if (frc.dof == Dof::Yaw) {
        if (name) *name = std::string(kRigidCurveId) + ".rz";
        return frc.curve(kRigidCurveId, "rz");
    }
    std::string axis = excited_axis(frc.dof);
    if (name) *name = "station-mean." + axis;
    std::map<double, std::pair<double, int>> acc;
    for (const auto& p : frc.points)
        if (p.kind == CurveKind::Station && p.axis == axis) {
            auto& e = acc[p.f];
            e.first += p.u_scaled_mm;
            e.second += 1;
        }
    std::vector<CurvePoint> out;
    for (const auto& [f, e] : acc) out.push_back({f, e.first / e.second});
    return out;
}

AnalysisResult analyze(const RunConfig& cfg, const ExcitationProgram& program, const SensorLayout& layout,
                       const TimeSeriesSet& response, const TimeSeriesSet& force) {
    AnalysisResult res;
    res.dof = program.dof;
    res.F_ref = program.dof == Dof::Yaw ? cfg.analysis.torque_ref : cfg.analysis.F_ref;

    AlignedRecord rec;
    try {
        rec = synchronize(response, force, {cfg.config_path, to_string(program.dof), program_to_json(program).dump()});
    } catch (const Error& e) {
        rethrow(e, "synchronize");
    }
    const double fs = rec.response.series.front().sample_rate;
    try {
        res.filter = design_bandpass(cfg.filter.order, cfg.filter.f_lo, cfg.filter.f_hi, fs);
    } catch (const Error& e) {
        rethrow(e, "filter design");
    }

    // Filtered station channels, station order from the layout.
    struct Channel {
        std::size_t station;
        int axis;
        TimeSeries filtered;
    };
    std::vector<Channel> channels;
    std::vector<const Station*> stations;
    for (const auto& st : layout.stations) {
        bool all = true;
        for (int k = 0; k < 3; ++k) all = all && rec.response.find(SensorLayout::channel(st.id, k));
        if (!all) continue;
        stations.push_back(&st);
        for (int k = 0; k < 3; ++k) {
            const TimeSeries& ts = rec.response.at(SensorLayout::channel(st.id, k));
            try {
                channels.push_back({stations.size() - 1, k, filtfilt(res.filter, ts)});
            } catch (const Error& e) {
                rethrow(e, "filter, channel '" + ts.label + "'");
            }
        }
    }
    if (stations.empty()) throw ParseError("response holds no complete station (channels '<id>.x/.y/.z')");

    // Analysis frequencies and windows.
    std::vector<std::pair<double, Window>> plan;
    const TimeSeries& grid = channels.front().filtered;
    if (program.kind == ProgramKind::Stepped) {
        for (const auto& step : program.steps()) {
            try {
                TimeSeries seg = extract_window(grid, step.t_start, step.t_end);
                plan.push_back({step.frequency, extract_steady_window(seg, step.frequency, cfg.window.stepped)});
            } catch (const Error& e) {
                rethrow(e, "window at " + format_double(step.frequency) + " Hz");
            }
        }
    } else {
        auto freqs = cfg.analysis.frequencies.empty() ? default_sweep_frequencies(program, cfg.window.sweep_len)
                                                      : cfg.analysis.frequencies;
        for (double f : freqs) {
            double tc = (f - program.sweep.f0) / program.sweep.rate;
            plan.push_back({f, {tc - cfg.window.sweep_len / 2, tc + cfg.window.sweep_len / 2}});
        }
    }
    if (plan.empty()) throw WindowError("no analysis frequencies");

    auto geometry = force_geometry(program);
    std::vector<StationAmplitudes> amps;
    std::vector<ForceAtFrequency> forces;
    std::vector<RigidMotion> rigid;
    for (const auto& [f, win] : plan) {
        FrequencyAnalysis fa;
        fa.f = f;
        fa.window = win;
        StationAmplitudes sa;
        sa.f = f;
        fa.stations.resize(stations.size());
        for (std::size_t i = 0; i < stations.size(); ++i) {
            fa.stations[i].id = stations[i]->id;
            fa.stations[i].position = stations[i]->position;
        }
        for (const auto& ch : channels) {
            SineFit fit;
            try {
                fit = fit_sine(extract_window(ch.filtered, win.t0, win.t1), f);
            } catch (const FitError& e) {
                // Noise-dominated channels: keep the best estimate found.
                if (e.best().omega <= 0) rethrow(e, "sine fit, channel '" + ch.filtered.label + "' at " + format_double(f) + " Hz");
                fit = e.best();
                ++res.unconverged_fits;
            } catch (const Error& e) {
                rethrow(e, "sine fit, channel '" + ch.filtered.label + "' at " + format_double(f) + " Hz");
            }
            double acc = fit.amplitude;
            if (cfg.filter.compensate_gain) {
                double g = res.filter.gain(fit.frequency());
                acc /= g * g;
            }
            SineFit comp = fit;
            comp.amplitude = acc;
            double u = displacement_amplitude(comp);
            std::complex<double> phasor = -u * std::polar(1.0, fit.phase);
            fa.stations[ch.station].components.push_back({stations[ch.station]->axes[ch.axis], phasor});
            sa.amplitude_m[stations[ch.station]->id](ch.axis) = u;
        }
        TimeSeriesSet fwin;
        try {
            for (const auto& ts : force.series) fwin.series.push_back(extract_window(ts, win.t0, win.t1));
            fa.force = estimate_force_amplitude(fwin, geometry, f, cfg.analysis.low_freq_cut);
        } catch (const Error& e) {
            rethrow(e, "force estimation at " + format_double(f) + " Hz");
        }
        fa.F_measured = fa.force.for_dof(program.dof);
        try {
            fa.rigid = fit_rigid_body(fa.stations);
        } catch (const Error& e) {
            rethrow(e, "rigid-body fit at " + format_double(f) + " Hz");
        }
        fa.rigid.frequency = f;
        fa.contribution = rbm_contribution(fa.stations, fa.rigid, cfg.analysis.contribution_floor);
        amps.push_back(sa);
        forces.push_back({f, fa.F_measured});
        rigid.push_back(fa.rigid);
        res.per_frequency.push_back(std::move(fa));
    }

    try {
        res.frc = build_frc(amps, forces, layout, program.dof, {res.F_ref, cfg.analysis.rotation_arm}, &rigid);
    } catch (const Error& e) {
        rethrow(e, "build FRC");
    }
    auto pc = peak_curve(res.frc, &res.natural_curve);
    {
        FrequencyResponseCurve tmp;
        tmp.dof = res.frc.dof;
        for (const auto& p : pc) tmp.points.push_back({p.f, "peak", "u", CurveKind::Group, p.u, 1.0, 1.0});
        res.natural = natural_frequency(tmp, "peak", "u");
    }
    try {
        DampingOptions dopt;
        dopt.grid = cfg.analysis.xi_grid;
        dopt.r_min = cfg.analysis.r_min;
        dopt.r_max = cfg.analysis.r_max;
        res.damping = estimate_damping(res.frc, res.natural.f, dopt);
        res.amplification = amplification_factor(res.frc, kRigidCurveId, kDofNames[rigid_index(program.dof)],
                                                 res.natural.f);
    } catch (const Error& e) {
        rethrow(e, "damping estimate");
    }

    const auto& cs = cfg.analysis.curvature_stations;
    if (cs.size() == 3) {
        auto it = std::find_if(res.per_frequency.begin(), res.per_frequency.end(),
                               [&](const FrequencyAnalysis& a) { return a.f == res.natural.f; });
        const FrequencyAnalysis& fa = *it;
        std::complex<double> ref = fa.rigid.delta0(rigid_index(program.dof));
        std::complex<double> rot = std::abs(ref) > 0 ? std::conj(ref) / std::abs(ref) : 1.0;
        double scale = res.F_ref / fa.F_measured;
        std::array<CurvaturePoint, 3> pts;
        for (int k = 0; k < 3; ++k) {
            auto st = std::find_if(fa.stations.begin(), fa.stations.end(),
                                   [&](const StationPhasors& s) { return s.id == cs[k]; });
            if (st == fa.stations.end()) throw ConfigError("curvature station '" + cs[k] + "' not measured");
            CVec3 v = rigid_displacement(fa.rigid.delta0, st->position);
            std::complex<double> w = 0.0;
            for (const auto& c : st->components)
                if (std::abs(c.axis.z()) > 0.5) w = (c.value - v(2)) * c.axis.z();
            pts[k] = {st->position.x(), (w * rot).real() * 1e3 * scale};
        }
        try {
            res.strain = curvature_strain(pts, cfg.analysis.curvature_fiber);
        } catch (const Error& e) {
            rethrow(e, "curvature");
        }
    }
    return res;
}

std::map<std::string, std::string> render_analysis(const AnalysisResult& r, const SensorLayout& layout) {
    std::map<std::string, std::string> files;
    {
        std::ostringstream os;
        write_frc_csv(os, r.frc);
        files["frc.csv"] = os.str();
    }
    {
        std::ostringstream os;
        os << "f_hz";
        for (const char* n : kDofNames) os << ',' << n << (std::string(n)[0] == 'd' ? "_mag_m" : "_mag_rad");
        for (const char* n : kDofNames) os << ',' << n << "_phase_rad";
        os << '\n';
        for (const auto& fa : r.per_frequency) {
            double s = r.F_ref / fa.F_measured;
            os << format_double(fa.f);
            for (int j = 0; j < 6; ++j) os << ',' << format_double(std::abs(fa.rigid.delta0(j)) * s);
            for (int j = 0; j < 6; ++j) os << ',' << format_double(std::arg(fa.rigid.delta0(j)));
            os << '\n';
        }
        files["rbm.csv"] = os.str();
    }
    {
        std::ostringstream os;
        os << "f_hz,x_pct,y_pct,z_pct\n";
        for (const auto& fa : r.per_frequency) {
            os << format_double(fa.f);
            for (const auto& c : fa.contribution) os << ',' << (c ? format_double(*c) : std::string());
            os << '\n';
        }
        files["contribution.csv"] = os.str();
    }
    {
        nlohmann::json d;
        d["dof"] = to_string(r.dof);
        d["fn"] = r.natural.f;
        d["fn_flat"] = r.natural.flat;
        d["fn_curve"] = r.natural_curve;
        d["xi_lo"] = r.damping.xi_lo;
        d["xi_hi"] = r.damping.xi_hi;
        d["amplification"] = r.amplification;
        d["normalization_freqs"] = {r.damping.normalization_freqs[0], r.damping.normalization_freqs[1]};
        d["stations"] = nlohmann::json::array();
        for (const auto& s : r.damping.stations)
            d["stations"].push_back({{"id", s.id}, {"xi", s.xi}, {"boundary", s.boundary}});
        files["damping.json"] = d.dump(2) + "\n";
    }
    {
        nlohmann::json s;
        s["F_ref"] = r.F_ref;
        s["unconverged_fits"] = r.unconverged_fits;
        s["frequencies"] = nlohmann::json::array();
        for (const auto& fa : r.per_frequency)
            s["frequencies"].push_back({{"f_hz", fa.f},
                                        {"window", {fa.window.t0, fa.window.t1}},
                                        {"F_measured", fa.F_measured},
                                        {"rigid_residual_rms_m", fa.rigid.residual_rms}});
        if (r.strain) s["curvature_strain"] = *r.strain;
        s["filter"] = r.filter.to_json();
        files["summary.json"] = s.dump(2) + "\n";
    }

    std::string axis = excited_axis(r.dof);
    for (const auto& [name, members] : layout.groups) {
        std::vector<PlotSeries> series;
        for (int k = 0; k < 3; ++k) {
            PlotSeries ps;
            ps.name = name + "." + kAxisNames[k];
            for (const auto& p : r.frc.curve(name, kAxisNames[k])) {
                ps.x.push_back(p.f);
                ps.y.push_back(p.u);
            }
            series.push_back(ps);
        }
        files["frc_" + name + ".svg"] =
            line_plot_svg("FRC group " + name + " (" + to_string(r.dof) + " excitation)", "frequency [Hz]",
                          "scaled displacement [mm]", series);
    }
    {
        std::vector<PlotSeries> series;
        for (const char* n : kDofNames) {
            PlotSeries ps;
            ps.name = std::string("RBM ") + n;
            for (const auto& p : r.frc.curve(kRigidCurveId, n)) {
                ps.x.push_back(p.f);
                ps.y.push_back(p.u);
            }
            series.push_back(ps);
        }
        files["frc_rbm.svg"] = line_plot_svg(std::string("Rigid-body FRC (") + to_string(r.dof) + " excitation)", "frequency [Hz]",
                                             "scaled displacement [mm]", series);
    }

    auto it = std::find_if(r.per_frequency.begin(), r.per_frequency.end(),
                           [&](const FrequencyAnalysis& a) { return a.f == r.natural.f; });
    if (it != r.per_frequency.end()) {
        const auto& fa = *it;
        std::complex<double> ref = fa.rigid.delta0(rigid_index(r.dof));
        std::complex<double> rot = std::abs(ref) > 0 ? std::conj(ref) / std::abs(ref) : 1.0;
        double s = r.F_ref / fa.F_measured;
        std::vector<DeformationPoint> plan, elev;
        double dmax = 0, span = 0;
        for (const auto& st : fa.stations) {
            Vec3 meas = Vec3::Zero();
            for (const auto& c : st.components) meas += c.axis * (c.value * rot).real() * s * 1e3;
            CVec3 v = rigid_displacement(fa.rigid.delta0, st.position);
            Vec3 rig = (v * rot).real() * s * 1e3;
            plan.push_back({st.id, st.position.x(), st.position.y(), meas.x(), meas.y(), rig.x(), rig.y()});
            elev.push_back({st.id, st.position.x(), st.position.z(), meas.x(), meas.z(), rig.x(), rig.z()});
            dmax = std::max(dmax, meas.norm());
            span = std::max(span, st.position.norm());
        }
        // Positions in m, displacements in mm.
        double mag = dmax > 0 ? 0.15 * span / (dmax * 1e-3) : 1.0;
        for (auto* v : {&plan, &elev})
            for (auto& p : *v) {
                p.mx *= 1e-3;
                p.my *= 1e-3;
                p.rx *= 1e-3;
                p.ry *= 1e-3;
            }
        std::string title = "Deformation at " + format_double(fa.f) + " Hz";
        files["deformation_plan.svg"] = deformation_svg(title + ", plan", "x [m]", "y [m]", plan, mag);
        files["deformation_elevation.svg"] = deformation_svg(title + ", elevation", "x [m]", "z [m]", elev, mag);
    }
    return files;
}

void write_bundle_atomic(const std::string& dir, const std::map<std::string, std::string>& files) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
    std::string suffix = ".tmp-" + std::to_string(::getpid());
    std::vector<fs::path> temps;
    auto cleanup = [&] {
        for (const auto& t : temps) fs::remove(t, ec);
    };
    for (const auto& [name, content] : files) {
        fs::path tmp = fs::path(dir) / ("." + name + suffix);
        temps.push_back(tmp);
        std::ofstream out(tmp, std::ios::binary);
        out << content;
        out.close();
        if (!out) {
            cleanup();
            throw IoError("cannot write '" + tmp.string() + "'");
        }
    }
    std::size_t i = 0;
    for (const auto& [name, content] : files) {
        fs::rename(temps[i++], fs::path(dir) / name, ec);
        if (ec) {
            cleanup();
            throw IoError("cannot rename into '" + dir + "/" + name + "': " + ec.message());
        }
    }
}

} // namespace vibroident
