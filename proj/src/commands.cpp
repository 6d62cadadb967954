#include "vibroident/commands.hpp"

#include <charconv>
#include <filesystem>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "vibroident/errors.hpp"
#include "vibroident/frc.hpp"
#include "vibroident/pipeline.hpp"

namespace vibroident {

namespace {

int guarded(const char* command, std::ostream& err, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const Error& e) {
        err << "vibroident " << command << ": " << e.name() << ": " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "vibroident " << command << ": " << e.what() << '\n';
        return 1;
    }
}

RunConfig config_with_seed(const std::string& path) {
    RunConfig cfg = load_config(path);
    if (const char* s = std::getenv("VIBROIDENT_SEED")) {
        std::string v(s);
        std::uint64_t seed = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
        if (v.empty() || ec != std::errc() || p != v.data() + v.size())
            throw ConfigError("VIBROIDENT_SEED='" + v + "' is not an unsigned integer");
        cfg.seed = seed;
    }
    return cfg;
}

} // namespace

int cmd_simulate(const std::string& config_path, const std::string& out_dir, std::ostream& err) {
    return guarded("simulate", err, [&] {
        RunConfig cfg = config_with_seed(config_path);
        auto model = load_model(cfg.model_path);
        auto program = load_program(cfg.program_path);
        auto layout = load_layout(cfg.layout_path);
        SimulationResult sim = simulate(cfg, model, program, layout);
        std::map<std::string, std::string> files;
        std::ostringstream r, f;
        write_timeseries_csv(r, sim.response);
        write_timeseries_csv(f, sim.force);
        files["response.csv"] = r.str();
        files["force.csv"] = f.str();
        files["manifest.json"] = sim.manifest.dump(2) + "\n";
        write_bundle_atomic(out_dir.empty() ? cfg.output_dir : out_dir, files);
    });
}

int cmd_analyze(const std::string& config_path, const std::string& response_path, const std::string& force_path,
                const std::string& out_dir, std::ostream& err) {
    return guarded("analyze", err, [&] {
        RunConfig cfg = config_with_seed(config_path);
        auto program = load_program(cfg.program_path);
        auto layout = load_layout(cfg.layout_path);
        CsvSchema rs;
        rs.default_unit = Unit::MetersPerSecond2;
        CsvSchema fsch;
        fsch.default_unit = Unit::KiloNewton;
        TimeSeriesSet response, force;
        try {
            response = parse_timeseries_csv_file(response_path, rs);
        } catch (const Error& e) {
            throw Error(e.kind(), e.name(), "response '" + response_path + "': " + e.what());
        }
        try {
            force = parse_timeseries_csv_file(force_path, fsch);
        } catch (const Error& e) {
            throw Error(e.kind(), e.name(), "force '" + force_path + "': " + e.what());
        }
        AnalysisResult res = analyze(cfg, program, layout, response, force);
        write_bundle_atomic(out_dir.empty() ? cfg.output_dir : out_dir, render_analysis(res, layout));
    });
}

int cmd_linearity(const std::string& frc_a, const std::string& frc_b, double exclude_below,
                  const std::optional<std::string>& id, const std::optional<std::string>& axis, std::ostream& out,
                  std::ostream& err) {
    return guarded("linearity", err, [&] {
        auto a = load_frc_csv(frc_a);
        auto b = load_frc_csv(frc_b);
        double rms = linearity_rms(a, b, exclude_below, {id, axis});
        out << "linearity_rms_mm," << format_double(rms) << '\n';
    });
}

int cmd_vs(const std::string& cpt_path, const std::string& out_path, const AndrusOptions& andrus, std::ostream& out,
           std::ostream& err) {
    return guarded("vs", err, [&] {
        std::ifstream in(cpt_path);
        if (!in) throw IoError("cannot open '" + cpt_path + "'");
        CptSounding s = parse_cpt_csv(in);
        s.andrus = andrus;
        std::ostringstream os;
        write_vs_csv(os, vs_average(s));
        if (out_path.empty() || out_path == "-") {
            out << os.str();
        } else {
            std::filesystem::path p(out_path);
            std::string dir = p.has_parent_path() ? p.parent_path().string() : ".";
            write_bundle_atomic(dir, {{p.filename().string(), os.str()}});
        }
    });
}

} // namespace vibroident
