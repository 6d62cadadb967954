#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vibroident/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Forced-vibration system identification: simulate, analyze, linearity, vs"};
    app.require_subcommand(1);

    std::string config, out_dir, response, force;
    auto* sim = app.add_subcommand("simulate", "Simulate a test program on the block model");
    sim->add_option("-c,--config", config, "Run configuration JSON")->required();
    sim->add_option("-o,--out", out_dir, "Output directory (default: config output_dir)");

    auto* ana = app.add_subcommand("analyze", "Identify FRC, rigid-body motion and damping from records");
    ana->add_option("-c,--config", config, "Run configuration JSON")->required();
    ana->add_option("--response", response, "Response CSV (m/s2)")->required();
    ana->add_option("--force", force, "Force CSV (kN)")->required();
    ana->add_option("-o,--out", out_dir, "Output directory (default: config output_dir)");

    std::string frc_a, frc_b;
    double exclude_below = 2.0;
    std::optional<std::string> id, axis;
    auto* lin = app.add_subcommand("linearity", "RMS difference of two scaled FRCs");
    lin->add_option("frc_a", frc_a)->required();
    lin->add_option("frc_b", frc_b)->required();
    lin->add_option("--exclude-below", exclude_below, "Drop frequencies at or below this (Hz)");
    lin->add_option("--station", id, "Restrict to one station/group/RBM id");
    lin->add_option("--axis", axis, "Restrict to one axis");

    std::string cpt, vs_out;
    vibroident::AndrusOptions andrus;
    auto* vs = app.add_subcommand("vs", "Shear-wave velocity profile from a CPT sounding");
    vs->add_option("cpt", cpt, "CPT CSV: depth_m,qt_kpa,fs_kpa,sigma_v_kpa,ic")->required();
    vs->add_option("-o,--out", vs_out, "Output CSV (default: stdout)");
    vs->add_option("--sf", andrus.sf, "Age scaling factor");
    vs->add_option("--sf-exponent", andrus.a, "Age scaling exponent");
    vs->add_flag("--andrus-multiplicative", andrus.multiplicative, "Multiplicative form of the Andrus correlation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (*sim) return vibroident::cmd_simulate(config, out_dir, std::cerr);
    if (*ana) return vibroident::cmd_analyze(config, response, force, out_dir, std::cerr);
    if (*lin) return vibroident::cmd_linearity(frc_a, frc_b, exclude_below, id, axis, std::cout, std::cerr);
    if (*vs) return vibroident::cmd_vs(cpt, vs_out, andrus, std::cout, std::cerr);
    return 2;
}
