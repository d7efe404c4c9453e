// Command-line front end. Talks to the simulator only through the C API.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "chiralkerr/chiralkerr.h"

namespace {

struct Options {
    std::string config;
    std::string out = "-";
    std::string format = "csv";
    int threads = 1;
    bool verbose = false;
};

void add_shared(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config, "experiment config (JSON)")->required();
    cmd->add_option("--out", o.out, "output path, - for stdout");
    cmd->add_option("--format", o.format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));
    cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--verbose", o.verbose, "print resolved parameters to stderr");
}

int report(ck_status s) {
    std::fprintf(stderr, "error: %s\n", ck_last_error());
    return static_cast<int>(s);
}

std::string out_path(const Options& o) { return o.out == "-" ? "/dev/stdout" : o.out; }

ck_config* load(const Options& o, int& code) {
    ck_config* cfg = nullptr;
    ck_status s = ck_config_load(o.config.c_str(), &cfg);
    if (s != CK_OK) {
        code = report(s);
        return nullptr;
    }
    if (o.verbose) {
        const char* text = nullptr;
        if (ck_config_describe(cfg, &text) == CK_OK) std::fputs(text, stderr);
    }
    return cfg;
}

int run_sweep(const Options& o, ck_sweep_kind kind) {
    int code = 0;
    ck_config* cfg = load(o, code);
    if (!cfg) return code;
    ck_result* res = nullptr;
    ck_status s = ck_run(cfg, kind, o.threads, &res);
    ck_config_free(cfg);
    if (s != CK_OK) return report(s);
    s = ck_result_write(res, o.format == "svg" ? CK_FORMAT_SVG : CK_FORMAT_CSV, out_path(o).c_str());
    ck_result_free(res);
    return s == CK_OK ? 0 : report(s);
}

int run_calibration(const Options& o) {
    if (o.format != "csv") {
        std::fprintf(stderr, "error: calibrate-circulator writes csv only\n");
        return CK_ERR_CONFIG;
    }
    int code = 0;
    ck_config* cfg = load(o, code);
    if (!cfg) return code;
    ck_calibration* cal = nullptr;
    ck_status s = ck_calibrate(cfg, o.threads, &cal);
    ck_config_free(cfg);
    if (s != CK_OK) return report(s);

    ck_operating_point op{};
    ck_calibration_point(cal, &op);
    std::FILE* summary = o.out == "-" ? stderr : stdout;
    std::fprintf(summary,
                 "probe_detuning = %.9g rad/s (2pi x %.6g MHz)\nphi_l2 = %.9g rad\nmin_route_contrast = %.6f\n"
                 "reciprocal_ceiling = %.6f\nbeats_reciprocity = %s\n",
                 op.probe_detuning, op.probe_detuning / (2.0 * 3.14159265358979323846 * 1e6), op.phi_l2,
                 op.min_route_contrast, op.reciprocal_ceiling, op.beats_reciprocity ? "yes" : "no");
    s = ck_calibration_write(cal, out_path(o).c_str());
    ck_calibration_free(cal);
    return s == CK_OK ? 0 : report(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chiral cross-Kerr vapor isolator and circulator simulator"};
    app.set_version_flag("--version", ck_version());
    app.require_subcommand(1);

    Options o;
    auto* spectrum = app.add_subcommand("spectrum", "co/counter transmission vs probe detuning");
    auto* isolation = app.add_subcommand("isolation-sweep", "on-resonance isolation vs switch power");
    auto* switch_sweep = app.add_subcommand("switch-sweep", "on-resonance transmission vs switch detuning");
    auto* phase = app.add_subcommand("phase-sweep", "cross-phase and Sagnac port intensities");
    auto* calibrate = app.add_subcommand("calibrate-circulator", "search the circulator operating point");
    for (auto* cmd : {spectrum, isolation, switch_sweep, phase, calibrate}) add_shared(cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : CK_ERR_CONFIG;
    }

    if (*spectrum) return run_sweep(o, CK_SWEEP_SPECTRUM);
    if (*isolation) return run_sweep(o, CK_SWEEP_ISOLATION);
    if (*switch_sweep) return run_sweep(o, CK_SWEEP_SWITCH_DETUNING);
    if (*phase) return run_sweep(o, CK_SWEEP_PHASE);
    return run_calibration(o);
}
