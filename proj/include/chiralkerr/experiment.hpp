#pragma once

#include <string>
#include <vector>

#include "chiralkerr/atom.hpp"
#include "chiralkerr/doppler.hpp"
#include "chiralkerr/interferometer.hpp"

namespace chiralkerr {

struct DriveSettings {
    double power = 0.0;          // W
    double detuning = 0.0;       // rad/s
    double beam_diameter = 0.0;  // m
    double wavelength = 0.0;     // m
    double dipole = 0.0;         // C m
    double rabi_scale = 1.0;

    double rabi() const;
    double wavevector() const;
};

enum class SweepAxis { ProbeDetuning, SwitchPower, SwitchDetuning, PhiL2 };

const char* to_string(SweepAxis axis);

struct SweepSpec {
    SweepAxis axis = SweepAxis::ProbeDetuning;
    double start = 0.0;
    double stop = 0.0;
    int count = 2;

    std::vector<double> grid() const;
};

struct Geometry {
    double cell_length = 0.1;
    double bs_theta = 0.0;
    double bs_phi = 0.0;
    double phi_l2 = 0.0;
};

// One resolved scalar with where it came from.
struct ResolvedParameter {
    std::string key;
    std::string value;
    std::string source;  // experiment, reference, model, config, derived
    std::string note;
};

struct ExperimentConfig {
    AtomParams atom;
    DriveSettings probe;
    DriveSettings coupling;
    DriveSettings switching;
    Geometry geometry;
    QuadratureScheme quadrature;
    SweepSpec sweep;
    CalibrationGrid calibration;
    std::vector<ResolvedParameter> provenance;

    void validate() const;
    // Probe along +1 (co) or -1 (counter); coupling and switch always +1.
    DriveConfiguration drives(Direction probe_direction) const;
    double probe_wavevector() const { return probe.wavevector(); }
    std::string describe() const;
};

// Built-in defaults, identical to configs/defaults.json.
const std::string& default_config_text();

ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>");
ExperimentConfig load_config(const std::string& path);

// Density of 85Rb atoms in a vapor cell at temperature T (K).
double rb85_vapor_density(double temperature);

struct SweepRow {
    double axis = 0.0;
    double t_co = 0.0;
    double t_cou = 0.0;
    double isolation_db = 0.0;
    double phase_co = 0.0;
    double phase_counter = 0.0;
    double delta_phi = 0.0;
    double p2_intensity = 0.0;
    double p4_intensity = 0.0;
};

enum class SweepKind { Spectrum, Isolation, SwitchDetuning, Phase };

struct SweepResult {
    SweepKind kind = SweepKind::Spectrum;
    SweepAxis axis = SweepAxis::ProbeDetuning;
    std::vector<SweepRow> rows;
};

struct RunOptions {
    int threads = 1;
};

SweepResult run_spectrum(const ExperimentConfig& config, const RunOptions& opts = {});
SweepResult run_isolation_sweep(const ExperimentConfig& config, const RunOptions& opts = {});
SweepResult run_switch_detuning_sweep(const ExperimentConfig& config, const RunOptions& opts = {});
SweepResult run_phase_sweep(const ExperimentConfig& config, const RunOptions& opts = {});

struct CalibrationResult {
    OperatingPoint point;
    std::vector<SpectrumPoint> chi_plus;
    std::vector<SpectrumPoint> chi_minus;
};

CalibrationResult run_calibration(const ExperimentConfig& config, const RunOptions& opts = {});

enum class OutputFormat { Csv, Svg };

extern const char* const kCsvHeader;

std::string to_csv(const SweepResult& result);
std::string to_svg(const SweepResult& result);
std::string calibration_csv(const CalibrationResult& result);
void emit(const SweepResult& result, OutputFormat format, const std::string& path);
void write_text(const std::string& text, const std::string& path);

}  // namespace chiralkerr
