#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <sstream>
#include <thread>

#include "chiralkerr/constants.hpp"
#include "chiralkerr/errors.hpp"
#include "chiralkerr/experiment.hpp"

namespace chiralkerr {

namespace {

// Runs f(i) for i in [0, n) on up to `threads` workers. Results land at their
// index; the lowest failing index is rethrown with context.
template <class T, class F, class Label>
std::vector<T> parallel_map(std::size_t n, int threads, F f, Label label) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < n; ++i)
        if (errors[i]) rethrow_with_context(errors[i], label(i));
    return out;
}

struct Point {
    double probe_detuning;
    double switch_power;
    double switch_detuning;
    double phi_l2;
};

Point base_point(const ExperimentConfig& c) {
    return {c.probe.detuning, c.switching.power, c.switching.detuning, c.geometry.phi_l2};
}

DriveConfiguration drives_at(const ExperimentConfig& c, const Point& p, Direction probe_dir) {
    DriveConfiguration d = c.drives(probe_dir);
    d.probe.detuning = p.probe_detuning;
    d.switching.detuning = p.switch_detuning;
    d.switching.rabi = c.switching.rabi_scale * rabi_from_power(p.switch_power, c.switching.beam_diameter,
                                                                c.switching.dipole);
    return d;
}

SweepRow evaluate(const ExperimentConfig& c, const Point& p, double axis) {
    const double k = c.probe_wavevector();
    const double len = c.geometry.cell_length;
    const Susceptibility plus = chi_doppler_averaged(drives_at(c, p, Direction::Forward), c.atom, c.quadrature);
    const Susceptibility minus = chi_doppler_averaged(drives_at(c, p, Direction::Backward), c.atom, c.quadrature);

    SweepRow row;
    row.axis = axis;
    row.t_co = transmission(plus, k, len);
    row.t_cou = transmission(minus, k, len);
    if (!(row.t_co > 0.0) || !(row.t_cou > 0.0))
        throw NumericalError("transmission underflows to zero; isolation is undefined");
    row.isolation_db = isolation_ratio(row.t_co, row.t_cou);
    row.phase_co = phase_shift(plus, k, len);
    row.phase_counter = phase_shift(minus, k, len);
    row.delta_phi = row.phase_co - p.phi_l2;

    SagnacDevice dev;
    dev.bs = {c.geometry.bs_theta, c.geometry.bs_phi};
    dev.arm_l1_forward = ArmResponse::from_susceptibility(plus, k, len);
    dev.arm_l1_backward = ArmResponse::from_susceptibility(minus, k, len);
    dev.arm_l2 = {1.0, p.phi_l2};
    dev.cell_length = len;
    const auto amp = sagnac_port_amplitudes(dev, Port::P1, Injection::Forward);
    row.p2_intensity = std::norm(amp[static_cast<int>(Port::P2)]);
    row.p4_intensity = std::norm(amp[static_cast<int>(Port::P4)]);
    return row;
}

void require_axis(const ExperimentConfig& c, std::initializer_list<SweepAxis> allowed, const char* runner) {
    for (SweepAxis a : allowed)
        if (c.sweep.axis == a) return;
    std::string names;
    for (SweepAxis a : allowed) names += (names.empty() ? "" : " or ") + std::string(to_string(a));
    throw ValidationError(std::string(runner) + " requires sweep.axis = " + names + "; got " +
                          to_string(c.sweep.axis));
}

SweepResult run(const ExperimentConfig& c, SweepKind kind, const RunOptions& opts, Point (*at)(Point, double)) {
    const std::vector<double> grid = c.sweep.grid();
    const Point base = base_point(c);
    SweepResult r;
    r.kind = kind;
    r.axis = c.sweep.axis;
    r.rows = parallel_map<SweepRow>(
        grid.size(), opts.threads, [&](std::size_t i) { return evaluate(c, at(base, grid[i]), grid[i]); },
        [&](std::size_t i) {
            std::ostringstream os;
            os << "grid point " << i << " (" << to_string(c.sweep.axis) << " = " << grid[i] << "): ";
            return os.str();
        });
    return r;
}

}  // namespace

SweepResult run_spectrum(const ExperimentConfig& config, const RunOptions& opts) {
    require_axis(config, {SweepAxis::ProbeDetuning}, "spectrum");
    config.validate();
    return run(config, SweepKind::Spectrum, opts, [](Point p, double x) {
        p.probe_detuning = x;
        return p;
    });
}

SweepResult run_isolation_sweep(const ExperimentConfig& config, const RunOptions& opts) {
    require_axis(config, {SweepAxis::SwitchPower}, "isolation sweep");
    config.validate();
    return run(config, SweepKind::Isolation, opts, [](Point p, double x) {
        p.probe_detuning = 0.0;
        p.switch_power = x;
        return p;
    });
}

SweepResult run_switch_detuning_sweep(const ExperimentConfig& config, const RunOptions& opts) {
    require_axis(config, {SweepAxis::SwitchDetuning}, "switch sweep");
    config.validate();
    return run(config, SweepKind::SwitchDetuning, opts, [](Point p, double x) {
        p.probe_detuning = 0.0;
        p.switch_detuning = x;
        return p;
    });
}

SweepResult run_phase_sweep(const ExperimentConfig& config, const RunOptions& opts) {
    require_axis(config, {SweepAxis::ProbeDetuning, SweepAxis::PhiL2}, "phase sweep");
    config.validate();
    if (config.sweep.axis == SweepAxis::PhiL2)
        return run(config, SweepKind::Phase, opts, [](Point p, double x) {
            p.phi_l2 = x;
            return p;
        });
    return run(config, SweepKind::Phase, opts, [](Point p, double x) {
        p.probe_detuning = x;
        return p;
    });
}

CalibrationResult run_calibration(const ExperimentConfig& config, const RunOptions& opts) {
    require_axis(config, {SweepAxis::ProbeDetuning}, "circulator calibration");
    config.validate();
    const std::vector<double> grid = config.sweep.grid();
    const std::size_t n = grid.size();
    const auto chis = parallel_map<Susceptibility>(
        2 * n, opts.threads,
        [&](std::size_t i) {
            DriveConfiguration d = config.drives(i < n ? Direction::Forward : Direction::Backward);
            d.probe.detuning = grid[i % n];
            return chi_doppler_averaged(d, config.atom, config.quadrature);
        },
        [&](std::size_t i) {
            std::ostringstream os;
            os << (i < n ? "co" : "counter") << " grid point " << i % n << " (probe_detuning = " << grid[i % n]
               << "): ";
            return os.str();
        });

    CalibrationResult r;
    for (std::size_t i = 0; i < n; ++i) {
        r.chi_plus.push_back({grid[i], chis[i]});
        r.chi_minus.push_back({grid[i], chis[n + i]});
    }
    SagnacDevice dev;
    dev.bs = {config.geometry.bs_theta, config.geometry.bs_phi};
    dev.cell_length = config.geometry.cell_length;
    r.point = calibrate_operating_point(r.chi_plus, r.chi_minus, dev, config.probe_wavevector(), config.calibration);
    return r;
}

const char* const kCsvHeader =
    "axis,T_co,T_cou,isolation_dB,phase_co_rad,phase_counter_rad,delta_phi_rad,p2_intensity,p4_intensity";

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

}  // namespace

std::string to_csv(const SweepResult& result) {
    std::string s = std::string(kCsvHeader) + "\n";
    for (const auto& r : result.rows) {
        for (double v : {r.axis, r.t_co, r.t_cou, r.isolation_db, r.phase_co, r.phase_counter, r.delta_phi,
                         r.p2_intensity, r.p4_intensity}) {
            s += num(v);
            s += ',';
        }
        s.back() = '\n';
    }
    return s;
}

std::string calibration_csv(const CalibrationResult& result) {
    const OperatingPoint& op = result.point;
    std::string s = "input_port,P1,P2,P3,P4,dominant_output,circulation_contrast,probe_detuning,phi_l2\n";
    for (Port in : {Port::P1, Port::P2, Port::P3, Port::P4}) {
        const auto& row = op.table.fraction[static_cast<int>(in)];
        const Port target = static_cast<Port>((static_cast<int>(in) + 1) % 4);
        s += to_string(in);
        for (double f : row) s += "," + num(f);
        s += std::string(",") + to_string(op.table.dominant(in));
        s += "," + num(op.table.route_contrast(in, target));
        s += "," + num(op.probe_detuning) + "," + num(op.phi_l2) + "\n";
    }
    return s;
}

std::string to_svg(const SweepResult& result) {
    constexpr double W = 640, H = 400, left = 70, right = 20, top = 30, bottom = 50;
    const bool phase = result.kind == SweepKind::Phase;
    struct Series {
        const char* name;
        const char* color;
        double SweepRow::*field;
    };
    const Series series[2] = {
        phase ? Series{"P2", "#1f77b4", &SweepRow::p2_intensity} : Series{"T_co", "#d62728", &SweepRow::t_co},
        phase ? Series{"P4", "#ff7f0e", &SweepRow::p4_intensity} : Series{"T_cou", "#1f77b4", &SweepRow::t_cou},
    };

    double xscale = 1.0;
    std::string xlabel;
    switch (result.axis) {
        case SweepAxis::ProbeDetuning: xscale = 1.0 / kMHz2pi; xlabel = "probe detuning (MHz)"; break;
        case SweepAxis::SwitchDetuning: xscale = 1.0 / kMHz2pi; xlabel = "switch detuning (MHz)"; break;
        case SweepAxis::SwitchPower: xscale = 1e3; xlabel = "switch power (mW)"; break;
        case SweepAxis::PhiL2: xlabel = "phi_L2 (rad)"; break;
    }
    double x0 = 0.0, x1 = 1.0;
    if (!result.rows.empty()) {
        x0 = result.rows.front().axis * xscale;
        x1 = result.rows.back().axis * xscale;
        if (x1 == x0) x1 = x0 + 1.0;
    }
    auto px = [&](double x) { return left + (x * xscale - x0) / (x1 - x0) * (W - left - right); };
    auto py = [&](double y) { return H - bottom - std::clamp(y, 0.0, 1.0) * (H - top - bottom); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
       << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right << "\" height=\""
       << H - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double y : {0.0, 0.5, 1.0})
        os << "<text x=\"" << left - 8 << "\" y=\"" << py(y) + 4 << "\" font-size=\"12\" text-anchor=\"end\">" << y
           << "</text>\n";
    os << "<text x=\"" << left << "\" y=\"" << H - bottom + 18 << "\" font-size=\"12\">" << num(x0) << "</text>\n"
       << "<text x=\"" << W - right << "\" y=\"" << H - bottom + 18 << "\" font-size=\"12\" text-anchor=\"end\">"
       << num(x1) << "</text>\n"
       << "<text x=\"" << (W + left - right) / 2 << "\" y=\"" << H - 12
       << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    int k = 0;
    for (const Series& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& r : result.rows) os << px(r.axis) << "," << py(r.*(s.field)) << " ";
        os << "\"/>\n";
        os << "<text x=\"" << left + 10 + 70 * k << "\" y=\"" << top - 10 << "\" font-size=\"12\" fill=\"" << s.color
           << "\">" << s.name << "</text>\n";
        ++k;
    }
    os << "</svg>\n";
    return os.str();
}

void write_text(const std::string& text, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError(path + ": " + std::strerror(errno));
    const std::size_t n = std::fwrite(text.data(), 1, text.size(), f);
    const int err = n == text.size() ? 0 : errno;
    if (std::fclose(f) != 0 || err != 0) throw IoError(path + ": " + std::strerror(err ? err : errno));
}

void emit(const SweepResult& result, OutputFormat format, const std::string& path) {
    write_text(format == OutputFormat::Csv ? to_csv(result) : to_svg(result), path);
}

}  // namespace chiralkerr
