#include "chiralkerr/interferometer.hpp"

#include <cmath>
#include <sstream>

#include "chiralkerr/errors.hpp"

namespace chiralkerr {

namespace {

constexpr double kGainTol = -1e-9;

void require_length(double length) {
    if (!(length > 0.0)) throw DomainError("cell length must be > 0");
}

// Beam-splitter mode index of each port. Forward light enters P1/P3 and leaves
// P4/P2; backward light retraces the device through the transposed matrix.
int mode_of(Port p) {
    switch (p) {
        case Port::P1: return 0;
        case Port::P3: return 1;
        case Port::P4: return 0;
        case Port::P2: return 1;
    }
    return 0;
}

bool is_forward_input(Port p) { return p == Port::P1 || p == Port::P3; }

std::array<Port, 2> outputs_of(Port input) {
    if (is_forward_input(input)) return {Port::P4, Port::P2};
    return {Port::P1, Port::P3};
}

Port circulation_target(Port input) {
    return static_cast<Port>((static_cast<int>(input) + 1) % 4);
}

Matrix2c scattering(const Matrix2c& b, cplx a1, cplx a2) {
    Matrix2c d = Matrix2c::Zero();
    d(0, 0) = a1;
    d(1, 1) = a2;
    return b * d * b;
}

double min_contrast(const Matrix2c& b, cplx fwd, cplx bwd, cplx a2) {
    const Matrix2c sf = scattering(b, fwd, a2);
    const Matrix2c sb = scattering(b, bwd, a2).transpose();
    auto c = [](double to, double other) {
        const double s = to + other;
        return s > 0.0 ? (to - other) / s : 0.0;
    };
    // P1 -> P2, P3 -> P4 forward; P2 -> P3, P4 -> P1 backward.
    const double c12 = c(std::norm(sf(1, 0)), std::norm(sf(0, 0)));
    const double c34 = c(std::norm(sf(0, 1)), std::norm(sf(1, 1)));
    const double c23 = c(std::norm(sb(1, 1)), std::norm(sb(0, 1)));
    const double c41 = c(std::norm(sb(0, 0)), std::norm(sb(1, 0)));
    return std::min(std::min(c12, c34), std::min(c23, c41));
}

}  // namespace

double transmission(const Susceptibility& chi, double k_p, double length) {
    require_length(length);
    const double im = chi.value.imag();
    if (im < kGainTol) {
        std::ostringstream os;
        os << "gain in a passive medium: Im[chi] = " << im << " (" << to_string(chi.label) << ")";
        throw PhysicsViolation(os.str());
    }
    return std::min(1.0, std::exp(-k_p * length * im));
}

double phase_shift(const Susceptibility& chi, double k_p, double length) {
    require_length(length);
    return 0.5 * k_p * length * chi.value.real();
}

ArmResponse ArmResponse::from_susceptibility(const Susceptibility& chi, double k_p, double length) {
    return {std::sqrt(transmission(chi, k_p, length)), phase_shift(chi, k_p, length)};
}

cplx ArmResponse::amplitude() const { return std::polar(amplitude_transmission, phase); }

void ArmResponse::validate(const char* name) const {
    if (!(amplitude_transmission >= 0.0 && amplitude_transmission <= 1.0))
        throw ValidationError(std::string(name) + ".amplitude_transmission must lie in [0, 1]");
    if (!std::isfinite(phase)) throw ValidationError(std::string(name) + ".phase must be finite");
}

Matrix2c beam_splitter_matrix(const BeamSplitter& bs) {
    const double c = std::cos(bs.theta), s = std::sin(bs.theta);
    const cplx i(0.0, 1.0);
    Matrix2c b;
    b << c, i * std::polar(1.0, -bs.phi) * s,
         i * std::polar(1.0, bs.phi) * s, c;
    return b;
}

void SagnacDevice::validate() const {
    arm_l1_forward.validate("arm_l1_forward");
    arm_l1_backward.validate("arm_l1_backward");
    arm_l2.validate("arm_l2");
    if (arm_l2.amplitude_transmission != 1.0) throw ValidationError("arm_l2 must be lossless");
    if (!(cell_length > 0.0)) throw ValidationError("cell_length must be > 0");
}

const char* to_string(Port p) {
    switch (p) {
        case Port::P1: return "P1";
        case Port::P2: return "P2";
        case Port::P3: return "P3";
        case Port::P4: return "P4";
    }
    return "?";
}

std::array<cplx, 4> sagnac_port_amplitudes(const SagnacDevice& device, Port input, Injection direction) {
    if (is_forward_input(input) != (direction == Injection::Forward)) {
        std::ostringstream os;
        os << "port " << to_string(input) << " is not an input for "
           << (direction == Injection::Forward ? "forward" : "backward") << " injection";
        throw DomainError(os.str());
    }
    const Matrix2c b = beam_splitter_matrix(device.bs);
    const ArmResponse& l1 = direction == Injection::Forward ? device.arm_l1_forward : device.arm_l1_backward;
    Matrix2c s = scattering(b, l1.amplitude(), device.arm_l2.amplitude());
    if (direction == Injection::Backward) s.transposeInPlace();

    std::array<cplx, 4> out{};
    for (Port p : outputs_of(input))
        out[static_cast<int>(p)] = s(mode_of(p), mode_of(input));
    return out;
}

double isolation_ratio(double t_co, double t_cou) {
    if (!(t_co > 0.0) || !(t_cou > 0.0)) throw DomainError("isolation_ratio: transmissions must be > 0");
    return 10.0 * std::log10(t_co / t_cou);
}

double contrast(double t_max, double t_min) {
    if (!(t_min >= 0.0) || !(t_max >= t_min) || !(t_max > 0.0))
        throw DomainError("contrast: requires t_max >= t_min >= 0 and t_max > 0");
    return (t_max - t_min) / (t_max + t_min);
}

Port RoutingTable::dominant(Port input) const {
    const auto outs = outputs_of(input);
    const auto& row = fraction[static_cast<int>(input)];
    Port a = outs[0], b = outs[1];
    if (static_cast<int>(b) < static_cast<int>(a)) std::swap(a, b);
    return row[static_cast<int>(b)] > row[static_cast<int>(a)] ? b : a;
}

double RoutingTable::route_contrast(Port input, Port output) const {
    const auto outs = outputs_of(input);
    if (output != outs[0] && output != outs[1])
        throw DomainError(std::string("route_contrast: ") + to_string(output) + " is not an output of " +
                          to_string(input));
    const Port other = output == outs[0] ? outs[1] : outs[0];
    const auto& row = fraction[static_cast<int>(input)];
    const double to = row[static_cast<int>(output)], rest = row[static_cast<int>(other)];
    return to + rest > 0.0 ? (to - rest) / (to + rest) : 0.0;
}

double RoutingTable::min_circulation_contrast() const {
    double m = 1.0;
    for (Port p : {Port::P1, Port::P2, Port::P3, Port::P4})
        m = std::min(m, route_contrast(p, circulation_target(p)));
    return m;
}

RoutingTable routing_table(const SagnacDevice& device) {
    device.validate();
    RoutingTable t;
    for (Port p : {Port::P1, Port::P2, Port::P3, Port::P4}) {
        const auto amp =
            sagnac_port_amplitudes(device, p, is_forward_input(p) ? Injection::Forward : Injection::Backward);
        for (int k = 0; k < 4; ++k) t.fraction[static_cast<int>(p)][k] = std::norm(amp[k]);
    }
    return t;
}

OperatingPoint calibrate_operating_point(std::span<const SpectrumPoint> chi_plus,
                                         std::span<const SpectrumPoint> chi_minus,
                                         const SagnacDevice& device_template, double k_p,
                                         const CalibrationGrid& grid) {
    if (chi_plus.empty()) throw DomainError("calibrate_operating_point: detuning grid is empty");
    if (chi_plus.size() != chi_minus.size())
        throw DomainError("calibrate_operating_point: spectra differ in length");
    for (std::size_t i = 0; i < chi_plus.size(); ++i)
        if (chi_plus[i].probe_detuning != chi_minus[i].probe_detuning)
            throw DomainError("calibrate_operating_point: spectra are on different grids");
    if (grid.phi_steps < 1) throw DomainError("calibrate_operating_point: phi_steps must be >= 1");

    const Matrix2c b = beam_splitter_matrix(device_template.bs);
    const double len = device_template.cell_length;
    require_length(len);

    struct Best {
        double value = -2.0;
        double dp = 0.0;
        double phi = 0.0;
        bool better(double v, double d, double f) const {
            if (v != value) return v > value;
            if (std::abs(d) != std::abs(dp)) return std::abs(d) < std::abs(dp);
            return f < phi;
        }
    };
    Best best, ceiling;
    for (std::size_t i = 0; i < chi_plus.size(); ++i) {
        const double dp = chi_plus[i].probe_detuning;
        const cplx fwd = ArmResponse::from_susceptibility(chi_plus[i].chi, k_p, len).amplitude();
        const cplx bwd = ArmResponse::from_susceptibility(chi_minus[i].chi, k_p, len).amplitude();
        for (int j = 0; j < grid.phi_steps; ++j) {
            const double phi = kTwoPi * j / grid.phi_steps;
            const cplx a2 = std::polar(1.0, phi);
            const double v = min_contrast(b, fwd, bwd, a2);
            if (best.better(v, dp, phi)) best = {v, dp, phi};
            const double r = min_contrast(b, fwd, fwd, a2);
            if (ceiling.better(r, dp, phi)) ceiling = {r, dp, phi};
        }
    }

    OperatingPoint op;
    op.probe_detuning = best.dp;
    op.phi_l2 = best.phi;
    op.min_route_contrast = best.value;
    op.reciprocal_ceiling = ceiling.value;
    op.beats_reciprocity = best.value > ceiling.value + 1e-12;

    SagnacDevice dev = device_template;
    for (std::size_t i = 0; i < chi_plus.size(); ++i) {
        if (chi_plus[i].probe_detuning != best.dp) continue;
        dev.arm_l1_forward = ArmResponse::from_susceptibility(chi_plus[i].chi, k_p, len);
        dev.arm_l1_backward = ArmResponse::from_susceptibility(chi_minus[i].chi, k_p, len);
        break;
    }
    dev.arm_l2 = {1.0, best.phi};
    op.table = routing_table(dev);
    return op;
}

}  // namespace chiralkerr
