#pragma once

#include <array>
#include <span>
#include <string>

#include "chiralkerr/constants.hpp"
#include "chiralkerr/doppler.hpp"
#include "chiralkerr/types.hpp"

namespace chiralkerr {

double transmission(const Susceptibility& chi, double k_p, double length);
double phase_shift(const Susceptibility& chi, double k_p, double length);

struct ArmResponse {
    double amplitude_transmission = 1.0;
    double phase = 0.0;

    static ArmResponse from_susceptibility(const Susceptibility& chi, double k_p, double length);
    cplx amplitude() const;
    void validate(const char* name) const;
};

struct BeamSplitter {
    double theta = kPi / 4.0;
    double phi = 0.0;
};

Matrix2c beam_splitter_matrix(const BeamSplitter& bs);

struct SagnacDevice {
    BeamSplitter bs;
    ArmResponse arm_l1_forward;
    ArmResponse arm_l1_backward;
    ArmResponse arm_l2;
    double cell_length = 0.1;

    void validate() const;
};

enum class Port { P1 = 0, P2 = 1, P3 = 2, P4 = 3 };
enum class Injection { Forward, Backward };

const char* to_string(Port p);

// Output amplitude at every port; ports on the input side read zero.
std::array<cplx, 4> sagnac_port_amplitudes(const SagnacDevice& device, Port input, Injection direction);

double isolation_ratio(double t_co, double t_cou);
double contrast(double t_max, double t_min);

struct RoutingTable {
    // fraction[in][out]
    std::array<std::array<double, 4>, 4> fraction{};

    Port dominant(Port input) const;
    // Signed: (T_to - T_other) / (T_to + T_other), other being the remaining output port.
    double route_contrast(Port input, Port output) const;
    double min_circulation_contrast() const;
};

RoutingTable routing_table(const SagnacDevice& device);

struct OperatingPoint {
    double probe_detuning = 0.0;
    double phi_l2 = 0.0;
    RoutingTable table;
    double min_route_contrast = 0.0;
    // Best value reachable with a reciprocal arm (backward response forced equal to forward).
    double reciprocal_ceiling = 0.0;
    bool beats_reciprocity = false;
};

struct CalibrationGrid {
    int phi_steps = 720;
};

OperatingPoint calibrate_operating_point(std::span<const SpectrumPoint> chi_plus,
                                         std::span<const SpectrumPoint> chi_minus,
                                         const SagnacDevice& device_template, double k_p,
                                         const CalibrationGrid& grid = {});

}  // namespace chiralkerr
