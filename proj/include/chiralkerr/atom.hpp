#pragma once

#include "chiralkerr/types.hpp"

namespace chiralkerr {

struct AtomParams {
    double gamma21 = 0.0;        // rad/s, |2> -> |1>
    double gamma23 = 0.0;        // rad/s, |2> -> |3>
    double gamma41 = 0.0;        // rad/s, |4> -> |1>
    double gamma43 = 0.0;        // rad/s, |4> -> |3>
    double gamma31 = 0.0;        // rad/s, ground-state dephasing
    double gamma_transit = 0.0;  // rad/s, ground population exchange
    double mu23 = 0.0;           // C m
    double density_n0 = 0.0;     // m^-3
    double mass = 0.0;           // kg
    double temperature = 0.0;    // K

    // Throws ValidationError naming the first violated field.
    void validate() const;
};

enum class Direction : int { Forward = 1, Backward = -1 };

inline double sign(Direction d) { return static_cast<double>(static_cast<int>(d)); }
inline Direction flipped(Direction d) { return d == Direction::Forward ? Direction::Backward : Direction::Forward; }

struct FieldDrive {
    double rabi = 0.0;        // rad/s
    double detuning = 0.0;    // rad/s, laser minus atom
    double wavevector = 1.0;  // rad/m
    Direction direction = Direction::Forward;

    void validate(const char* name) const;
};

struct DriveConfiguration {
    FieldDrive probe;     // |3> <-> |2>
    FieldDrive coupling;  // |1> <-> |2>
    FieldDrive switching; // |3> <-> |4>

    bool copropagating() const;
    bool counterpropagating() const;
    DriveConfiguration all_flipped() const;
    void validate() const;
};

struct Hamiltonian4 {
    Matrix4c matrix = Matrix4c::Zero();  // rad/s
};

// Detunings become delta - direction * k * v.
DriveConfiguration doppler_shifted(const DriveConfiguration& config, double v);

Hamiltonian4 build_hamiltonian(const DriveConfiguration& config);

// Omega = (mu/hbar) * sqrt(2 P / (pi (d/2)^2 c eps0))
double rabi_from_power(double power, double beam_diameter, double dipole);

// Peak field amplitude (V/m) used by rabi_from_power.
double field_amplitude(double power, double beam_diameter);

}  // namespace chiralkerr
