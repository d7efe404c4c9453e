#include "chiralkerr/atom.hpp"

#include <cmath>
#include <string>

#include "chiralkerr/constants.hpp"
#include "chiralkerr/errors.hpp"

namespace chiralkerr {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

void AtomParams::validate() const {
    require(finite_nonneg(gamma21), "atom.gamma21 must be >= 0");
    require(finite_nonneg(gamma23), "atom.gamma23 must be >= 0");
    require(finite_nonneg(gamma41), "atom.gamma41 must be >= 0");
    require(finite_nonneg(gamma43), "atom.gamma43 must be >= 0");
    require(finite_nonneg(gamma31), "atom.gamma31 must be >= 0");
    require(std::isfinite(gamma_transit) && gamma_transit > 0.0, "atom.gamma_transit must be > 0");
    require(std::isfinite(mu23) && mu23 > 0.0, "atom.mu23 must be > 0");
    require(finite_nonneg(density_n0), "atom.density_n0 must be >= 0");
    require(std::isfinite(mass) && mass > 0.0, "atom.mass must be > 0");
    require(std::isfinite(temperature) && temperature > 0.0, "atom.temperature must be > 0");
}

void FieldDrive::validate(const char* name) const {
    std::string n(name);
    require(finite_nonneg(rabi), n + ".rabi must be >= 0");
    require(std::isfinite(detuning), n + ".detuning must be finite");
    require(std::isfinite(wavevector) && wavevector > 0.0, n + ".wavevector must be > 0");
    require(direction == Direction::Forward || direction == Direction::Backward,
            n + ".direction must be +1 or -1");
}

bool DriveConfiguration::copropagating() const {
    return probe.direction == coupling.direction && coupling.direction == switching.direction;
}

bool DriveConfiguration::counterpropagating() const {
    return probe.direction != coupling.direction && probe.direction != switching.direction;
}

DriveConfiguration DriveConfiguration::all_flipped() const {
    DriveConfiguration out = *this;
    out.probe.direction = flipped(probe.direction);
    out.coupling.direction = flipped(coupling.direction);
    out.switching.direction = flipped(switching.direction);
    return out;
}

void DriveConfiguration::validate() const {
    probe.validate("probe");
    coupling.validate("coupling");
    switching.validate("switch");
}

DriveConfiguration doppler_shifted(const DriveConfiguration& config, double v) {
    DriveConfiguration out = config;
    for (FieldDrive* f : {&out.probe, &out.coupling, &out.switching})
        f->detuning -= sign(f->direction) * f->wavevector * v;
    return out;
}

Hamiltonian4 build_hamiltonian(const DriveConfiguration& config) {
    const double dp = config.probe.detuning;
    const double dc = config.coupling.detuning;
    const double ds = config.switching.detuning;
    Hamiltonian4 h;
    Matrix4c& m = h.matrix;
    m(1, 1) = dc;
    m(2, 2) = dc - dp;
    m(3, 3) = dc - dp + ds;
    m(0, 1) = m(1, 0) = -0.5 * config.coupling.rabi;
    m(1, 2) = m(2, 1) = -0.5 * config.probe.rabi;
    m(2, 3) = m(3, 2) = -0.5 * config.switching.rabi;
    return h;
}

double field_amplitude(double power, double beam_diameter) {
    if (!(beam_diameter > 0.0)) throw DomainError("beam diameter must be > 0");
    if (!(power >= 0.0)) throw DomainError("power must be >= 0");
    const double r = 0.5 * beam_diameter;
    return std::sqrt(2.0 * power / (kPi * r * r * kConstants.c * kConstants.eps0));
}

double rabi_from_power(double power, double beam_diameter, double dipole) {
    if (!(dipole > 0.0)) throw DomainError("dipole moment must be > 0");
    return dipole / kConstants.hbar * field_amplitude(power, beam_diameter);
}

}  // namespace chiralkerr
