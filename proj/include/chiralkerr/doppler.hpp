#pragma once

#include <span>
#include <vector>

#include "chiralkerr/atom.hpp"
#include "chiralkerr/types.hpp"

namespace chiralkerr {

struct VelocityDistribution {
    double u = 0.0;   // most probable speed, m/s
    double n0 = 0.0;  // m^-3

    static VelocityDistribution for_atom(const AtomParams& atom);
    double weight(double v) const;  // N(v), m^-4 s
};

enum class QuadratureMethod { GaussHermite, Trapezoid };

struct QuadratureScheme {
    QuadratureMethod method = QuadratureMethod::Trapezoid;
    int node_count = 10001;
    double span = 5.0;  // half-width in units of u, trapezoid only

    void validate() const;
    static QuadratureScheme gauss_hermite(int n);
    static QuadratureScheme trapezoid(int n, double span);
};

// Nodes x (units of u) and weights for the average of f over exp(-x^2)/sqrt(pi).
// Weights sum to one.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule quadrature_rule(const QuadratureScheme& scheme);

enum class PropagationLabel { Co, Counter, Custom };

const char* to_string(PropagationLabel label);

struct Susceptibility {
    cplx value{0.0, 0.0};
    PropagationLabel label = PropagationLabel::Custom;
};

PropagationLabel label_for(const DriveConfiguration& config);

// rho23 of one velocity class, converted with the density of the atom.
cplx chi_velocity_class(const DriveConfiguration& config, const AtomParams& atom, double v);

Susceptibility chi_doppler_averaged(const DriveConfiguration& config, const AtomParams& atom,
                                    const QuadratureScheme& quad);

struct SpectrumPoint {
    double probe_detuning;  // rad/s
    Susceptibility chi;
};

std::vector<SpectrumPoint> spectrum(const DriveConfiguration& config, const AtomParams& atom,
                                    const QuadratureScheme& quad, std::span<const double> grid);

// chi = 2 n0 mu^2 rho23 / (hbar eps0 Omega_p)
double chi_prefactor(const AtomParams& atom, double probe_rabi);

}  // namespace chiralkerr
