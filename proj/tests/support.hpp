#pragma once

#include <chiralkerr/atom.hpp>
#include <chiralkerr/constants.hpp>
#include <chiralkerr/experiment.hpp>
#include <chiralkerr/lindblad.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace cktest {

using chiralkerr::cplx;

inline double mhz(double f) { return chiralkerr::kTwoPi * 1e6 * f; }

inline chiralkerr::AtomParams default_atom() {
    return chiralkerr::parse_config("{}").atom;
}

inline chiralkerr::ExperimentConfig default_config() {
    return chiralkerr::parse_config("{}");
}

// Rotating-frame energies of levels 1..4 (0-based here).
struct Levels {
    double e[4];
};

inline Levels levels(double dp, double dc, double ds) { return {{0.0, dc, dc - dp, dc - dp + ds}}; }

// Coherence decay rates implied by the dissipator set.
inline double gamma_23(const chiralkerr::AtomParams& a) {
    return 0.5 * (a.gamma21 + a.gamma23) + 0.25 * a.gamma_transit + 0.25 * a.gamma31;
}
inline double gamma_12(const chiralkerr::AtomParams& a) { return gamma_23(a); }
inline double gamma_13(const chiralkerr::AtomParams& a) { return a.gamma31 + 0.5 * a.gamma_transit; }

// Probe alone on |3> <-> |2>: exact steady state from the coherence equation and
// the rate equations for the three populations involved.
inline cplx two_level_rho23(const chiralkerr::AtomParams& a, double rabi_p, double dp) {
    const double g = gamma_23(a);
    const double gam2 = a.gamma21 + a.gamma23;
    const double r = rabi_p * rabi_p * g / (2.0 * (g * g + dp * dp));
    // rho22 (r + gam2) = r rho33 ; gamma21 rho22 = (gt/2)(rho11 - rho33)
    const double k = (r + gam2) / r;                     // rho33 = k rho22
    const double m = k + 2.0 * a.gamma21 / a.gamma_transit;  // rho11 = m rho22
    const double rho22 = 1.0 / (1.0 + k + m);
    const double rho33 = k * rho22;
    const cplx i(0.0, 1.0);
    return i * (0.5 * rabi_p) * (rho33 - rho22) / cplx(g, dp);
}

// Weak probe with the coupling field on |1> <-> |2> and no switch field.
inline cplx lambda_rho23(const chiralkerr::AtomParams& a, double rabi_p, double rabi_c, double dp,
                         double dc) {
    const Levels lv = levels(dp, dc, 0.0);
    const cplx i(0.0, 1.0);
    const double g12 = gamma_12(a), g23 = gamma_23(a), g13 = gamma_13(a);
    const double d12 = lv.e[0] - lv.e[1];
    const double d23 = lv.e[1] - lv.e[2];
    const double d13 = lv.e[0] - lv.e[2];
    const double gam2 = a.gamma21 + a.gamma23;
    const double r = rabi_c * rabi_c * g12 / (2.0 * (g12 * g12 + d12 * d12));
    // rho11 = rho22 (r + gam2)/r ; rho33 = rho11 + 2 gamma23 rho22 / gt
    const double f11 = (r + gam2) / r;
    const double f33 = f11 + 2.0 * a.gamma23 / a.gamma_transit;
    const double rho22 = 1.0 / (1.0 + f11 + f33);
    const double rho11 = f11 * rho22;
    const double rho33 = f33 * rho22;
    const cplx rho12 = i * (0.5 * rabi_c) * (rho22 - rho11) / cplx(g12, d12);
    const cplx l13(g13, d13);
    const cplx lhs = cplx(g23, d23) + 0.25 * rabi_c * rabi_c / l13;
    const cplx rhs = i * (0.5 * rabi_p) * (rho33 - rho22) + 0.25 * rabi_c * rabi_p * rho12 / l13;
    return rhs / lhs;
}

// Discrete Hilbert transform (1/pi) P int f(x')/(x - x') dx' on a uniform grid,
// using nodes of opposite parity only.
inline std::vector<double> hilbert_transform(const std::vector<double>& f) {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = (i + 1) % 2; j < n; j += 2) {
            s += f[j] / (static_cast<double>(i) - static_cast<double>(j));
        }
        out[i] = 2.0 / chiralkerr::kPi * s;
    }
    return out;
}

struct Draw {
    chiralkerr::AtomParams atom;
    chiralkerr::DriveConfiguration drives;
};

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

// Rates and Rabi frequencies log-uniform in [lo, hi], detunings uniform in +-dmax.
inline Draw random_draw(std::mt19937_64& rng, double lo, double hi, double dmax) {
    std::uniform_real_distribution<double> det(-dmax, dmax);
    Draw d;
    d.atom = default_atom();
    d.atom.gamma21 = log_uniform(rng, lo, hi);
    d.atom.gamma23 = log_uniform(rng, lo, hi);
    d.atom.gamma41 = log_uniform(rng, lo, hi);
    d.atom.gamma43 = log_uniform(rng, lo, hi);
    d.atom.gamma31 = log_uniform(rng, lo, hi);
    d.atom.gamma_transit = log_uniform(rng, lo, hi);
    auto field = [&](double k) {
        chiralkerr::FieldDrive f;
        f.rabi = log_uniform(rng, lo, hi);
        f.detuning = det(rng);
        f.wavevector = k;
        return f;
    };
    d.drives.probe = field(7.9e6);
    d.drives.coupling = field(7.9e6);
    d.drives.switching = field(8.05e6);
    return d;
}

inline double max_rate(const Draw& d) {
    const auto& a = d.atom;
    return std::max({a.gamma21, a.gamma23, a.gamma41, a.gamma43, a.gamma31, a.gamma_transit});
}

inline chiralkerr::Liouvillian liouvillian(const Draw& d) {
    return chiralkerr::build_liouvillian(chiralkerr::build_hamiltonian(d.drives),
                                         chiralkerr::DissipatorSet::for_atom(d.atom));
}

}  // namespace cktest
