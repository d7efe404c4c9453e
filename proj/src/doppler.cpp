#include "chiralkerr/doppler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chiralkerr/constants.hpp"
#include "chiralkerr/errors.hpp"
#include "chiralkerr/lindblad.hpp"

namespace chiralkerr {

namespace {

// Hermite nodes by Newton iteration on the orthonormal recurrence.
void gauss_hermite_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
    constexpr double pim4 = 0.7511255444649425;  // pi^(-1/4)
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    double z = 0.0, pp = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * x[1];
        else
            z = 2.0 * z - x[i - 2];
        for (int it = 0; it < 200; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = w[n - 1 - i] = 2.0 / (pp * pp);
    }
    std::reverse(x.begin(), x.end());
    std::reverse(w.begin(), w.end());
}

void normalize(std::vector<double>& w) {
    double s = 0.0;
    for (double v : w) s += v;
    for (double& v : w) v /= s;
}


}  // namespace

VelocityDistribution VelocityDistribution::for_atom(const AtomParams& atom) {
    return {std::sqrt(2.0 * kConstants.kB * atom.temperature / atom.mass), atom.density_n0};
}

double VelocityDistribution::weight(double v) const {
    return n0 * std::exp(-(v * v) / (u * u)) / (u * std::sqrt(kPi));
}

void QuadratureScheme::validate() const {
    if (node_count < 8) throw ValidationError("quadrature.node_count must be >= 8");
    if (method == QuadratureMethod::Trapezoid && !(span >= 4.0))
        throw ValidationError("quadrature.span must be >= 4 for trapezoid");
}

QuadratureScheme QuadratureScheme::gauss_hermite(int n) {
    return {QuadratureMethod::GaussHermite, n, 0.0};
}

QuadratureScheme QuadratureScheme::trapezoid(int n, double span) {
    return {QuadratureMethod::Trapezoid, n, span};
}

QuadratureRule quadrature_rule(const QuadratureScheme& scheme) {
    scheme.validate();
    QuadratureRule r;
    const int n = scheme.node_count;
    if (scheme.method == QuadratureMethod::GaussHermite) {
        gauss_hermite_nodes(n, r.nodes, r.weights);
    } else {
        r.nodes.resize(n);
        r.weights.resize(n);
        const double h = 2.0 * scheme.span / (n - 1);
        for (int k = 0; k < n; ++k) {
            const double x = -scheme.span + h * k;
            r.nodes[k] = x;
            r.weights[k] = h * std::exp(-x * x) * ((k == 0 || k == n - 1) ? 0.5 : 1.0);
        }
    }
    normalize(r.weights);
    return r;
}

const char* to_string(PropagationLabel label) {
    switch (label) {
        case PropagationLabel::Co: return "co";
        case PropagationLabel::Counter: return "counter";
        case PropagationLabel::Custom: return "custom";
    }
    return "custom";
}

PropagationLabel label_for(const DriveConfiguration& config) {
    if (config.copropagating()) return PropagationLabel::Co;
    if (config.counterpropagating()) return PropagationLabel::Counter;
    return PropagationLabel::Custom;
}

double chi_prefactor(const AtomParams& atom, double probe_rabi) {
    if (!(probe_rabi > 0.0)) throw DomainError("probe Rabi frequency must be > 0");
    return 2.0 * atom.density_n0 * atom.mu23 * atom.mu23 / (kConstants.hbar * kConstants.eps0 * probe_rabi);
}

cplx chi_velocity_class(const DriveConfiguration& config, const AtomParams& atom, double v) {
    const double pre = chi_prefactor(atom, config.probe.rabi);
    const Liouvillian l = build_liouvillian(build_hamiltonian(doppler_shifted(config, v)),
                                            DissipatorSet::for_atom(atom));
    return pre * steady_state(l).matrix(1, 2);
}

Susceptibility chi_doppler_averaged(const DriveConfiguration& config, const AtomParams& atom,
                                    const QuadratureScheme& quad) {
    const double pre = chi_prefactor(atom, config.probe.rabi);
    const QuadratureRule rule = quadrature_rule(quad);
    const double u = VelocityDistribution::for_atom(atom).u;
    const ShiftedSteadyState solver(build_liouvillian(build_hamiltonian(config), DissipatorSet::for_atom(atom)));

    const double sp = sign(config.probe.direction) * config.probe.wavevector;
    const double sc = sign(config.coupling.direction) * config.coupling.wavevector;
    const double ss = sign(config.switching.direction) * config.switching.wavevector;

    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double v = u * rule.nodes[k];
        // Shift of the diagonal (0, dc, dc - dp, dc - dp + ds) when each detuning loses dir*k*v.
        const double dc = -sc * v, dp = -sp * v, ds = -ss * v;
        try {
            acc += rule.weights[k] * solver.solve(Eigen::Vector4d(0.0, dc, dc - dp, dc - dp + ds)).matrix(1, 2);
        } catch (const NumericalError&) {
            std::ostringstream os;
            os << "velocity node " << k << " (v = " << v << " m/s): ";
            rethrow_with_context(std::current_exception(), os.str());
        }
    }
    return {pre * acc, label_for(config)};
}

std::vector<SpectrumPoint> spectrum(const DriveConfiguration& config, const AtomParams& atom,
                                    const QuadratureScheme& quad, std::span<const double> grid) {
    if (grid.empty()) throw DomainError("spectrum: detuning grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("spectrum: detuning grid must be strictly increasing");
    std::vector<SpectrumPoint> out;
    out.reserve(grid.size());
    DriveConfiguration c = config;
    for (double d : grid) {
        c.probe.detuning = d;
        out.push_back({d, chi_doppler_averaged(c, atom, quad)});
    }
    return out;
}

}  // namespace chiralkerr
