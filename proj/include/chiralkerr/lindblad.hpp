#pragma once

#include <string>
#include <vector>

#include "chiralkerr/atom.hpp"
#include "chiralkerr/types.hpp"

namespace chiralkerr {

struct DensityMatrix {
    Matrix4c matrix = Matrix4c::Zero();

    cplx trace() const { return matrix.trace(); }
    double hermiticity_error() const;
    double min_eigenvalue() const;
};

// Column-stacked: element (i, j) of rho sits at index i + 4 j.
inline constexpr int vec_index(int i, int j) { return i + 4 * j; }

Vector16c vectorize(const Matrix4c& m);
Matrix4c unvectorize(const Vector16c& v);

struct CollapseOperator {
    std::string label;  // e.g. "gamma21"
    double rate = 0.0;  // rad/s
    Matrix4c op = Matrix4c::Zero();  // scaled, ready to use
};

struct DissipatorSet {
    std::vector<CollapseOperator> ops;

    // Spontaneous decay, ground dephasing and transit exchange channels.
    static DissipatorSet for_atom(const AtomParams& atom);
};

struct Liouvillian {
    Matrix16c matrix = Matrix16c::Zero();
    // Labels and rates of the dissipators it was built from; used in diagnostics.
    std::vector<std::pair<std::string, double>> rates;

    double norm_inf() const;
};

Liouvillian build_liouvillian(const Hamiltonian4& h, const DissipatorSet& d);

// Adds the commutator with a diagonal energy shift; cheaper than a full rebuild
// when only detunings change.
void add_diagonal_shift(Liouvillian& l, const Eigen::Vector4d& energy_shift);

DensityMatrix steady_state(const Liouvillian& l);

// Steady states of base + commutator with diag(energy_shift), for many shifts.
// Works on the real 16-parameter form of Hermitian rho; steady_state uses it too.
class ShiftedSteadyState {
public:
    explicit ShiftedSteadyState(const Liouvillian& base);
    DensityMatrix solve(const Eigen::Vector4d& energy_shift) const;

private:
    Liouvillian base_;
    Eigen::Matrix<double, 16, 16> real_;
    Eigen::Matrix<double, 16, 1> offdiag_row_sum_;
};

DensityMatrix evolve(const DensityMatrix& rho0, const Liouvillian& l, double t);

}  // namespace chiralkerr
