#include "chiralkerr/lindblad.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "chiralkerr/errors.hpp"

namespace chiralkerr {

namespace {

constexpr double kRcondFloor = 1e-12;
constexpr double kPivotScreen = 1e-6;
constexpr double kResidualTol = 1e-10;
constexpr double kPositivityTol = -1e-9;

using RealMatrix16 = Eigen::Matrix<double, 16, 16>;
using RealVector16 = Eigen::Matrix<double, 16, 1>;

struct Param {
    enum Kind { Population, Real, Imag } kind;
    int i, j;
};

// Populations first so that row 3 is the |4><4| equation.
constexpr Param kParams[16] = {
    {Param::Population, 0, 0}, {Param::Population, 1, 1}, {Param::Population, 2, 2},
    {Param::Population, 3, 3}, {Param::Real, 0, 1},       {Param::Imag, 0, 1},
    {Param::Real, 0, 2},       {Param::Imag, 0, 2},       {Param::Real, 0, 3},
    {Param::Imag, 0, 3},       {Param::Real, 1, 2},       {Param::Imag, 1, 2},
    {Param::Real, 1, 3},       {Param::Imag, 1, 3},       {Param::Real, 2, 3},
    {Param::Imag, 2, 3},
};

Matrix16c kron(const Matrix4c& a, const Matrix4c& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

Matrix4c projector(int i, int j) {
    Matrix4c m = Matrix4c::Zero();
    m(i, j) = 1.0;
    return m;
}

// The condition estimate costs more than the factorization, so it only runs
// when the pivots already span many decades.
bool well_conditioned(const Eigen::PartialPivLU<RealMatrix16>& lu) {
    const auto d = lu.matrixLU().diagonal().cwiseAbs();
    const double lo = d.minCoeff(), hi = d.maxCoeff();
    if (!(lo > 0.0)) return false;
    if (lo > kPivotScreen * hi) return true;
    return lu.rcond() >= kRcondFloor;
}

std::string zero_rate_report(const Liouvillian& l) {
    std::ostringstream os;
    bool any = false;
    for (const auto& [label, rate] : l.rates) {
        if (rate == 0.0) {
            os << (any ? ", " : "") << label;
            any = true;
        }
    }
    if (!any) return "no dissipator rate is zero";
    return "zero rates: " + os.str();
}

}  // namespace

double DensityMatrix::hermiticity_error() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(matrix, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Vector16c vectorize(const Matrix4c& m) {
    Vector16c v;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) v(vec_index(i, j)) = m(i, j);
    return v;
}

Matrix4c unvectorize(const Vector16c& v) {
    Matrix4c m;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) m(i, j) = v(vec_index(i, j));
    return m;
}

DissipatorSet DissipatorSet::for_atom(const AtomParams& a) {
    DissipatorSet d;
    auto add = [&d](const char* label, double rate, double share, const Matrix4c& shape) {
        if (rate < 0.0) throw ValidationError(std::string("atom.") + label + " must be >= 0");
        d.ops.push_back({label, rate, std::sqrt(share * rate) * shape});
    };
    // |1>=0, |2>=1, |3>=2, |4>=3
    add("gamma21", a.gamma21, 1.0, projector(0, 1));
    add("gamma23", a.gamma23, 1.0, projector(2, 1));
    add("gamma41", a.gamma41, 1.0, projector(0, 3));
    add("gamma43", a.gamma43, 1.0, projector(2, 3));
    add("gamma31", a.gamma31, 0.5, projector(0, 0) - projector(2, 2));
    add("gamma_transit", a.gamma_transit, 0.5, projector(0, 2));
    add("gamma_transit", a.gamma_transit, 0.5, projector(2, 0));
    return d;
}

double Liouvillian::norm_inf() const {
    return matrix.cwiseAbs().rowwise().sum().maxCoeff();
}

Liouvillian build_liouvillian(const Hamiltonian4& h, const DissipatorSet& d) {
    const Matrix4c& H = h.matrix;
    const double scale = H.cwiseAbs().maxCoeff();
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-14 * scale)
        throw ValidationError("hamiltonian is not hermitian");

    const Matrix4c id = Matrix4c::Identity();
    const cplx mi(0.0, -1.0);
    Liouvillian l;
    l.matrix = mi * (kron(id, H) - kron(H.transpose(), id));
    for (const auto& c : d.ops) {
        const Matrix4c cdc = c.op.adjoint() * c.op;
        l.matrix += kron(c.op.conjugate(), c.op) - 0.5 * (kron(id, cdc) + kron(cdc.transpose(), id));
        l.rates.emplace_back(c.label, c.rate);
    }
    return l;
}

void add_diagonal_shift(Liouvillian& l, const Eigen::Vector4d& e) {
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) {
            const int k = vec_index(i, j);
            l.matrix(k, k) += cplx(0.0, -(e(i) - e(j)));
        }
}

ShiftedSteadyState::ShiftedSteadyState(const Liouvillian& base) : base_(base) {
    const Matrix16c& L = base.matrix;
    for (int p = 0; p < 16; ++p) {
        const Param& cp = kParams[p];
        Vector16c col;
        if (cp.kind == Param::Population)
            col = L.col(vec_index(cp.i, cp.i));
        else if (cp.kind == Param::Real)
            col = L.col(vec_index(cp.i, cp.j)) + L.col(vec_index(cp.j, cp.i));
        else
            col = cplx(0.0, 1.0) * (L.col(vec_index(cp.i, cp.j)) - L.col(vec_index(cp.j, cp.i)));
        for (int q = 0; q < 16; ++q) {
            const Param& rq = kParams[q];
            const cplx v = col(vec_index(rq.i, rq.j));
            real_(q, p) = rq.kind == Param::Imag ? v.imag() : v.real();
        }
    }
    for (int k = 0; k < 16; ++k) offdiag_row_sum_(k) = L.row(k).cwiseAbs().sum() - std::abs(L(k, k));
}

DensityMatrix ShiftedSteadyState::solve(const Eigen::Vector4d& e) const {
    // rho_ij picks up -i (e_i - e_j) rho_ij: a rotation of its (Re, Im) pair.
    RealMatrix16 r = real_;
    double lnorm = 0.0;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) {
            const int k = vec_index(i, j);
            lnorm = std::max(lnorm, offdiag_row_sum_(k) + std::abs(base_.matrix(k, k) - cplx(0.0, e(i) - e(j))));
        }
    for (int p = 4; p < 16; p += 2) {
        const double w = e(kParams[p].i) - e(kParams[p].j);
        r(p, p + 1) += w;
        r(p + 1, p) -= w;
    }
    const double s = lnorm > 0.0 ? lnorm : 1.0;

    // Swap the |4><4| equation for s * Tr(rho) = s.
    RealMatrix16 a = r;
    a.row(3).setZero();
    a.block<1, 4>(3, 0).setConstant(s);
    RealVector16 b = RealVector16::Zero();
    b(3) = s;

    Matrix4c m;
    Eigen::PartialPivLU<RealMatrix16> lu(a);
    if (well_conditioned(lu)) {
        RealVector16 x = lu.solve(b);
        x += lu.solve(b - a * x);
        x /= x.head<4>().sum();
        for (int p = 0; p < 16; ++p) {
            const Param& cp = kParams[p];
            if (cp.kind == Param::Population)
                m(cp.i, cp.i) = x(p);
            else if (cp.kind == Param::Real)
                m(cp.i, cp.j).real(x(p));
            else
                m(cp.i, cp.j).imag(x(p));
        }
        for (int j = 0; j < 4; ++j)
            for (int i = j + 1; i < 4; ++i) m(i, j) = std::conj(m(j, i));

        const RealVector16 res = r * x;
        double residual = res.head<4>().cwiseAbs().maxCoeff();
        for (int p = 4; p < 16; p += 2) residual = std::max(residual, std::hypot(res(p), res(p + 1)));
        if (!(residual <= kResidualTol * lnorm)) {
            std::ostringstream os;
            os << "steady state did not converge: residual " << residual << " > " << kResidualTol * lnorm;
            throw NumericalError(os.str());
        }
    } else {
        Liouvillian l = base_;
        add_diagonal_shift(l, e);
        Eigen::JacobiSVD<Matrix16c> svd(l.matrix, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double tol = sv(0) * 16.0 * Eigen::NumTraits<double>::epsilon() * 10.0;
        int null_dim = 0;
        for (int k = 0; k < 16; ++k)
            if (sv(k) <= tol) ++null_dim;
        if (null_dim != 1) {
            std::ostringstream os;
            os << "steady state is not unique: null space dimension " << null_dim << " ("
               << zero_rate_report(l) << ")";
            throw DegenerateSteadyState(os.str());
        }
        m = unvectorize(svd.matrixV().col(15));
        m = 0.5 * (m + m.adjoint()).eval();
        const double tr = m.trace().real();
        if (!(std::abs(tr) > 0.0) || !std::isfinite(tr))
            throw NumericalError("steady state has vanishing trace");
        m /= tr;
        const double residual = (l.matrix * vectorize(m)).cwiseAbs().maxCoeff();
        if (!(residual <= kResidualTol * lnorm)) {
            std::ostringstream os;
            os << "steady state did not converge: residual " << residual << " > " << kResidualTol * lnorm;
            throw NumericalError(os.str());
        }
    }

    DensityMatrix rho;
    rho.matrix = m;
    // rho - tol*I positive definite means the smallest eigenvalue clears tol.
    const Matrix4c shifted = m - kPositivityTol * Matrix4c::Identity();
    if (Eigen::LLT<Matrix4c>(shifted).info() != Eigen::Success) {
        const double lam = rho.min_eigenvalue();
        if (lam < kPositivityTol) {
            std::ostringstream os;
            os << "steady state is not positive: smallest eigenvalue " << lam;
            throw NumericalError(os.str());
        }
    }
    return rho;
}

DensityMatrix steady_state(const Liouvillian& l) {
    return ShiftedSteadyState(l).solve(Eigen::Vector4d::Zero());
}

DensityMatrix evolve(const DensityMatrix& rho0, const Liouvillian& l, double t) {
    if (!(t >= 0.0)) throw DomainError("evolve: t must be >= 0");
    const Matrix16c prop = (l.matrix * t).exp();
    DensityMatrix out;
    out.matrix = unvectorize(prop * vectorize(rho0.matrix));
    return out;
}

}  // namespace chiralkerr
