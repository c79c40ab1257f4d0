#include "spinscatter/spin_algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace spinscatter {

namespace {

bool is_half_integer(double s) {
    return s >= 0.0 && std::abs(2.0 * s - std::round(2.0 * s)) < 1e-9;
}

int levels(double s) { return static_cast<int>(std::round(2.0 * s)) + 1; }

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

SpinOperatorSet build_spin_operators(double s) {
    if (!is_half_integer(s))
        throw std::invalid_argument("build_spin_operators: 2s must be a non-negative integer, got s=" +
                                    std::to_string(s));
    const int n = levels(s);
    Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(n, n);
    // row index i holds m = s - i; S+ raises m, i.e. maps row i to row i-1
    for (int i = 1; i < n; ++i) {
        const double m = s - i;
        sp(i - 1, i) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
    Eigen::MatrixXcd sm = sp.adjoint();
    SpinOperatorSet ops;
    ops.s = s;
    ops.sx = 0.5 * (sp + sm);
    ops.sy = cxd(0.0, -0.5) * (sp - sm);
    ops.sz = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) ops.sz(i, i) = s - i;
    return ops;
}

ThreeParticleBasis three_particle_basis(double s) {
    if (!is_half_integer(s) || s < 0.5)
        throw std::invalid_argument("three_particle_basis: s must be a half-integer >= 1/2");
    const int n = levels(s);
    const int dim = 2 * n * n;
    auto flat = [n](int ie, int i1, int i2) { return (ie * n + i1) * n + i2; };

    ThreeParticleBasis basis;
    basis.s = s;
    basis.vectors = Eigen::MatrixXcd::Zero(dim, 3);
    const double r = 1.0 / std::sqrt(2.0);
    basis.vectors(flat(1, 0, 0), 0) = 1.0;  // |i> = |-1/2>|s>|s>
    basis.vectors(flat(0, 0, 1), 1) = r;    // |+>
    basis.vectors(flat(0, 1, 0), 1) = r;
    basis.vectors(flat(0, 0, 1), 2) = r;    // |->
    basis.vectors(flat(0, 1, 0), 2) = -r;
    return basis;
}

Eigen::MatrixXcd embed_operator(const std::vector<double>& spins,
                                const Eigen::MatrixXcd& op, int slot) {
    if (slot < 0 || slot >= static_cast<int>(spins.size()))
        throw std::invalid_argument("embed_operator: slot out of range");
    if (op.rows() != levels(spins[slot]) || op.cols() != op.rows())
        throw std::invalid_argument("embed_operator: operator dimension does not match spin");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int p = 0; p < static_cast<int>(spins.size()); ++p) {
        if (p == slot)
            out = kron(out, op);
        else
            out = kron(out, Eigen::MatrixXcd::Identity(levels(spins[p]), levels(spins[p])));
    }
    return out;
}

Eigen::VectorXd total_sz_diagonal(const std::vector<double>& spins) {
    int dim = 1;
    for (double s : spins) dim *= levels(s);
    Eigen::VectorXd mtot = Eigen::VectorXd::Zero(dim);
    int stride = dim;
    for (double s : spins) {
        const int n = levels(s);
        stride /= n;
        for (int idx = 0; idx < dim; ++idx) {
            const int level = (idx / stride) % n;
            mtot(idx) += s - level;
        }
    }
    return mtot;
}

Eigen::MatrixXcd project_mT_block(const std::vector<double>& spins,
                                  const Eigen::MatrixXcd& fullH, double mT) {
    int dim = 1;
    for (double s : spins) dim *= levels(s);
    if (fullH.rows() != dim || fullH.cols() != dim)
        throw std::invalid_argument("project_mT_block: Hamiltonian dimension does not match spins");

    const Eigen::VectorXd mtot = total_sz_diagonal(spins);
    const Eigen::MatrixXcd sz = mtot.asDiagonal().toDenseMatrix().cast<cxd>();
    const double comm = (fullH * sz - sz * fullH).cwiseAbs().maxCoeff();
    if (comm > 1e-10)
        throw std::invalid_argument(
            "project_mT_block: Hamiltonian does not commute with total S^z "
            "(max |[H,Sz]| = " + std::to_string(comm) + "); axial symmetry required");

    // the electron + two equal MSQs sector at mT = 2s - 1/2 is returned in
    // the {|i>,|+>,|->} basis; all other cases use raw product ordering
    if (spins.size() == 3 && spins[0] == 0.5 && spins[1] == spins[2] && spins[1] >= 0.5 &&
        std::abs(mT - (2.0 * spins[1] - 0.5)) < 1e-9) {
        const ThreeParticleBasis basis = three_particle_basis(spins[1]);
        return basis.vectors.adjoint() * fullH * basis.vectors;
    }

    std::vector<int> idx;
    for (int i = 0; i < dim; ++i)
        if (std::abs(mtot(i) - mT) < 1e-9) idx.push_back(i);
    if (idx.empty())
        throw std::invalid_argument("project_mT_block: no product state carries the requested mT");

    Eigen::MatrixXcd block(idx.size(), idx.size());
    for (size_t a = 0; a < idx.size(); ++a)
        for (size_t b = 0; b < idx.size(); ++b) block(a, b) = fullH(idx[a], idx[b]);
    return block;
}

}  // namespace spinscatter
