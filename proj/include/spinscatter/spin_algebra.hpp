#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace spinscatter {

using cxd = std::complex<double>;

/// Spin operators for a single spin-s particle, hbar = 1.
///
/// All matrices are (2s+1)x(2s+1) and act on the descending-m basis
/// |s>, |s-1>, ..., |-s>. They satisfy [sx, sy] = i sz (and cyclic) and
/// sx^2 + sy^2 + sz^2 = s(s+1) I.
struct SpinOperatorSet {
    double s = 0.0;
    Eigen::MatrixXcd sx, sy, sz;

    int dim() const { return static_cast<int>(sz.rows()); }
};

/// Builds the spin operators from the ladder-operator matrix elements
/// S±|s,m> = sqrt(s(s+1) - m(m±1)) |s,m±1>.
/// Throws std::invalid_argument unless 2s is a non-negative integer.
SpinOperatorSet build_spin_operators(double s);

/// Orthonormal basis of the electron + two-MSQ spin sector with total
/// z-projection m_T = 2s - 1/2:
///   |i> = |-1/2>_e |s>_1 |s>_2
///   |±> = |+1/2>_e (|s>_1|s-1>_2 ± |s-1>_1|s>_2)/sqrt(2)
/// Columns of `vectors` hold |i>, |+>, |-> as vectors in the
/// 2(2s+1)^2-dimensional product space (electron slot slowest).
struct ThreeParticleBasis {
    double s = 0.0;
    std::array<std::string, 3> labels{"i", "+", "-"};
    Eigen::MatrixXcd vectors;
};

ThreeParticleBasis three_particle_basis(double s);

/// Embeds a single-particle operator into the tensor-product space of the
/// given spins (identity on every other slot; slot 0 varies slowest).
Eigen::MatrixXcd embed_operator(const std::vector<double>& spins,
                                const Eigen::MatrixXcd& op, int slot);

/// Diagonal of the total S^z operator in the product basis.
Eigen::VectorXd total_sz_diagonal(const std::vector<double>& spins);

/// Restricts a Hamiltonian on the product space of `spins` to the subspace
/// of total z-projection mT. The block is returned over product states in
/// their natural order, except for the electron + two equal spins space at
/// mT = 2s - 1/2, where the ThreeParticleBasis ordering {|i>,|+>,|->} is
/// used. Throws std::invalid_argument if fullH does not commute with the
/// total S^z (elementwise within 1e-10), or if no product state carries mT.
Eigen::MatrixXcd project_mT_block(const std::vector<double>& spins,
                                  const Eigen::MatrixXcd& fullH, double mT);

}  // namespace spinscatter
