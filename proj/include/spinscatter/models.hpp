#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

#include "spinscatter/scattering_engine.hpp"

namespace spinscatter {

/// Two spin-s moments with uniaxial anisotropy D1, D2, Heisenberg-like
/// exchange J12x/J12z between them, and a contact coupling J to the
/// conduction electron. All couplings in meV.
struct MolecularParams {
    double s = 0.5;
    double D1 = 0.0, D2 = 0.0;
    double J12x = 0.0, J12z = 0.0;
    double J = 0.0;
};

/// Two-site Anderson model: inter-site hopping t_h, on-site Coulomb U1, U2,
/// level detuning eps = eps_2 - eps_1.
struct AndersonParams {
    double t_h = 0.0;
    double U1 = 0.0, U2 = 0.0;
    double eps = 0.0;
};

/// Contact exchange spread over the two ends of the scattering region:
/// eps_1 = J S_e.S_1, eps_N = J S_e.S_2 (zero in between), expressed in the
/// channel basis {|i>,|+>,|->} by projecting the full three-particle
/// operators onto the m_T = 2s - 1/2 block. Requires N >= 2.
ScatteringModel kondo_contact_spread(double s, double J, int N, double t);

/// Matrix of the combined contact exchange J S_e.S_12 on {|i>,|+>,|->}:
///   J [ [-s, sqrt(s), 0], [sqrt(s), s-1/2, 0], [0, 0, s-1/2] ].
Eigen::MatrixXcd kondo_contact_combined_matrix(double s, double J);

/// Combined-exchange payload: the matrix above placed at site j = 1.
ScatteringModel kondo_contact_combined(double s, double J, int N, double t);

/// Channel splitting Delta_E = eps0_++ - eps0_ii = (1-2s) D + s (J12x - J12z),
/// with D = (D1+D2)/2.
double molecular_delta_e(const MolecularParams& p);

/// Molecular magnet block on {|i>,|+>,|->}. The anisotropy + exchange
/// background is an energy of the spin state itself, independent of the
/// electron position, so it lives on every site including the leads; the
/// combined contact exchange is added at j = 1. The whole spectrum is
/// shifted so that eps0_ii = 0, leaving the lead diagonal (0, Delta_E,
/// Delta_E_minus). Throws std::invalid_argument when (s - 1/2)(D1 - D2) != 0:
/// that off-diagonal couples |+> and |->, the lead operator is no longer
/// diagonal, and the scattering formulation does not apply.
ScatteringModel molecular_block(const MolecularParams& p, int N, double t);

/// Spin-1/2 impurity with exchange J and Zeeman splitting Delta >= 0 on the
/// 4-channel basis {up.up, up.dn, dn.up, dn.dn} (electron first). The Zeeman
/// term Delta diag(1,0,1,0) is a property of the impurity state and is
/// carried on every site; the exchange sits at j = 1 (N = 1).
ScatteringModel zeeman_impurity(double J, double Delta, double t);

struct AndersonBuild {
    Eigen::MatrixXcd H;           // 4x4 on {|ud,.>, |u,d>, |d,u>, |.,ud>}, incl. eps*I
    Eigen::VectorXd hop_mask;     // (0,1,1,0): doubly occupied states cannot enter the leads
    double sw_J = 0.0;            // 2 t_h^2 (U1+U2) / ((U1-eps)(U2+eps))
    double monitor1 = 0.0;        // t_h / |U1 - eps|
    double monitor2 = 0.0;        // t_h / |U2 + eps|
};

/// The two-antiparallel-electron Anderson Hamiltonian and its derived
/// Schrieffer-Wolff coupling / validity monitors.
AndersonBuild anderson_hamiltonian(const AndersonParams& p);

/// Exact-Anderson scattering payload at j = 1 (N = 1, d = 4): the Anderson
/// matrix with the constant shifts removed so the propagating spin sector
/// carries exactly J S_1.S_2 after Schrieffer-Wolff reduction - the eps*I of
/// the printed Hamiltonian is dropped and the +J/4 counter-shift applies to
/// the singly occupied states only.
ScatteringModel anderson_payload(const AndersonParams& p, double t);

struct SchriefferWolffBuild {
    Eigen::MatrixXcd H;  // 2x2 on {|u,d>, |d,u>}: J (S1.S2 - I/4)
    double J = 0.0;
};

/// Second-order reduction of the Anderson model onto the singly occupied
/// subspace. Throws std::invalid_argument when a denominator |U1 - eps| or
/// |U2 + eps| vanishes.
SchriefferWolffBuild schrieffer_wolff(const AndersonParams& p);

/// Schrieffer-Wolff payload at j = 1 (N = 1, d = 2): J S_1.S_2 with the
/// constant -J/4 removed.
ScatteringModel schrieffer_wolff_payload(const AndersonParams& p, double t);

/// Real molecular systems with published anisotropy/exchange parameters,
/// addressable by name from the CLI config (inversion symmetric, D1 = D2).
struct MolecularPreset {
    std::string name;
    double s;
    double D;     // meV
    double J12;   // J12x = J12z, meV
};

const std::map<std::string, MolecularPreset>& molecular_presets();

/// Preset -> MolecularParams with the given contact coupling J.
MolecularParams preset_params(const std::string& name, double J);

}  // namespace spinscatter
