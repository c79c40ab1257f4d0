#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spinscatter/lead_physics.hpp"

namespace spinscatter {

/// A scattering problem: N interacting sites j = 1..N embedded in two
/// identical semi-infinite leads, all with spin-independent hopping t.
///
/// eps_j are d x d Hermitian spin operators on the scattering sites; eps0 is
/// the (strictly diagonal) lead on-site operator, present on every lead site.
/// hop_mask holds one factor in {0,1} per channel: the nearest-neighbor
/// hopping matrix is -t diag(hop_mask). A masked channel (entry 0) is
/// confined to single sites - it never propagates, carries no lead
/// self-energy and no flux, but still mixes with propagating channels
/// through the eps_j. The default mask is all ones.
struct ScatteringModel {
    int n_sites = 0;                           // N
    double hopping = 0.0;                      // t (meV)
    Eigen::MatrixXcd eps0;                     // d x d diagonal
    std::vector<Eigen::MatrixXcd> eps_sites;   // eps_1 .. eps_N
    Eigen::VectorXd hop_mask;                  // d entries in {0,1}

    ScatteringModel() = default;
    ScatteringModel(int N, double t, Eigen::MatrixXcd eps0_in,
                    std::vector<Eigen::MatrixXcd> eps_in,
                    Eigen::VectorXd mask = Eigen::VectorXd());

    int dim() const { return static_cast<int>(eps0.rows()); }
    LeadSpec lead() const { return LeadSpec(hopping, eps0.diagonal().real()); }

    /// Hermiticity of every eps_j (1e-12), strict diagonality of eps0,
    /// consistent dimensions, N >= 1, t > 0, mask entries in {0,1}.
    void validate() const;
};

/// Copy of the model with all on-site operators shifted so that
/// eps0[incoming,incoming] = 0 (the energy-zero gauge in which the total
/// energy equals the incoming kinetic energy).
ScatteringModel shifted_to_incoming(const ScatteringModel& model, int incoming);

/// Spin-resolved result of one scattering event.
struct ScatterOutcome {
    int incoming = 0;
    double kinetic_in = 0.0;
    ChannelTable channels;               // of the incoming-gauge model
    Eigen::VectorXd transmission;        // T_sigma, 0 for closed/masked channels
    Eigen::VectorXd reflection;          // R_sigma
    Eigen::VectorXcd transmitted_amp;    // C_sigma = psi_{N+1,sigma}
    Eigen::VectorXcd reflected_amp;      // B_sigma = psi_{0,sigma} - delta_{sigma,i}
    std::vector<std::optional<double>>
        rel_phase;                       // per channel: arg(C_s)-arg(C_i)+(k_s-k_i)(N+1), in [0,2pi)
    double flux_sum = 0.0;               // sum over open channels of T + R

    double T(int s) const { return transmission(s); }
    double R(int s) const { return reflection(s); }
    /// Inter-channel phase between |+> (channel 1) and the incoming |i>
    /// (channel 0); present only when both are open with nonzero C.
    std::optional<double> phi_plus() const {
        if (incoming == 0 && rel_phase.size() > 1) return rel_phase[1];
        return std::nullopt;
    }
};

/// Thrown when the solved outcome violates unitarity beyond tolerance.
struct FluxViolation : std::runtime_error {
    double flux_error;
    FluxViolation(double err);
};

/// Effective Hamiltonian over sites j = 0..N+1: block tridiagonal with
/// diagonal blocks eps0 + Sigma_L | eps_1 .. eps_N | eps0 + Sigma_R and
/// off-diagonal blocks -t diag(hop_mask). The self-energies are evaluated at
/// the given incoming kinetic energy (total energy in the incoming gauge);
/// masked channels get Sigma = 0.
Eigen::MatrixXcd build_effective_hamiltonian(const ScatteringModel& model, double kinetic_in);

/// Retarded Green's function (E I - H')^{-1} by dense LU with partial
/// pivoting, where E is the resolvent energy of the incoming gauge
/// (kinetic_in - 2t; on-site blocks carry no band offset). Throws
/// std::runtime_error if the matrix is singular or the reciprocal condition
/// number estimate falls below 1e-14.
Eigen::MatrixXcd retarded_gf(const ScatteringModel& model, double kinetic_in);

/// Full scattering solution for a unit-amplitude plane wave incoming from
/// the left in the given channel. The model is first shifted to the
/// incoming gauge. Transmission and reflection are flux ratios,
///   T_s = v_s v_i |G_{N+1,0,s,i}|^2,   R_s = |i v_i G_{0,0,s,i} - delta_si|^2 v_s / v_i,
/// with closed and masked channels forced to zero. Throws
/// std::invalid_argument if the incoming channel is closed or masked, and
/// FluxViolation if |sum_s (T_s + R_s) - 1| > 1e-8.
ScatterOutcome solve_scattering(const ScatteringModel& model, double kinetic_in, int incoming);

}  // namespace spinscatter
