#include "spinscatter/models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spinscatter/spin_algebra.hpp"

namespace spinscatter {

namespace {

Eigen::MatrixXcd exchange_dot(const SpinOperatorSet& a, const SpinOperatorSet& b,
                              const std::vector<double>& spins, int slot_a, int slot_b) {
    return embed_operator(spins, a.sx, slot_a) * embed_operator(spins, b.sx, slot_b) +
           embed_operator(spins, a.sy, slot_a) * embed_operator(spins, b.sy, slot_b) +
           embed_operator(spins, a.sz, slot_a) * embed_operator(spins, b.sz, slot_b);
}

// J S_e.S_l (l = 1 or 2) projected onto the {|i>,|+>,|->} block
Eigen::MatrixXcd contact_block(double s, double J, int msq_slot) {
    const SpinOperatorSet se = build_spin_operators(0.5);
    const SpinOperatorSet sq = build_spin_operators(s);
    const std::vector<double> spins{0.5, s, s};
    const Eigen::MatrixXcd full = J * exchange_dot(se, sq, spins, 0, msq_slot);
    const ThreeParticleBasis basis = three_particle_basis(s);
    return basis.vectors.adjoint() * full * basis.vectors;
}

constexpr double kExchange4[4][4] = {
    {0.25, 0.0, 0.0, 0.0}, {0.0, -0.25, 0.5, 0.0}, {0.0, 0.5, -0.25, 0.0}, {0.0, 0.0, 0.0, 0.25}};

}  // namespace

ScatteringModel kondo_contact_spread(double s, double J, int N, double t) {
    if (N < 2) throw std::invalid_argument("kondo_contact_spread: N must be >= 2");
    std::vector<Eigen::MatrixXcd> eps(N, Eigen::MatrixXcd::Zero(3, 3));
    eps.front() = contact_block(s, J, 1);
    eps.back() = contact_block(s, J, 2);
    return ScatteringModel(N, t, Eigen::MatrixXcd::Zero(3, 3), std::move(eps));
}

Eigen::MatrixXcd kondo_contact_combined_matrix(double s, double J) {
    if (s < 0.5 || std::abs(2.0 * s - std::round(2.0 * s)) > 1e-9)
        throw std::invalid_argument("kondo_contact_combined: s must be a half-integer >= 1/2");
    const double rs = std::sqrt(s);
    Eigen::MatrixXcd m(3, 3);
    m << -s, rs, 0.0, rs, s - 0.5, 0.0, 0.0, 0.0, s - 0.5;
    return J * m;
}

ScatteringModel kondo_contact_combined(double s, double J, int N, double t) {
    std::vector<Eigen::MatrixXcd> eps(N, Eigen::MatrixXcd::Zero(3, 3));
    eps.front() = kondo_contact_combined_matrix(s, J);
    return ScatteringModel(N, t, Eigen::MatrixXcd::Zero(3, 3), std::move(eps));
}

double molecular_delta_e(const MolecularParams& p) {
    const double D = 0.5 * (p.D1 + p.D2);
    return (1.0 - 2.0 * p.s) * D + p.s * (p.J12x - p.J12z);
}

ScatteringModel molecular_block(const MolecularParams& p, int N, double t) {
    const double s = p.s;
    const double off_diag = (s - 0.5) * (p.D1 - p.D2);
    if (std::abs(off_diag) > 1e-14)
        throw std::invalid_argument(
            "molecular_block: D1 != D2 couples |+> and |->; the lead operator acquires an "
            "off-diagonal element of magnitude " + std::to_string(std::abs(off_diag)) +
            " meV and the channel basis no longer diagonalizes eps0");

    const double D = 0.5 * (p.D1 + p.D2);
    const double de_plus = (1.0 - 2.0 * s) * D + s * (p.J12x - p.J12z);
    const double de_minus = (1.0 - 2.0 * s) * D - s * (p.J12x + p.J12z);
    // background in {|i>,|+>,|->} after the shift making eps0_ii = 0
    Eigen::MatrixXcd bg = Eigen::MatrixXcd::Zero(3, 3);
    bg(1, 1) = de_plus;
    bg(2, 2) = de_minus;

    std::vector<Eigen::MatrixXcd> eps(N, bg);
    eps.front() += kondo_contact_combined_matrix(s, p.J);
    return ScatteringModel(N, t, bg, std::move(eps));
}

ScatteringModel zeeman_impurity(double J, double Delta, double t) {
    if (Delta < 0.0) throw std::invalid_argument("zeeman_impurity: Delta must be >= 0");
    Eigen::MatrixXcd exch = Eigen::MatrixXcd::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) exch(i, j) = J * kExchange4[i][j];
    Eigen::MatrixXcd zeeman = Eigen::MatrixXcd::Zero(4, 4);
    zeeman(0, 0) = Delta;
    zeeman(2, 2) = Delta;
    std::vector<Eigen::MatrixXcd> eps{exch + zeeman};
    return ScatteringModel(1, t, zeeman, std::move(eps));
}

AndersonBuild anderson_hamiltonian(const AndersonParams& p) {
    AndersonBuild out;
    out.H = Eigen::MatrixXcd::Zero(4, 4);
    out.H << p.U1 - p.eps, -p.t_h, p.t_h, 0.0,
             -p.t_h, 0.0, 0.0, -p.t_h,
             p.t_h, 0.0, 0.0, p.t_h,
             0.0, -p.t_h, p.t_h, p.U2 + p.eps;
    out.H += p.eps * Eigen::MatrixXcd::Identity(4, 4);
    out.hop_mask = Eigen::VectorXd::Zero(4);
    out.hop_mask(1) = out.hop_mask(2) = 1.0;
    const double d1 = p.U1 - p.eps, d2 = p.U2 + p.eps;
    out.sw_J = (d1 == 0.0 || d2 == 0.0) ? std::numeric_limits<double>::quiet_NaN()
                                        : 2.0 * p.t_h * p.t_h * (p.U1 + p.U2) / (d1 * d2);
    out.monitor1 = d1 == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(p.t_h / d1);
    out.monitor2 = d2 == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(p.t_h / d2);
    return out;
}

ScatteringModel anderson_payload(const AndersonParams& p, double t) {
    const AndersonBuild b = anderson_hamiltonian(p);
    const double J = schrieffer_wolff(p).J;
    Eigen::MatrixXcd eps1 = b.H - p.eps * Eigen::MatrixXcd::Identity(4, 4);
    eps1(1, 1) += 0.25 * J;  // counter-shift on the propagating spin sector only
    eps1(2, 2) += 0.25 * J;
    std::vector<Eigen::MatrixXcd> eps{eps1};
    return ScatteringModel(1, t, Eigen::MatrixXcd::Zero(4, 4), std::move(eps), b.hop_mask);
}

SchriefferWolffBuild schrieffer_wolff(const AndersonParams& p) {
    const double d1 = p.U1 - p.eps, d2 = p.U2 + p.eps;
    if (d1 == 0.0 || d2 == 0.0)
        throw std::invalid_argument("schrieffer_wolff: vanishing denominator U1-eps or U2+eps");
    SchriefferWolffBuild out;
    out.J = 2.0 * p.t_h * p.t_h * (p.U1 + p.U2) / (d1 * d2);
    out.H = Eigen::MatrixXcd(2, 2);
    out.H << -0.5 * out.J, 0.5 * out.J, 0.5 * out.J, -0.5 * out.J;
    return out;
}

ScatteringModel schrieffer_wolff_payload(const AndersonParams& p, double t) {
    const double J = schrieffer_wolff(p).J;
    Eigen::MatrixXcd eps1(2, 2);
    eps1 << -0.25 * J, 0.5 * J, 0.5 * J, -0.25 * J;  // J S1.S2
    std::vector<Eigen::MatrixXcd> eps{eps1};
    return ScatteringModel(1, t, Eigen::MatrixXcd::Zero(2, 2), std::move(eps));
}

const std::map<std::string, MolecularPreset>& molecular_presets() {
    static const std::map<std::string, MolecularPreset> presets{
        {"MnPc", {"MnPc", 1.5, -0.99, -0.77}},
        {"MnIII_dimer", {"MnIII_dimer", 4.0, -0.08, -0.53}},
        {"Mn4_dimer", {"Mn4_dimer", 4.5, -0.06, 0.009}},
        {"Mn3_dimer", {"Mn3_dimer", 6.0, -0.03, -0.006}},
    };
    return presets;
}

MolecularParams preset_params(const std::string& name, double J) {
    const auto& reg = molecular_presets();
    const auto it = reg.find(name);
    if (it == reg.end()) throw std::invalid_argument("unknown molecular preset: " + name);
    MolecularParams p;
    p.s = it->second.s;
    p.D1 = p.D2 = it->second.D;
    p.J12x = p.J12z = it->second.J12;
    p.J = J;
    return p;
}

}  // namespace spinscatter
