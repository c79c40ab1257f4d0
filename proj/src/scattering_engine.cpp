#include "spinscatter/scattering_engine.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <string>

namespace spinscatter {



namespace {

double wrap_2pi(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;
    return phi;
}

}  // namespace

ScatteringModel::ScatteringModel(int N, double t, Eigen::MatrixXcd eps0_in,
                                 std::vector<Eigen::MatrixXcd> eps_in, Eigen::VectorXd mask)
    : n_sites(N), hopping(t), eps0(std::move(eps0_in)), eps_sites(std::move(eps_in)),
      hop_mask(std::move(mask)) {
    if (hop_mask.size() == 0) hop_mask = Eigen::VectorXd::Ones(eps0.rows());
    validate();
}

void ScatteringModel::validate() const {
    if (n_sites < 1) throw std::invalid_argument("ScatteringModel: N must be >= 1");
    if (!(hopping > 0.0)) throw std::invalid_argument("ScatteringModel: t must be positive");
    const int d = dim();
    if (eps0.cols() != d) throw std::invalid_argument("ScatteringModel: eps0 must be square");
    if (static_cast<int>(eps_sites.size()) != n_sites)
        throw std::invalid_argument("ScatteringModel: need exactly N site operators");
    if (hop_mask.size() != d)
        throw std::invalid_argument("ScatteringModel: hop_mask size mismatch");
    for (int s = 0; s < d; ++s)
        if (hop_mask(s) != 0.0 && hop_mask(s) != 1.0)
            throw std::invalid_argument("ScatteringModel: hop_mask entries must be 0 or 1");
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j && std::abs(eps0(i, j)) != 0.0)
                throw std::invalid_argument("ScatteringModel: eps0 must be strictly diagonal");
    if (eps0.diagonal().imag().cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("ScatteringModel: eps0 must be real");
    for (const auto& eps : eps_sites) {
        if (eps.rows() != d || eps.cols() != d)
            throw std::invalid_argument("ScatteringModel: eps_j dimension mismatch");
        if ((eps - eps.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("ScatteringModel: eps_j must be Hermitian within 1e-12");
    }
}

ScatteringModel shifted_to_incoming(const ScatteringModel& model, int incoming) {
    if (incoming < 0 || incoming >= model.dim())
        throw std::invalid_argument("shifted_to_incoming: channel index out of range");
    const double shift = model.eps0(incoming, incoming).real();
    if (shift == 0.0) return model;
    ScatteringModel out = model;
    const Eigen::MatrixXcd offset =
        shift * Eigen::MatrixXcd::Identity(model.dim(), model.dim());
    out.eps0 -= offset;
    for (auto& eps : out.eps_sites) eps -= offset;
    return out;
}

FluxViolation::FluxViolation(double err)
    : std::runtime_error("flux conservation violated: |sum(T+R) - 1| = " + std::to_string(err)),
      flux_error(err) {}

Eigen::MatrixXcd build_effective_hamiltonian(const ScatteringModel& model, double kinetic_in) {
    const int d = model.dim();
    const int N = model.n_sites;
    const LeadSpec lead = model.lead();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero((N + 2) * d, (N + 2) * d);

    Eigen::MatrixXcd lead_block = model.eps0;
    for (int s = 0; s < d; ++s)
        if (model.hop_mask(s) == 1.0) lead_block(s, s) += self_energy(kinetic_in, lead, s);
    H.topLeftCorner(d, d) = lead_block;
    H.bottomRightCorner(d, d) = lead_block;  // Sigma_R = Sigma_L for identical leads

    for (int j = 1; j <= N; ++j) H.block(j * d, j * d, d, d) = model.eps_sites[j - 1];

    Eigen::MatrixXcd hop = Eigen::MatrixXcd::Zero(d, d);
    hop.diagonal() = (-model.hopping * model.hop_mask).cast<cxd>();
    for (int j = 0; j <= N; ++j) {
        H.block(j * d, (j + 1) * d, d, d) = hop;
        H.block((j + 1) * d, j * d, d, d) = hop;
    }
    return H;
}

Eigen::MatrixXcd retarded_gf(const ScatteringModel& model, double kinetic_in) {
    const int n = (model.n_sites + 2) * model.dim();
    const Eigen::MatrixXcd H = build_effective_hamiltonian(model, kinetic_in);
    const double e_res = kinetic_in - 2.0 * model.hopping;
    const Eigen::MatrixXcd A = e_res * Eigen::MatrixXcd::Identity(n, n) - H;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14))
        throw std::runtime_error("retarded_gf: resolvent ill-conditioned (rcond estimate " +
                                 std::to_string(rcond) + ")");
    return lu.inverse();
}

ScatterOutcome solve_scattering(const ScatteringModel& model, double kinetic_in, int incoming) {
    const ScatteringModel m = shifted_to_incoming(model, incoming);
    const int d = m.dim();
    const int N = m.n_sites;

    ScatterOutcome out;
    out.incoming = incoming;
    out.kinetic_in = kinetic_in;
    out.channels = channel_table(kinetic_in, m.lead());
    if (m.hop_mask(incoming) != 1.0)
        throw std::invalid_argument("solve_scattering: incoming channel is masked");
    if (!out.channels[incoming].open)
        throw std::invalid_argument("solve_scattering: incoming channel is closed at K_i = " +
                                    std::to_string(kinetic_in));

    const Eigen::MatrixXcd G = retarded_gf(m, kinetic_in);
    const double v_i = *out.channels[incoming].v;

    // psi = G Q with the single-entry source Q_{0,i} = i v_i (A = 1)
    const Eigen::VectorXcd psi = G.col(incoming) * cxd(0.0, v_i);
    out.transmitted_amp = psi.segment((N + 1) * d, d);
    out.reflected_amp = psi.segment(0, d);
    out.reflected_amp(incoming) -= 1.0;

    out.transmission = Eigen::VectorXd::Zero(d);
    out.reflection = Eigen::VectorXd::Zero(d);
    for (int s = 0; s < d; ++s) {
        const Channel& ch = out.channels[s];
        if (!ch.open || m.hop_mask(s) != 1.0) continue;
        out.transmission(s) = (*ch.v) * v_i * std::norm(G((N + 1) * d + s, incoming));
        out.reflection(s) =
            std::norm(cxd(0.0, v_i) * G(s, incoming) - (s == incoming ? 1.0 : 0.0)) * (*ch.v) / v_i;
    }

    out.rel_phase.assign(d, std::nullopt);
    const double k_i = *out.channels[incoming].k;
    for (int s = 0; s < d; ++s) {
        const Channel& ch = out.channels[s];
        if (!ch.open || std::abs(out.transmitted_amp(s)) == 0.0) continue;
        out.rel_phase[s] = wrap_2pi(std::arg(out.transmitted_amp(s)) -
                                    std::arg(out.transmitted_amp(incoming)) +
                                    (*ch.k - k_i) * (N + 1));
    }

    out.flux_sum = out.transmission.sum() + out.reflection.sum();
    const double flux_err = std::abs(out.flux_sum - 1.0);
    if (flux_err > 1e-8) throw FluxViolation(flux_err);
    return out;
}

}  // namespace spinscatter
