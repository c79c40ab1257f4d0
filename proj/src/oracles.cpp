#include "spinscatter/oracles.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace spinscatter {
namespace oracles {

namespace {

using cx = std::complex<double>;

// partial-pivot Gaussian elimination, deliberately independent of the
// engine's LU path
std::vector<cx> solve_dense(std::vector<cx> A, std::vector<cx> b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(A[col * n + col]);
        for (int r = col + 1; r < n; ++r) {
            const double m = std::abs(A[r * n + col]);
            if (m > best) { best = m; piv = r; }
        }
        if (best == 0.0)
            throw std::runtime_error("wavefunction_matching_solve: singular system");
        if (piv != col) {
            for (int c = col; c < n; ++c) std::swap(A[piv * n + c], A[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        const cx inv = 1.0 / A[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const cx f = A[r * n + col] * inv;
            if (f == cx(0.0)) continue;
            for (int c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<cx> x(n);
    for (int r = n - 1; r >= 0; --r) {
        cx acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= A[r * n + c] * x[c];
        x[r] = acc / A[r * n + r];
    }
    return x;
}

double wrap_2pi(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;
    return phi;
}

}  // namespace

double ContinuumParams::j0() const {
    if (!(ki_a > 0.0)) throw std::invalid_argument("ContinuumParams: k_i a must be positive");
    return std::sqrt(2.0 * s) * J / (4.0 * t_c * ki_a);
}

double continuum_Tf(const ContinuumParams& p) {
    const double u = p.j0() * p.j0();
    return u / (1.0 + 2.5 * u + (9.0 / 16.0) * u * u);
}

double continuum_Tnf(const ContinuumParams& p) {
    const double u = p.j0() * p.j0();
    return (1.0 + 0.25 * u) / (1.0 + 2.5 * u + (9.0 / 16.0) * u * u);
}

ScatterOutcome wavefunction_matching_solve(const ScatteringModel& model, double kinetic_in,
                                           int incoming) {
    const ScatteringModel m = shifted_to_incoming(model, incoming);
    const int d = m.dim();
    const int N = m.n_sites;
    const double t = m.hopping;

    ScatterOutcome out;
    out.incoming = incoming;
    out.kinetic_in = kinetic_in;
    out.channels = channel_table(kinetic_in, m.lead());
    if (m.hop_mask(incoming) != 1.0)
        throw std::invalid_argument("wavefunction_matching_solve: incoming channel is masked");
    if (!out.channels[incoming].open)
        throw std::invalid_argument("wavefunction_matching_solve: incoming channel is closed");

    // lead multipliers: the outgoing/evanescent solution in channel s steps
    // by z_s per site away from the scattering region (e^{ik} open, the
    // |z| <= 1 real root closed)
    std::vector<cx> z(d);
    for (int s = 0; s < d; ++s) {
        const double x = out.channels[s].x;
        if (std::abs(x) < 1.0)
            z[s] = cx(x, std::sqrt(1.0 - x * x));
        else
            z[s] = x - std::copysign(std::sqrt(x * x - 1.0), x);
    }

    const double e_res = kinetic_in - 2.0 * t;
    const double k_i = *out.channels[incoming].k;
    const int n = (N + 4) * d;  // psi_{0..N+1}, B, C
    std::vector<cx> A(static_cast<size_t>(n) * n, cx(0.0));
    std::vector<cx> rhs(n, cx(0.0));
    const auto P = [d](int j, int s) { return j * d + s; };
    const int iB = (N + 2) * d, iC = (N + 3) * d;
    int row = 0;

    for (int s = 0; s < d; ++s) {  // continuity at j = 0: psi_0s = delta_si + B_s
        A[row * n + P(0, s)] = 1.0;
        A[row * n + iB + s] = -1.0;
        rhs[row] = s == incoming ? 1.0 : 0.0;
        ++row;
    }
    for (int s = 0; s < d; ++s) {  // continuity at j = N+1: psi_{N+1,s} = C_s
        A[row * n + P(N + 1, s)] = 1.0;
        A[row * n + iC + s] = -1.0;
        ++row;
    }
    for (int j = 0; j <= N + 1; ++j) {
        const Eigen::MatrixXcd& eps = (j == 0 || j == N + 1) ? m.eps0 : m.eps_sites[j - 1];
        for (int s = 0; s < d; ++s) {
            A[row * n + P(j, s)] += e_res;
            for (int sp = 0; sp < d; ++sp) A[row * n + P(j, sp)] -= eps(s, sp);
            const double ts = t * m.hop_mask(s);
            if (j + 1 <= N + 1)
                A[row * n + P(j + 1, s)] += ts;
            else
                A[row * n + iC + s] += ts * z[s];  // psi_{N+2,s} = C_s z_s
            if (j - 1 >= 0) {
                A[row * n + P(j - 1, s)] += ts;
            } else {  // psi_{-1,s} = delta_si e^{-i k_i} + B_s z_s
                A[row * n + iB + s] += ts * z[s];
                if (s == incoming) rhs[row] -= ts * std::exp(cx(0.0, -k_i));
            }
            ++row;
        }
    }

    const std::vector<cx> sol = solve_dense(std::move(A), std::move(rhs), n);

    out.transmitted_amp.resize(d);
    out.reflected_amp.resize(d);
    for (int s = 0; s < d; ++s) {
        out.reflected_amp(s) = sol[iB + s];
        out.transmitted_amp(s) = sol[iC + s];
    }
    const double v_i = *out.channels[incoming].v;
    out.transmission = Eigen::VectorXd::Zero(d);
    out.reflection = Eigen::VectorXd::Zero(d);
    for (int s = 0; s < d; ++s) {
        const Channel& ch = out.channels[s];
        if (!ch.open || m.hop_mask(s) != 1.0) continue;
        out.transmission(s) = std::norm(out.transmitted_amp(s)) * (*ch.v) / v_i;
        out.reflection(s) = std::norm(out.reflected_amp(s)) * (*ch.v) / v_i;
    }
    out.rel_phase.assign(d, std::nullopt);
    for (int s = 0; s < d; ++s) {
        const Channel& ch = out.channels[s];
        if (!ch.open || std::abs(out.transmitted_amp(s)) == 0.0) continue;
        out.rel_phase[s] = wrap_2pi(std::arg(out.transmitted_amp(s)) -
                                    std::arg(out.transmitted_amp(incoming)) +
                                    (*ch.k - k_i) * (N + 1));
    }
    out.flux_sum = out.transmission.sum() + out.reflection.sum();
    return out;
}

}  // namespace oracles
}  // namespace spinscatter
