#include "spinscatter/lead_physics.hpp"

#include <cmath>
#include <string>

namespace spinscatter {

namespace {

double channel_x(double kinetic_in, double eps0_ss, double t) {
    return (kinetic_in - eps0_ss - 2.0 * t) / (-2.0 * t);
}

void check_channel(const LeadSpec& lead, int channel) {
    if (channel < 0 || channel >= lead.channels())
        throw std::invalid_argument("lead channel index out of range");
}

}  // namespace

LeadSpec::LeadSpec(double hopping, Eigen::VectorXd onsite)
    : t(hopping), eps0_diag(std::move(onsite)) {
    if (!(t > 0.0)) throw std::invalid_argument("LeadSpec: hopping t must be positive");
}

double dispersion(double k, double t) { return 2.0 * t - 2.0 * t * std::cos(k); }

ChannelTable channel_table(double kinetic_in, const LeadSpec& lead) {
    ChannelTable table;
    table.kinetic_in = kinetic_in;
    table.channels.resize(lead.channels());
    for (int s = 0; s < lead.channels(); ++s) {
        Channel& ch = table.channels[s];
        ch.x = channel_x(kinetic_in, lead.eps0_diag(s), lead.t);
        ch.open = std::abs(ch.x) < 1.0;
        if (ch.open) {
            ch.k = std::acos(ch.x);
            ch.v = 2.0 * lead.t * std::sin(*ch.k);
        }
    }
    return table;
}

std::complex<double> surface_gf_closed(double kinetic_in, const LeadSpec& lead, int channel) {
    check_channel(lead, channel);
    const double t = lead.t;
    const double x = channel_x(kinetic_in, lead.eps0_diag(channel), t);
    if (std::abs(x) < 1.0)
        return std::complex<double>(x, std::sqrt(1.0 - x * x)) / (-t);
    // evanescent: keep the root with |−t g| <= 1
    const double r = x - std::copysign(std::sqrt(x * x - 1.0), x);
    return r / (-t);
}

SurfaceGfNotConverged::SurfaceGfNotConverged(double res, long iters)
    : std::runtime_error("surface_gf_iterative: no convergence after " + std::to_string(iters) +
                         " iterations, residual " + std::to_string(res)),
      residual(res) {}

SurfaceGfIteration surface_gf_iterative(double kinetic_in, const LeadSpec& lead, int channel,
                                        double eta, double tol, long max_iter) {
    check_channel(lead, channel);
    if (!(eta > 0.0)) throw std::invalid_argument("surface_gf_iterative: eta must be positive");
    const double t = lead.t;
    // resolvent energy: on-site blocks carry no band offset, so the energy
    // measured from the band bottom enters as K - 2t
    const std::complex<double> e(kinetic_in - lead.eps0_diag(channel) - 2.0 * t, eta);
    std::complex<double> g(0.0, -1.0 / t);
    double residual = 0.0;
    constexpr long kWindow = 10000;  // stagnation check interval
    double best = std::numeric_limits<double>::infinity();
    double best_at_checkpoint = best;
    for (long it = 1; it <= max_iter; ++it) {
        const std::complex<double> next = 1.0 / (e - t * t * g);
        residual = std::abs(next - g);
        g = next;
        if (residual < tol) return {g, it, residual, true};
        best = std::min(best, residual);
        if (it % kWindow == 0) {
            if (best > 0.99 * best_at_checkpoint) return {g, it, residual, false};
            best_at_checkpoint = best;
        }
    }
    throw SurfaceGfNotConverged(residual, max_iter);
}

std::complex<double> self_energy(double kinetic_in, const LeadSpec& lead, int channel) {
    return lead.t * lead.t * surface_gf_closed(kinetic_in, lead, channel);
}

}  // namespace spinscatter
