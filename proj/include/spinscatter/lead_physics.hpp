#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace spinscatter {

using cxd = std::complex<double>;

/// Semi-infinite tight-binding lead: identical sites with spin-independent
/// hopping t > 0 and a diagonal on-site operator eps0 (one entry per spin
/// channel, in meV).
///
/// Unit conventions used throughout the library: hbar = 1, lattice spacing
/// a = 1, energies in meV. Kinetic energies are measured from the bottom of
/// the reference band, K = 2t(1 - cos k), so a channel with on-site energy
/// eps0_ss at total energy E carries kinetic energy K_s = E - eps0_ss and
///   x_s = (K_s - 2t)/(-2t) = cos(k_s).
/// The channel propagates iff |x_s| < 1. An exact band-edge hit |x_s| = 1 is
/// classified closed: the group velocity vanishes and the state carries no
/// flux.
struct LeadSpec {
    double t = 0.0;
    Eigen::VectorXd eps0_diag;

    LeadSpec() = default;
    LeadSpec(double hopping, Eigen::VectorXd onsite);
    int channels() const { return static_cast<int>(eps0_diag.size()); }
};

/// One spin channel at a given incoming kinetic energy. k (wavenumber, 1/a)
/// and v = 2t sin(k) (group velocity, t*a/hbar) exist only for open channels.
struct Channel {
    double x = 0.0;
    bool open = false;
    std::optional<double> k;
    std::optional<double> v;
};

struct ChannelTable {
    double kinetic_in = 0.0;  // K_i = total energy with eps0 of the incoming channel at zero
    std::vector<Channel> channels;

    const Channel& operator[](int s) const { return channels.at(s); }
    int size() const { return static_cast<int>(channels.size()); }
};

/// Tight-binding dispersion K(k) = 2t - 2t cos(k a), a = 1.
double dispersion(double k, double t);

/// Classifies every channel at incoming kinetic energy K_i.
ChannelTable channel_table(double kinetic_in, const LeadSpec& lead);

/// Retarded surface Green's function of the semi-infinite lead, closed form:
///   g = (1/-t) (x -+ sqrt(x^2 - 1))
/// Inside the band the branch with Im(g) < 0 is taken (g = -e^{ik}/t).
/// Outside the band both roots are real and the decaying evanescent root,
/// |-t g| < 1, is selected. At |x| = 1 the roots degenerate to g = -x/t.
std::complex<double> surface_gf_closed(double kinetic_in, const LeadSpec& lead, int channel);

/// Thrown when the fixed-point iteration exhausts max_iter without reaching
/// tol or the double-precision floor.
struct SurfaceGfNotConverged : std::runtime_error {
    double residual;
    SurfaceGfNotConverged(double res, long iters);
};

struct SurfaceGfIteration {
    std::complex<double> value;
    long iterations = 0;
    double residual = 0.0;     // last successive-iterate difference
    bool reached_tol = false;  // false when stopped at the numerical floor
};

/// Solves the surface Green's function self-consistency
///   g = [E + i eta - eps0_ss - t^2 g]^{-1}
/// by plain fixed-point iteration at the complex energy E + i eta (eta > 0
/// regularizes toward the retarded solution). Exists as a cross-check of the
/// closed form and as the hook for future non-diagonal eps0; the closed form
/// is the production path.
///
/// The map's contraction factor inside the band is 1 - O(eta/t), so the
/// successive-iterate difference bottoms out near eps_machine * t / eta; for
/// eta = 1e-6 t that floor (~1e-10) sits above tol = 1e-12. The iteration
/// therefore also stops when the residual stagnates, returning the best
/// attainable iterate with reached_tol = false. The value error against the
/// closed form stays O(eta) either way.
SurfaceGfIteration surface_gf_iterative(double kinetic_in, const LeadSpec& lead, int channel,
                                        double eta, double tol = 1e-12,
                                        long max_iter = 50000000);

/// Retarded lead self-energy Sigma = t^2 g. Equals -t e^{ik} for open
/// channels; real with |Sigma/t| < 1 for closed ones. Im(Sigma) <= 0 always.
std::complex<double> self_energy(double kinetic_in, const LeadSpec& lead, int channel);

}  // namespace spinscatter
