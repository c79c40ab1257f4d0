#pragma once

#include "spinscatter/scattering_engine.hpp"

namespace spinscatter {
namespace oracles {

/// Continuum contact-exchange scattering off a single spin-s impurity.
/// The coupling enters only through the unitless J0 = sqrt(2s) J / (4 t_c k_i a_c).
struct ContinuumParams {
    double s = 0.5;
    double J = 0.0;     // meV
    double t_c = 0.0;   // meV
    double ki_a = 0.0;  // k_i a_c, dimensionless, > 0

    double j0() const;
};

/// Spin-flip transmission T_f,c = J0^2 / (1 + 5/2 J0^2 + 9/16 J0^4).
double continuum_Tf(const ContinuumParams& p);

/// No-spin-flip transmission T_nf,c = (1 + 1/4 J0^2) / (1 + 5/2 J0^2 + 9/16 J0^4).
double continuum_Tnf(const ContinuumParams& p);

/// Independent scattering solution by direct wavefunction matching: the bulk
/// Schrodinger equation is imposed on every site j = 0..N+1 with plane-wave
/// (open) or decaying evanescent (closed) lead solutions, and the resulting
/// linear system in {psi_js, B_s, C_s} is solved by the module's own dense
/// Gaussian elimination. Shares only the model layer with the Green's
/// function engine - no linear-algebra path is common to the two - so
/// agreement between them validates both.
ScatterOutcome wavefunction_matching_solve(const ScatteringModel& model, double kinetic_in,
                                           int incoming);

}  // namespace oracles
}  // namespace spinscatter
