#pragma once

#include <complex>
#include <vector>

#include "spinscatter/scattering_engine.hpp"

namespace spinscatter {

struct LogicalAngles {
    double theta_tilde = 0.0;  // in [0, pi]
    double phi_tilde = 0.0;    // in [0, 2pi)
};

/// Maps the electron measurement axis (theta, phi) to the logical-space
/// angles of the projected two-qubit state:
///   tan(theta_tilde/2) = sqrt(T_plus/T_i) tan(theta/2)
///   phi_tilde = phi + phi_plus + pi   (wrapped to [0, 2pi))
/// theta = pi maps to theta_tilde = pi for any T_plus > 0. Throws
/// std::domain_error for T_i = 0 with theta in (0, pi): the measurement axis
/// then no longer controls the state.
LogicalAngles logical_angles(double T_i, double T_plus, double phi_plus, double theta,
                             double phi);

/// Probability of successfully projecting the transmitted state onto the
/// logical state at theta_tilde:
///   p^2 = T_i T_plus / (T_plus cos^2(theta_tilde/2) + T_i sin^2(theta_tilde/2)).
/// Throws std::domain_error when the denominator vanishes.
double success_probability(double T_i, double T_plus, double theta_tilde);

/// theta_tilde-averaged success probability, closed form sqrt(T_i T_plus).
double p2_bar(double T_i, double T_plus);

/// The same average evaluated by adaptive quadrature of
/// (1/pi) Int_0^pi p^2(theta_tilde) d theta_tilde (absolute tolerance
/// abs_tol); exists as the independent check of the closed form.
double p2_bar_quadrature(double T_i, double T_plus, double abs_tol = 1e-10);

/// Entanglement-control metrics of one transmitted state: the channel
/// probabilities, the inter-channel phase, p^2 sampled over theta_tilde, and
/// the theta_tilde average p2_bar = sqrt(T_i T_plus).
struct EntanglementResult {
    double T_i = 0.0;
    double T_plus = 0.0;
    double phi_plus = 0.0;           // 0 when the |+> channel is closed
    std::vector<double> theta_tilde;
    std::vector<double> p2;          // one entry per theta_tilde sample
    double p2_bar = 0.0;
};

/// Evaluates the metrics for a 3-channel outcome at the given theta_tilde
/// sample points (each in [0, pi]).
EntanglementResult analyze_transmission(const ScatterOutcome& outcome,
                                        const std::vector<double>& theta_tilde_samples);

/// Logical two-qubit state reached by transmitting the electron and
/// measuring its spin along (theta, phi) with outcome -1/2:
///   amp0 = p cos(theta_tilde/2),  amp1 = p sin(theta_tilde/2) e^{i phi_tilde}.
struct LogicalState {
    std::complex<double> amp0, amp1;
    double p2 = 0.0;           // |amp0|^2 + |amp1|^2
    bool degenerate = false;   // |+> closed or T_plus = 0: state collapses to |0>
};

/// Projects a transmitted outcome (3-channel model, incoming |i>). When the
/// |+> channel is closed or empty the projection degenerates to |0> with
/// amplitude cos(theta/2) sqrt(T_i); this is reported, not an error.
LogicalState project_transmitted(const ScatterOutcome& outcome, double theta, double phi);

}  // namespace spinscatter
