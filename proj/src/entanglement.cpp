#include "spinscatter/entanglement.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinscatter {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_2pi(double phi) {
    phi = std::fmod(phi, 2.0 * kPi);
    if (phi < 0.0) phi += 2.0 * kPi;
    return phi;
}

double p2_integrand(double T_i, double T_plus, double tt) {
    const double c = std::cos(0.5 * tt), s = std::sin(0.5 * tt);
    const double denom = T_plus * c * c + T_i * s * s;
    return denom == 0.0 ? 0.0 : T_i * T_plus / denom;
}

double adaptive_simpson(double T_i, double T_plus, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = p2_integrand(T_i, T_plus, lm), frm = p2_integrand(T_i, T_plus, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(T_i, T_plus, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(T_i, T_plus, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

LogicalAngles logical_angles(double T_i, double T_plus, double phi_plus, double theta,
                             double phi) {
    if (T_i < 0.0 || T_plus < 0.0)
        throw std::invalid_argument("logical_angles: probabilities must be non-negative");
    if (theta < 0.0 || theta > kPi)
        throw std::invalid_argument("logical_angles: theta must lie in [0, pi]");
    if (T_i == 0.0 && theta > 0.0 && theta < kPi)
        throw std::domain_error("logical_angles: T_i = 0 with theta in (0, pi) leaves the "
                                "logical state uncontrolled");
    LogicalAngles out;
    if (theta == kPi && T_plus > 0.0)  // tan singularity: the antipode maps exactly
        out.theta_tilde = kPi;
    else
        out.theta_tilde = 2.0 * std::atan2(std::sqrt(T_plus) * std::sin(0.5 * theta),
                                           std::sqrt(T_i) * std::cos(0.5 * theta));
    out.phi_tilde = wrap_2pi(phi + phi_plus + kPi);
    return out;
}

double success_probability(double T_i, double T_plus, double theta_tilde) {
    if (T_i < 0.0 || T_plus < 0.0)
        throw std::invalid_argument("success_probability: probabilities must be non-negative");
    const double c = std::cos(0.5 * theta_tilde), s = std::sin(0.5 * theta_tilde);
    const double denom = T_plus * c * c + T_i * s * s;
    if (denom == 0.0)
        throw std::domain_error("success_probability: vanishing denominator (T_i, T_plus both "
                                "absent on the reached state)");
    return T_i * T_plus / denom;
}

double p2_bar(double T_i, double T_plus) {
    if (T_i < 0.0 || T_plus < 0.0)
        throw std::invalid_argument("p2_bar: probabilities must be non-negative");
    return std::sqrt(T_i * T_plus);
}

double p2_bar_quadrature(double T_i, double T_plus, double abs_tol) {
    const double fa = p2_integrand(T_i, T_plus, 0.0);
    const double fm = p2_integrand(T_i, T_plus, 0.5 * kPi);
    const double fb = p2_integrand(T_i, T_plus, kPi);
    const double whole = kPi / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(T_i, T_plus, 0.0, kPi, fa, fm, fb, whole, abs_tol * kPi, 48) / kPi;
}

EntanglementResult analyze_transmission(const ScatterOutcome& outcome,
                                        const std::vector<double>& theta_tilde_samples) {
    if (outcome.channels.size() < 2 || outcome.incoming != 0)
        throw std::invalid_argument("analyze_transmission: expects a {|i>,|+>,...} outcome with "
                                    "incoming channel |i>");
    EntanglementResult res;
    res.T_i = outcome.T(0);
    res.T_plus = outcome.channels[1].open ? outcome.T(1) : 0.0;
    res.phi_plus = outcome.phi_plus().value_or(0.0);
    res.theta_tilde = theta_tilde_samples;
    res.p2.reserve(theta_tilde_samples.size());
    for (double tt : theta_tilde_samples) {
        if (tt < 0.0 || tt > kPi)
            throw std::invalid_argument("analyze_transmission: theta_tilde outside [0, pi]");
        res.p2.push_back(p2_integrand(res.T_i, res.T_plus, tt));
    }
    res.p2_bar = p2_bar(res.T_i, res.T_plus);
    return res;
}

LogicalState project_transmitted(const ScatterOutcome& outcome, double theta, double phi) {
    if (outcome.channels.size() < 2 || outcome.incoming != 0)
        throw std::invalid_argument("project_transmitted: expects a {|i>,|+>,...} outcome with "
                                    "incoming channel |i>");
    const double T_i = outcome.T(0);
    const double T_plus = outcome.channels.size() > 1 && outcome.channels[1].open
                              ? outcome.T(1)
                              : 0.0;
    LogicalState st;
    if (T_plus == 0.0 || !outcome.phi_plus().has_value()) {
        st.degenerate = true;
        st.amp0 = std::cos(0.5 * theta) * std::sqrt(T_i);
        st.amp1 = 0.0;
        st.p2 = std::norm(st.amp0);
        return st;
    }
    const LogicalAngles ang = logical_angles(T_i, T_plus, *outcome.phi_plus(), theta, phi);
    const double p = std::sqrt(success_probability(T_i, T_plus, ang.theta_tilde));
    st.amp0 = p * std::cos(0.5 * ang.theta_tilde);
    st.amp1 = p * std::sin(0.5 * ang.theta_tilde) *
              std::exp(std::complex<double>(0.0, ang.phi_tilde));
    st.p2 = std::norm(st.amp0) + std::norm(st.amp1);
    return st;
}

}  // namespace spinscatter
