#pragma once

#include <functional>

namespace ratchetlab {

enum class Model { BM, OU };

// Ratchet parameters: the boundary jumps at rate gamma*(X-R); the diffusion
// drifts at -mu (BM) or -mu*x (OU) with unit variance.
struct RatchetParams {
    Model model = Model::BM;
    double gamma = 0.5;
    double mu = 0.0;
};

// Map from a (gamma, mu) Brownian ratchet to the canonical gamma = 1/2 one:
//   X^{gamma,mu}(t) =d space_scale * X^{1/2, mu_canonical}(time_scale * t).
struct ScalingMap {
    double mu_canonical;  // (2 gamma)^{-1/3} mu
    double space_scale;   // (2 gamma)^{-1/3}
    double time_scale;    // (2 gamma)^{2/3}
};

// Decreasing/increasing solutions (phi, psi) of the killed generator with
// unit Wronskian psi' phi - psi phi', plus the speed-measure weighted pair
// (Phi, Psi). green(x,y) is the piecewise product form.
struct GreenBasis {
    std::function<double(double)> phi, psi, phi_prime, psi_prime, Phi, Psi;

    double green(double x, double y) const {
        return y <= x ? phi(x) * psi(y) : psi(x) * phi(y);
    }
};

ScalingMap canonicalize_bm(const RatchetParams& params);

// Ratchet speed v(mu, gamma); exactly 0 for gamma = 0.
double bm_speed(const RatchetParams& params);
double bm_speed(double mu, double gamma);

// Canonical gamma = 1/2 machinery for the killed reflected BM with drift -mu.
GreenBasis bm_green_basis(double mu);
double bm_green(double mu, double x, double y);
double bm_expected_killing_time(double mu, double x);
double bm_killing_density(double mu, double x, double y);
double bm_invariant_density(double mu, double z);

struct InvariantExpectations {
    double ey;    // mean gap after a jump under the invariant law
    double eeta;  // mean inter-jump time under the invariant law
};
InvariantExpectations bm_inv_expectations(double mu);

// Ornstein-Uhlenbeck ratchet closed forms (mu > 0).
double ou_h(const RatchetParams& params, double x);
double ou_h_prime0(const RatchetParams& params);  // analytic h'(0)
double ou_speed(const RatchetParams& params);
double ou_speed(double mu, double gamma);
GreenBasis ou_green_basis(const RatchetParams& params);
double ou_expected_killing_time(const RatchetParams& params, double x);
double ou_killing_density(const RatchetParams& params, double x, double y);
double ou_invariant_density(const RatchetParams& params, double z);
InvariantExpectations ou_inv_expectations(const RatchetParams& params);

}  // namespace ratchetlab
