#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ratchetlab/closedform.hpp"

namespace ratchetlab {

struct SimConfig {
    double dt = 1e-3;
    double horizon = 500.0;
    double x0 = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct JumpEvent {
    double t;         // jump time, interpolated inside the grid step
    double r_before;  // boundary before the jump
    double r_after;   // boundary after the jump
    double x;         // particle position at the jump
};

// A simulated ratchet trajectory on a regular grid. The boundary r is
// nondecreasing, changes only at the recorded jump events, and x >= r holds
// everywhere. touch_times records the boundary-contact (regeneration) epochs:
// exact grid events for BM, bridge-detected for OU.
struct RatchetPath {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<double> x;
    std::vector<double> r;
    std::vector<JumpEvent> jumps;
    std::vector<double> touch_times;
};

// Reflected Brownian motion with drift -mu via the running-maximum identity
// Z_t = (x0 v M_t) - B_t; Gaussian increments are exact, the maximum is taken
// over grid points.
std::vector<double> simulate_rbm(double mu, const SimConfig& config);

// Reflected OU with drift -mu*x via the exact one-step transition
// |z e^{-mu dt} + sigma_dt N(0,1)|.
std::vector<double> simulate_rou(double mu, const SimConfig& config);

RatchetPath simulate_bm_ratchet(const RatchetParams& params, const SimConfig& config);
RatchetPath simulate_ou_ratchet(const RatchetParams& params, const SimConfig& config);

struct CouplingResult {
    double time = 0.0;
    bool censored = false;
};

// Two ratchets driven by the same noise and the same jump machinery, started
// from gaps x_hi >= x_lo. Returns the first grid time at which the two
// boundary-tracking processes coincide (censored at the horizon).
CouplingResult simulate_coupling(const RatchetParams& params, double x_hi, double x_lo,
                                 const SimConfig& config);

// Path invariants (r nondecreasing, x >= r, gap conservation at jumps, ...).
bool validate_path(const RatchetPath& path, std::string* why = nullptr);

// CSV export, 17 significant digits: "t,x,r" / "t,r_before,r_after,x".
void write_path_csv(std::ostream& os, const RatchetPath& path);
void write_jumps_csv(std::ostream& os, const RatchetPath& path);

}  // namespace ratchetlab
