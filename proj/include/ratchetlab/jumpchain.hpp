#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "ratchetlab/closedform.hpp"
#include "ratchetlab/mcstats.hpp"
#include "ratchetlab/pathsim.hpp"
#include "ratchetlab/rng.hpp"

namespace ratchetlab {

// One step of the Markov chain at jump times: the gap after the jump, the
// boundary increment, and the Rao-Blackwellized inter-jump time (conditional
// expectation given the previous gap).
struct JumpSample {
    double y;
    double w;
    double eta_mean;
};

struct ChainRun {
    std::vector<JumpSample> samples;
    std::size_t burn_in = 0;
    std::uint64_t seed = 0;
};

// Monotone cubic (Fritsch-Carlson) interpolant.
class Pchip {
public:
    Pchip() = default;
    Pchip(std::vector<double> xs, std::vector<double> ys);
    double operator()(double x) const;
    double derivative(double x) const;
    // solve (*this)(x) = target on the bracketing interval; requires monotone data
    double invert(double target) const;
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }

private:
    std::size_t interval(double x) const;
    std::vector<double> xs_, ys_, d_;
};

// Tabulated killing machinery for one model: inverse-CDF sampling of the
// killing position from any start x, the expected killing time E_x[tau], and
// the invariant gap density/CDF. BM tables are built at the canonical
// gamma = 1/2.
class KillingKernel {
public:
    static KillingKernel bm(double mu_canonical);
    static KillingKernel ou(const RatchetParams& params);

    // one draw of the position at killing time, started from x
    double sample_position(double x, Xoshiro256pp& rng) const;
    double expected_eta(double x) const;
    double killing_density(double x, double y) const;
    double killing_cdf(double x, double y) const;
    double invariant_pdf(double y) const;
    double invariant_cdf(double y) const;
    double grid_cutoff() const { return cutoff_; }

private:
    KillingKernel() = default;
    void build_tables(double cutoff, int nodes);

    GreenBasis basis_;
    std::function<double(double)> killing_weight_;  // k(y)
    std::function<double(double)> invariant_weight_;
    double cutoff_ = 0.0;
    Pchip int_phi_k_;     // int_0^y phi k
    Pchip int_psi_k_;     // int_0^y psi k
    Pchip int_psi_w_;     // int_0^y Psi (speed-weighted)
    Pchip int_phi_tail_;  // int_y^cutoff Phi plus the analytic tail
    Pchip inv_cdf_;       // normalized invariant CDF
    double phi_k_total_ = 0.0;
    double inv_norm_ = 0.0;
};

JumpSample step_chain(double cur_y, const KillingKernel& kernel, Xoshiro256pp& rng);

ChainRun run_chain(const KillingKernel& kernel, std::size_t n, std::size_t burn_in,
                   std::uint64_t seed);

// Ratio estimator sum(w)/sum(eta_mean) with a 20-batch batch-means standard
// error. BM with general gamma runs the canonical chain and rescales.
Estimate chain_speed(const RatchetParams& params, std::size_t n, std::size_t burn_in,
                     std::uint64_t seed);

// Regeneration increments (rho_{i+1}-rho_i, X_{rho_{i+1}}-X_{rho_i}) between
// successive touch-then-jump cycles of a simulated path.
std::vector<std::pair<double, double>> extract_regenerations(const RatchetPath& path);

}  // namespace ratchetlab
