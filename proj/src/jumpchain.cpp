#include "ratchetlab/jumpchain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ratchetlab/quadrature.hpp"

namespace ratchetlab {

// ---------------------------------------------------------------------------
// Monotone cubic interpolation (Fritsch-Carlson).
// ---------------------------------------------------------------------------

Pchip::Pchip(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    if (n < 2 || ys_.size() != n) throw std::invalid_argument("Pchip: need >= 2 nodes");
    d_.resize(n);
    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = xs_[i + 1] - xs_[i];
        if (!(h[i] > 0.0)) throw std::invalid_argument("Pchip: x nodes must increase");
        s[i] = (ys_[i + 1] - ys_[i]) / h[i];
    }
    d_[0] = s[0];
    d_[n - 1] = s[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (s[i - 1] * s[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
        }
    }
    // clamp endpoint slopes to preserve monotonicity
    auto clamp_end = [](double& d, double sec) {
        if (sec == 0.0)
            d = 0.0;
        else if (d * sec < 0.0)
            d = 0.0;
        else if (std::abs(d) > 3.0 * std::abs(sec))
            d = 3.0 * sec;
    };
    clamp_end(d_[0], s[0]);
    clamp_end(d_[n - 1], s[n - 2]);
}

std::size_t Pchip::interval(double x) const {
    if (x <= xs_.front()) return 0;
    if (x >= xs_.back()) return xs_.size() - 2;
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    return static_cast<std::size_t>(it - xs_.begin()) - 1;
}

double Pchip::operator()(double x) const {
    const std::size_t i = interval(x);
    const double h = xs_[i + 1] - xs_[i];
    const double t = (x - xs_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * ys_[i] + h10 * h * d_[i] + h01 * ys_[i + 1] + h11 * h * d_[i + 1];
}

double Pchip::derivative(double x) const {
    const std::size_t i = interval(x);
    const double h = xs_[i + 1] - xs_[i];
    const double t = (x - xs_[i]) / h;
    const double t2 = t * t;
    const double dh00 = (6 * t2 - 6 * t) / h;
    const double dh10 = 3 * t2 - 4 * t + 1;
    const double dh01 = (-6 * t2 + 6 * t) / h;
    const double dh11 = 3 * t2 - 2 * t;
    return dh00 * ys_[i] + dh10 * d_[i] + dh01 * ys_[i + 1] + dh11 * d_[i + 1];
}

double Pchip::invert(double target) const {
    if (target <= ys_.front()) return xs_.front();
    if (target >= ys_.back()) return xs_.back();
    const auto it = std::lower_bound(ys_.begin(), ys_.end(), target);
    std::size_t i = static_cast<std::size_t>(it - ys_.begin());
    if (i > 0) --i;
    double lo = xs_[i], hi = xs_[i + 1];
    if (ys_[i + 1] == ys_[i]) return lo;  // flat (underflowed tail) interval
    double x = lo + (hi - lo) * (target - ys_[i]) / (ys_[i + 1] - ys_[i]);
    for (int iter = 0; iter < 60; ++iter) {
        const double f = (*this)(x)-target;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        const double df = derivative(x);
        double step = df != 0.0 ? x - f / df : 0.5 * (lo + hi);
        if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);
        if (std::abs(step - x) < 1e-15 * (1.0 + std::abs(x))) return step;
        x = step;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Killing kernel tables.
// ---------------------------------------------------------------------------

namespace {

constexpr int kNodes = 2048;

std::vector<double> make_grid(double cutoff, int nodes) {
    // geometric spacing near zero: increments grow by the constant factor
    // e^{c/nodes}
    constexpr double c = 8.0;
    std::vector<double> g(nodes + 1);
    const double denom = std::expm1(c);
    for (int i = 0; i <= nodes; ++i) g[i] = cutoff * std::expm1(c * i / nodes) / denom;
    g[0] = 0.0;
    g[nodes] = cutoff;
    return g;
}

// cumulative integrals of w over the grid, from the left
std::vector<double> cumulative(const std::vector<double>& grid,
                               const std::function<double(double)>& w) {
    std::vector<double> out(grid.size());
    out[0] = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        out[i] = out[i - 1] +
                 integrate_adaptive(w, grid[i - 1], grid[i], 1e-15 * (1.0 + std::abs(out[i - 1])),
                                    1e-12, 200);
    }
    return out;
}

}  // namespace

void KillingKernel::build_tables(double cutoff, int nodes) {
    cutoff_ = cutoff;
    const std::vector<double> grid = make_grid(cutoff, nodes);

    auto phi_k = [this](double y) { return basis_.phi(y) * killing_weight_(y); };
    auto psi_k = [this](double y) { return basis_.psi(y) * killing_weight_(y); };

    std::vector<double> p = cumulative(grid, phi_k);
    std::vector<double> q = cumulative(grid, psi_k);
    std::vector<double> iw = cumulative(grid, basis_.Psi);

    const DecayHint hint = DecayHint::EXP;
    const double phi_k_tail = integrate_semiinfinite(phi_k, hint, cutoff, 1e-13);
    phi_k_total_ = p.back() + phi_k_tail;

    // right tail of Phi: T(y) = int_y^cutoff Phi + analytic remainder
    std::vector<double> phitail(grid.size());
    phitail.back() = integrate_semiinfinite(basis_.Phi, hint, cutoff, 1e-13);
    for (std::size_t i = grid.size() - 1; i-- > 0;) {
        phitail[i] = phitail[i + 1] +
                     integrate_adaptive(basis_.Phi, grid[i], grid[i + 1], 1e-15, 1e-12, 200);
    }

    std::vector<double> inv = cumulative(grid, invariant_weight_);
    const double inv_tail = integrate_semiinfinite(invariant_weight_, hint, cutoff, 1e-13);
    inv_norm_ = inv.back() + inv_tail;
    for (double& v : inv) v /= inv_norm_;

    int_phi_k_ = Pchip(grid, std::move(p));
    int_psi_k_ = Pchip(grid, std::move(q));
    int_psi_w_ = Pchip(grid, std::move(iw));
    // store the tail as an increasing function of y to keep Pchip monotone
    std::vector<double> negtail(phitail.size());
    for (std::size_t i = 0; i < phitail.size(); ++i) negtail[i] = -phitail[i];
    int_phi_tail_ = Pchip(grid, std::move(negtail));
    inv_cdf_ = Pchip(grid, std::move(inv));

    // the tabulated mass must essentially exhaust the killing law for the
    // starts this kernel will serve
    for (double x : {0.0, 0.25 * cutoff, 0.5 * cutoff}) {
        const double mass = basis_.phi(x) * int_psi_k_(x) +
                            basis_.psi(x) * (int_phi_k_.ys().back() - int_phi_k_(x));
        if (!(mass > 1.0 - 1e-7) || !(mass < 1.0 + 1e-6))
            throw std::runtime_error(
                "KillingKernel: tabulated CDF mass does not reach 1 by the grid cutoff");
    }
}

KillingKernel KillingKernel::bm(double mu_canonical) {
    if (mu_canonical < 0.0) throw std::invalid_argument("KillingKernel::bm: mu must be >= 0");
    KillingKernel k;
    k.basis_ = bm_green_basis(mu_canonical);
    const double mu = mu_canonical;
    k.killing_weight_ = [mu](double y) { return y * std::exp(-2.0 * mu * y); };
    k.invariant_weight_ = k.basis_.Phi;
    double cutoff = 16.0;
    // extend until the unreachable tail is negligible even from large starts
    for (int i = 0; i < 20; ++i) {
        const double tail = integrate_semiinfinite(
            [&](double y) { return k.basis_.phi(y) * k.killing_weight_(y); }, DecayHint::EXP,
            cutoff, 1e-14);
        if (k.basis_.psi(0.5 * cutoff) * tail < 1e-11) break;
        cutoff *= 1.3;
    }
    k.build_tables(cutoff, kNodes);
    return k;
}

KillingKernel KillingKernel::ou(const RatchetParams& params) {
    if (params.model != Model::OU)
        throw std::invalid_argument("KillingKernel::ou: params.model must be OU");
    KillingKernel k;
    k.basis_ = ou_green_basis(params);
    const double mu = params.mu, gamma = params.gamma;
    k.killing_weight_ = [mu, gamma](double y) {
        return 2.0 * gamma * y * std::exp(-mu * y * y);
    };
    k.invariant_weight_ = [params](double y) { return ou_h(params, y); };
    double cutoff = 6.0 + 8.0 / std::sqrt(mu);
    for (int i = 0; i < 20; ++i) {
        const double tail = integrate_semiinfinite(
            [&](double y) { return k.basis_.phi(y) * k.killing_weight_(y); }, DecayHint::GAUSS,
            cutoff, 1e-14);
        if (k.basis_.psi(0.5 * cutoff) * tail < 1e-11) break;
        cutoff *= 1.3;
    }
    k.build_tables(cutoff, kNodes);
    return k;
}

double KillingKernel::killing_density(double x, double y) const {
    return basis_.green(x, y) * killing_weight_(y);
}

double KillingKernel::killing_cdf(double x, double y) const {
    y = std::min(y, cutoff_);
    const double head = basis_.phi(x) * int_psi_k_(std::min(y, x));
    double out = head;
    if (y > x) out += basis_.psi(x) * (int_phi_k_(y) - int_phi_k_(x));
    const double mass =
        basis_.phi(x) * int_psi_k_(x) + basis_.psi(x) * (phi_k_total_ - int_phi_k_(x));
    return out / mass;
}

double KillingKernel::sample_position(double x, Xoshiro256pp& rng) const {
    if (x < 0.0) throw std::invalid_argument("sample_position: x must be >= 0");
    if (x > 0.5 * cutoff_)
        throw std::runtime_error("sample_position: start beyond the tabulated support");
    const double phix = basis_.phi(x);
    const double psix = basis_.psi(x);
    const double qx = int_psi_k_(x);
    const double px = int_phi_k_(x);
    const double mass = phix * qx + psix * (phi_k_total_ - px);
    const double target = rng.uniform() * mass;
    if (target <= phix * qx && x > 0.0) {
        return int_psi_k_.invert(target / phix);
    }
    const double ptarget = px + (target - phix * qx) / psix;
    return int_phi_k_.invert(ptarget);
}

double KillingKernel::expected_eta(double x) const {
    if (x < 0.0) throw std::invalid_argument("expected_eta: x must be >= 0");
    if (x > cutoff_) throw std::runtime_error("expected_eta: start beyond the tabulated support");
    return 2.0 * (basis_.phi(x) * int_psi_w_(x) + basis_.psi(x) * (-int_phi_tail_(x)));
}

double KillingKernel::invariant_pdf(double y) const { return invariant_weight_(y) / inv_norm_; }

double KillingKernel::invariant_cdf(double y) const {
    if (y <= 0.0) return 0.0;
    if (y >= cutoff_) return 1.0;
    return inv_cdf_(y);
}

// ---------------------------------------------------------------------------
// Chain driver.
// ---------------------------------------------------------------------------

JumpSample step_chain(double cur_y, const KillingKernel& kernel, Xoshiro256pp& rng) {
    if (cur_y < 0.0) throw std::invalid_argument("step_chain: cur_y must be >= 0");
    const double eta = kernel.expected_eta(cur_y);
    const double z = kernel.sample_position(cur_y, rng);
    const double u = rng.uniform();
    return JumpSample{u * z, (1.0 - u) * z, eta};
}

ChainRun run_chain(const KillingKernel& kernel, std::size_t n, std::size_t burn_in,
                   std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("run_chain: n must be >= 1");
    Xoshiro256pp rng(derive_seed(seed, 0, StreamPurpose::jump));
    ChainRun run;
    run.burn_in = burn_in;
    run.seed = seed;
    run.samples.reserve(n);
    double y = 0.0;
    for (std::size_t i = 0; i < burn_in; ++i) y = step_chain(y, kernel, rng).y;
    for (std::size_t i = 0; i < n; ++i) {
        const JumpSample s = step_chain(y, kernel, rng);
        run.samples.push_back(s);
        y = s.y;
    }
    return run;
}

Estimate chain_speed(const RatchetParams& params, std::size_t n, std::size_t burn_in,
                     std::uint64_t seed) {
    if (!(params.gamma > 0.0))
        throw std::invalid_argument("chain_speed: gamma must be > 0 (no jumps otherwise)");
    double scale = 1.0;
    KillingKernel kernel = [&]() {
        if (params.model == Model::BM) {
            const ScalingMap map = canonicalize_bm(params);
            scale = map.space_scale * map.time_scale;  // (2 gamma)^{1/3}
            return KillingKernel::bm(map.mu_canonical);
        }
        return KillingKernel::ou(params);
    }();
    const ChainRun run = run_chain(kernel, n, burn_in, seed);

    constexpr std::size_t kBatches = 20;
    const std::size_t batch = run.samples.size() / kBatches;
    if (batch == 0) throw std::invalid_argument("chain_speed: need at least 20 samples");
    double w_sum = 0.0, h_sum = 0.0;
    std::vector<double> wb(kBatches, 0.0), hb(kBatches, 0.0);
    for (std::size_t i = 0; i < batch * kBatches; ++i) {
        const auto& s = run.samples[i];
        w_sum += s.w;
        h_sum += s.eta_mean;
        wb[i / batch] += s.w;
        hb[i / batch] += s.eta_mean;
    }
    const double v = w_sum / h_sum;
    const double h_bar = h_sum / static_cast<double>(kBatches);
    double ss = 0.0;
    for (std::size_t j = 0; j < kBatches; ++j) {
        const double zj = wb[j] - v * hb[j];
        ss += zj * zj;
    }
    const double se = std::sqrt(ss / (kBatches * (kBatches - 1.0))) / h_bar;
    return make_estimate(scale * v, scale * se, run.samples.size());
}

std::vector<std::pair<double, double>> extract_regenerations(const RatchetPath& path) {
    std::vector<std::pair<double, double>> increments;
    if (path.touch_times.empty() || path.jumps.empty()) return increments;

    std::vector<std::pair<double, double>> rhos;  // (time, X at touch)
    std::size_t ti = 0, ji = 0;
    bool wait_touch = true;
    while (ti < path.touch_times.size()) {
        if (wait_touch) {
            const double t = path.touch_times[ti++];
            const std::size_t k = static_cast<std::size_t>(std::llround(t / path.dt));
            rhos.emplace_back(t, path.x[std::min(k, path.x.size() - 1)]);
            wait_touch = false;
        } else {
            // next boundary jump strictly after the last regeneration epoch
            while (ji < path.jumps.size() && path.jumps[ji].t < rhos.back().first) ++ji;
            if (ji >= path.jumps.size()) break;
            const double tj = path.jumps[ji++].t;
            while (ti < path.touch_times.size() && path.touch_times[ti] < tj) ++ti;
            wait_touch = true;
        }
    }
    for (std::size_t i = 1; i < rhos.size(); ++i) {
        increments.emplace_back(rhos[i].first - rhos[i - 1].first,
                                rhos[i].second - rhos[i - 1].second);
    }
    return increments;
}

}  // namespace ratchetlab
