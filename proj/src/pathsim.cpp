#include "ratchetlab/pathsim.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "ratchetlab/rng.hpp"

namespace ratchetlab {

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be > 0");
    if (!(horizon > 0.0) || dt > horizon)
        throw std::invalid_argument("SimConfig: horizon must be >= dt > 0");
    if (dt > 0.01) throw std::invalid_argument("SimConfig: dt must be <= 0.01 (bias control)");
    if (x0 < 0.0) throw std::invalid_argument("SimConfig: x0 must be >= 0");
}

std::vector<double> simulate_rbm(double mu, const SimConfig& config) {
    if (mu < 0.0) throw std::invalid_argument("simulate_rbm: mu must be >= 0");
    config.validate();
    const std::size_t n = static_cast<std::size_t>(std::ceil(config.horizon / config.dt));
    Xoshiro256pp noise(derive_seed(config.seed, 0, StreamPurpose::noise));
    const double sq_dt = std::sqrt(config.dt);
    std::vector<double> z(n + 1);
    double b = 0.0, m = 0.0;
    z[0] = config.x0;
    for (std::size_t k = 1; k <= n; ++k) {
        b += mu * config.dt + sq_dt * noise.gaussian();
        if (b > m) m = b;
        z[k] = std::max(config.x0, m) - b;
    }
    return z;
}

std::vector<double> simulate_rou(double mu, const SimConfig& config) {
    if (!(mu > 0.0)) throw std::invalid_argument("simulate_rou: mu must be > 0");
    config.validate();
    const std::size_t n = static_cast<std::size_t>(std::ceil(config.horizon / config.dt));
    Xoshiro256pp noise(derive_seed(config.seed, 0, StreamPurpose::noise));
    const double alpha = std::exp(-mu * config.dt);
    const double sig = std::sqrt((1.0 - alpha * alpha) / (2.0 * mu));
    std::vector<double> z(n + 1);
    z[0] = config.x0;
    double cur = config.x0;
    for (std::size_t k = 1; k <= n; ++k) {
        cur = std::abs(cur * alpha + sig * noise.gaussian());
        z[k] = cur;
    }
    return z;
}

namespace {

struct JumpClock {
    double threshold;
    double acc = 0.0;

    explicit JumpClock(Xoshiro256pp& rng) : threshold(rng.exponential()) {}

    // Returns the in-step fraction of the crossing, or a negative value if the
    // clock did not ring. dh is the hazard accumulated over this step.
    double advance(double dh, Xoshiro256pp& rng) {
        if (acc + dh >= threshold) {
            const double theta = dh > 0.0 ? (threshold - acc) / dh : 1.0;
            acc = 0.0;
            threshold = rng.exponential();
            return theta;
        }
        acc += dh;
        return -1.0;
    }
};

void init_path(RatchetPath* path, const SimConfig& config, std::size_t n) {
    path->dt = config.dt;
    path->times.resize(n + 1);
    path->x.resize(n + 1);
    path->r.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) path->times[k] = static_cast<double>(k) * config.dt;
    path->x[0] = config.x0;
    path->r[0] = 0.0;
}

}  // namespace

RatchetPath simulate_bm_ratchet(const RatchetParams& params, const SimConfig& config) {
    if (params.model != Model::BM)
        throw std::invalid_argument("simulate_bm_ratchet: params.model must be BM");
    if (params.gamma < 0.0 || params.mu < 0.0)
        throw std::invalid_argument("simulate_bm_ratchet: gamma, mu must be >= 0");
    config.validate();

    const std::size_t n = static_cast<std::size_t>(std::ceil(config.horizon / config.dt));
    Xoshiro256pp noise(derive_seed(config.seed, 0, StreamPurpose::noise));
    Xoshiro256pp jrng(derive_seed(config.seed, 0, StreamPurpose::jump));
    JumpClock clock(jrng);

    RatchetPath path;
    init_path(&path, config, n);

    const double sq_dt = std::sqrt(config.dt);
    double b = 0.0;          // driving BM with drift +mu (so the gap drifts at -mu)
    double s = config.x0;    // running-max process with jump-down resets
    double rb = 0.0;         // boundary level
    double gap_prev = s - b;
    bool prev_touch = (gap_prev == 0.0);
    if (prev_touch) path.touch_times.push_back(0.0);

    for (std::size_t k = 1; k <= n; ++k) {
        const double t = path.times[k];
        b += params.mu * config.dt + sq_dt * noise.gaussian();
        bool touch = false;
        if (b >= s) {
            s = b;
            touch = true;  // X = R exactly: the driving path set a new maximum
        }
        double gap = s - b;
        if (params.gamma > 0.0) {
            const double dh = 0.5 * params.gamma * (gap_prev + gap) * config.dt;
            const double theta = clock.advance(dh, jrng);
            if (theta >= 0.0 && gap > 0.0) {
                const double v = jrng.uniform();  // new boundary height fraction
                const double r_before = rb;
                const double x_here = rb + gap;
                const double s_new = b + v * gap;
                rb += s - s_new;  // boundary climbs by (1-v)*gap
                s = s_new;
                path.jumps.push_back(JumpEvent{t - config.dt + theta * config.dt, r_before, rb, x_here});
                gap = s - b;
            }
        }
        if (touch && !prev_touch) path.touch_times.push_back(t);
        prev_touch = touch;
        path.x[k] = rb + gap;
        path.r[k] = rb;
        gap_prev = gap;
    }
    return path;
}

RatchetPath simulate_ou_ratchet(const RatchetParams& params, const SimConfig& config) {
    if (params.model != Model::OU)
        throw std::invalid_argument("simulate_ou_ratchet: params.model must be OU");
    if (!(params.mu > 0.0))
        throw std::invalid_argument("simulate_ou_ratchet: mu must be > 0");
    if (params.gamma < 0.0)
        throw std::invalid_argument("simulate_ou_ratchet: gamma must be >= 0");
    config.validate();

    const std::size_t n = static_cast<std::size_t>(std::ceil(config.horizon / config.dt));
    Xoshiro256pp noise(derive_seed(config.seed, 0, StreamPurpose::noise));
    Xoshiro256pp jrng(derive_seed(config.seed, 0, StreamPurpose::jump));
    Xoshiro256pp brng(derive_seed(config.seed, 0, StreamPurpose::bridge));
    JumpClock clock(jrng);

    RatchetPath path;
    init_path(&path, config, n);

    const double alpha = std::exp(-params.mu * config.dt);
    const double sig = std::sqrt((1.0 - alpha * alpha) / (2.0 * params.mu));
    double shat = config.x0;  // current segment value = gap
    double rb = 0.0;
    bool prev_touch = (shat == 0.0);
    if (prev_touch) path.touch_times.push_back(0.0);

    for (std::size_t k = 1; k <= n; ++k) {
        const double t = path.times[k];
        const double z = shat * alpha + sig * noise.gaussian();
        bool touch = false;
        if (z <= 0.0) {
            touch = true;
        } else {
            // within-step zero hit of the segment (Brownian-bridge correction)
            const double p_hit = std::exp(-2.0 * shat * z / config.dt);
            if (brng.uniform() < p_hit) touch = true;
        }
        double gap = std::abs(z);
        if (params.gamma > 0.0) {
            const double dh = 0.5 * params.gamma * (shat + gap) * config.dt;
            const double theta = clock.advance(dh, jrng);
            if (theta >= 0.0 && gap > 0.0) {
                const double v = jrng.uniform();  // Poisson point height fraction on [0, S]
                const double r_before = rb;
                const double x_here = rb + gap;
                const double z_new = v * gap;  // new segment start
                rb += gap - z_new;
                path.jumps.push_back(JumpEvent{t - config.dt + theta * config.dt, r_before, rb, x_here});
                gap = z_new;
            }
        }
        if (touch && !prev_touch) path.touch_times.push_back(t);
        prev_touch = touch;
        shat = gap;
        path.x[k] = rb + shat;
        path.r[k] = rb;
    }
    return path;
}

CouplingResult simulate_coupling(const RatchetParams& params, double x_hi, double x_lo,
                                 const SimConfig& config) {
    if (!(x_hi >= x_lo) || x_lo < 0.0)
        throw std::invalid_argument("simulate_coupling: needs x_hi >= x_lo >= 0");
    config.validate();
    if (x_hi == x_lo) return CouplingResult{0.0, false};

    const std::size_t n = static_cast<std::size_t>(std::ceil(config.horizon / config.dt));
    Xoshiro256pp noise(derive_seed(config.seed, 0, StreamPurpose::noise));
    Xoshiro256pp jrng(derive_seed(config.seed, 0, StreamPurpose::jump));
    Xoshiro256pp brng(derive_seed(config.seed, 0, StreamPurpose::bridge));
    JumpClock clock(jrng);

    if (params.model == Model::BM) {
        if (params.mu < 0.0 || params.gamma < 0.0)
            throw std::invalid_argument("simulate_coupling: gamma, mu must be >= 0");
        const double sq_dt = std::sqrt(config.dt);
        double b = 0.0, s_hi = x_hi, s_lo = x_lo;
        double gap_prev = s_hi - b;
        for (std::size_t k = 1; k <= n; ++k) {
            b += params.mu * config.dt + sq_dt * noise.gaussian();
            if (b >= s_hi) {
                // the driving path reached the larger maximum: both coincide
                return CouplingResult{static_cast<double>(k) * config.dt, false};
            }
            if (b > s_lo) s_lo = b;
            double gap = s_hi - b;
            if (params.gamma > 0.0) {
                const double dh = 0.5 * params.gamma * (gap_prev + gap) * config.dt;
                const double theta = clock.advance(dh, jrng);
                if (theta >= 0.0 && gap > 0.0) {
                    // one Poisson point on the upper strip, shared by thinning
                    const double height = b + jrng.uniform() * gap;
                    s_hi = height;
                    if (height <= s_lo) {
                        return CouplingResult{static_cast<double>(k) * config.dt, false};
                    }
                    gap = s_hi - b;
                }
            }
            if (s_hi < s_lo) throw std::logic_error("simulate_coupling: BM domination violated");
            gap_prev = gap;
        }
        return CouplingResult{config.horizon, true};
    }

    // OU model
    if (!(params.mu > 0.0))
        throw std::invalid_argument("simulate_coupling: OU needs mu > 0");
    const double alpha = std::exp(-params.mu * config.dt);
    const double sig = std::sqrt((1.0 - alpha * alpha) / (2.0 * params.mu));
    double s_hi = x_hi, s_lo = x_lo;
    for (std::size_t k = 1; k <= n; ++k) {
        const double g = noise.gaussian();
        const double z_hi = s_hi * alpha + sig * g;
        const double z_lo = s_lo * alpha + sig * g;
        if (z_hi - z_lo < -1e-12)
            throw std::logic_error("simulate_coupling: OU segment ordering violated");
        if (z_hi <= 0.0) {
            return CouplingResult{static_cast<double>(k) * config.dt, false};
        }
        const double p_hit = std::exp(-2.0 * s_hi * z_hi / config.dt);
        if (brng.uniform() < p_hit) {
            return CouplingResult{static_cast<double>(k) * config.dt, false};
        }
        s_hi = z_hi;
        s_lo = std::abs(z_lo);
        if (s_lo > s_hi) std::swap(s_hi, s_lo);  // reflection flip near zero
        if (params.gamma > 0.0) {
            const double dh = params.gamma * s_hi * config.dt;
            const double theta = clock.advance(dh, jrng);
            if (theta >= 0.0 && s_hi > 0.0) {
                const double height = jrng.uniform() * s_hi;
                if (height <= s_lo) {
                    // shared Poisson point: both segments restart at the same value
                    return CouplingResult{static_cast<double>(k) * config.dt, false};
                }
                s_hi = height;  // upper-only jump keeps the ordering
            }
        }
    }
    return CouplingResult{config.horizon, true};
}

bool validate_path(const RatchetPath& path, std::string* why) {
    auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    const std::size_t n = path.times.size();
    if (n == 0 || path.x.size() != n || path.r.size() != n) return fail("array size mismatch");
    if (path.r[0] != 0.0) return fail("boundary must start at 0");
    std::size_t j = 0;
    for (std::size_t k = 1; k < n; ++k) {
        if (path.r[k] < path.r[k - 1]) return fail("boundary decreased");
        if (path.x[k] < path.r[k] - 1e-9) return fail("particle below boundary");
        const double dr = path.r[k] - path.r[k - 1];
        if (dr != 0.0) {
            if (j >= path.jumps.size()) return fail("boundary moved without a jump event");
            const JumpEvent& e = path.jumps[j];
            if (!(e.t > path.times[k - 1] - 1e-12 && e.t <= path.times[k] + 1e-12))
                return fail("jump time outside its grid step");
            if (std::abs((e.r_after - e.r_before) - dr) > 1e-12)
                return fail("boundary increment does not match jump event");
            ++j;
        }
    }
    if (j != path.jumps.size()) return fail("unconsumed jump events");
    for (const JumpEvent& e : path.jumps) {
        if (!(e.r_before <= e.r_after && e.r_after <= e.x + 1e-12))
            return fail("jump event ordering r_before <= r_after <= x violated");
    }
    return true;
}

namespace {

void put_fixed17(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    os << buf;
}

}  // namespace

void write_path_csv(std::ostream& os, const RatchetPath& path) {
    os << "t,x,r\n";
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        put_fixed17(os, path.times[k]);
        os << ',';
        put_fixed17(os, path.x[k]);
        os << ',';
        put_fixed17(os, path.r[k]);
        os << '\n';
    }
}

void write_jumps_csv(std::ostream& os, const RatchetPath& path) {
    os << "t,r_before,r_after,x\n";
    for (const JumpEvent& e : path.jumps) {
        put_fixed17(os, e.t);
        os << ',';
        put_fixed17(os, e.r_before);
        os << ',';
        put_fixed17(os, e.r_after);
        os << ',';
        put_fixed17(os, e.x);
        os << '\n';
    }
}

}  // namespace ratchetlab
