#include "ratchetlab/mcstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "ratchetlab/specfun.hpp"

namespace ratchetlab {

Estimate make_estimate(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("make_estimate: empty sample");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = values.size() > 1
                          ? std::sqrt(ss / static_cast<double>(values.size() - 1))
                          : 0.0;
    return make_estimate(mean, sd / std::sqrt(static_cast<double>(values.size())),
                         values.size());
}

Estimate make_estimate(double mean, double stderr_, std::size_t n) {
    Estimate e;
    e.mean = mean;
    e.stderr_ = stderr_;
    e.n = n;
    e.ci_lo = mean - 1.96 * stderr_;
    e.ci_hi = mean + 1.96 * stderr_;
    return e;
}

double normal_cdf(double z) {
    const double half = 0.5 * erf_fn(std::abs(z) * 0.70710678118654752440);
    return z >= 0.0 ? 0.5 + half : 0.5 - half;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, (i + 1.0) / n - f);
        d = std::max(d, f - static_cast<double>(i) / n);
    }
    return d;
}

double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks two-sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(a.size());
        const double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

double ks_pvalue(double statistic, double n_effective) {
    const double lambda = std::sqrt(n_effective) * statistic;
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // theta-function representation, accurate for small lambda
        const double pi = 3.141592653589793238462643383279503;
        double s = 0.0;
        for (int k = 1; k <= 9; k += 2) {
            s += std::exp(-k * k * pi * pi / (8.0 * lambda * lambda));
        }
        const double cdf = std::sqrt(2.0 * pi) / lambda * s;
        return 1.0 - cdf;
    }
    double s = 0.0;
    for (int k = 1; k <= 101; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

KsReport ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
    KsReport r;
    r.n = sample.size();
    r.statistic = ks_statistic(std::move(sample), cdf);
    r.p_value = ks_pvalue(r.statistic, static_cast<double>(r.n));
    return r;
}

LlnVerdict lln_verdict(std::span<const double> endpoints, double v_formula,
                       double bias_allowance) {
    LlnVerdict v;
    v.estimate = make_estimate(endpoints);
    v.reference = v_formula;
    v.band = 3.0 * v.estimate.stderr_ + bias_allowance;
    v.pass = std::abs(v.estimate.mean - v_formula) <= v.band;
    return v;
}

KsReport clt_verdict(std::span<const double> endpoints, double v, double horizon) {
    if (endpoints.size() < 2) throw std::invalid_argument("clt_verdict: need >= 2 endpoints");
    std::vector<double> centered(endpoints.size());
    for (std::size_t i = 0; i < endpoints.size(); ++i) centered[i] = endpoints[i] - horizon * v;
    double mean = 0.0;
    for (double c : centered) mean += c;
    mean /= static_cast<double>(centered.size());
    double ss = 0.0;
    for (double c : centered) ss += (c - mean) * (c - mean);
    const double sd = std::sqrt(ss / static_cast<double>(centered.size() - 1));
    for (double& c : centered) c /= sd;
    return ks_test(std::move(centered), [](double z) { return normal_cdf(z); });
}

RegenSigma regen_sigma(std::span<const std::pair<double, double>> increments) {
    if (increments.size() < 2) throw std::invalid_argument("regen_sigma: need >= 2 increments");
    RegenSigma out;
    double st = 0.0, sx = 0.0;
    for (const auto& [dt, dx] : increments) {
        st += dt;
        sx += dx;
    }
    const double n = static_cast<double>(increments.size());
    out.r = st / n;
    out.m = sx / n;
    const double rate = out.m / out.r;
    double ss = 0.0, vt = 0.0;
    for (const auto& [dt, dx] : increments) {
        const double resid = dx - dt * rate;
        ss += resid * resid;
        vt += (dt - out.r) * (dt - out.r);
    }
    out.beta2 = ss / (n - 1.0);
    out.sigma = std::sqrt(out.beta2 / out.r);
    out.degenerate = vt == 0.0;
    return out;
}

unsigned default_worker_count() {
    if (const char* env = std::getenv("RATCHETLAB_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace ratchetlab
