#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ratchetlab/rng.hpp"

namespace ratchetlab {

struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

Estimate make_estimate(std::span<const double> values);
Estimate make_estimate(double mean, double stderr_, std::size_t n);

struct KsReport {
    double statistic = 0.0;
    std::size_t n = 0;
    double p_value = 0.0;
};

// One-sample KS statistic against a reference CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
// Two-sample KS statistic.
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);
// Asymptotic Kolmogorov tail Q(lambda) with lambda = sqrt(n)*statistic.
double ks_pvalue(double statistic, double n_effective);
KsReport ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);

double normal_cdf(double z);

struct LlnVerdict {
    bool pass = false;
    Estimate estimate;
    double reference = 0.0;
    double band = 0.0;  // 3*stderr + bias allowance
};

// Pass iff |mean - v_formula| <= 3*stderr + bias_allowance.
LlnVerdict lln_verdict(std::span<const double> endpoints, double v_formula,
                       double bias_allowance);

// Standardizes X_T - T*v by the empirical standard deviation and KS-tests
// against N(0,1).
KsReport clt_verdict(std::span<const double> endpoints, double v, double horizon);

struct RegenSigma {
    double r = 0.0;       // mean cycle length
    double m = 0.0;       // mean spatial increment
    double beta2 = 0.0;   // variance of dx - dt*m/r
    double sigma = 0.0;   // beta / sqrt(r)
    bool degenerate = false;
};

RegenSigma regen_sigma(std::span<const std::pair<double, double>> increments);

unsigned default_worker_count();

// Runs n seeded tasks, replica i with derived seed (root_seed, i); outputs are
// ordered by replica index regardless of scheduling.
template <typename T>
std::vector<T> run_replicas(std::size_t n, std::uint64_t root_seed,
                            const std::function<T(std::uint64_t seed, std::size_t index)>& task,
                            unsigned workers = 0) {
    if (n == 0) throw std::invalid_argument("run_replicas: n must be >= 1");
    if (workers == 0) workers = default_worker_count();
    std::vector<T> out(n);
    if (workers <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = task(derive_seed(root_seed, i), i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    out[i] = task(derive_seed(root_seed, i), i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace ratchetlab
