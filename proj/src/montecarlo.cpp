#include "gbeam/montecarlo.hpp"

#include "gbeam/errors.hpp"
#include "gbeam/outage2d.hpp"
#include "gbeam/outage3d.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>

namespace gbeam {

namespace {

std::uint64_t
splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t
batch_seed(std::uint64_t seed, std::uint64_t index)
{
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

std::uint64_t
batch_count(const McConfig& cfg)
{
    return (cfg.samples + cfg.batch - 1) / cfg.batch;
}

// Runs body(rng, first_sample, n, acc) for every batch and returns the
// per-batch accumulators in batch order.
template <class Acc, class Body>
std::vector<Acc>
run_batches(const McConfig& cfg, Body body)
{
    cfg.validate();
    const std::uint64_t batches = batch_count(cfg);
    std::vector<Acc> out(batches);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        try {
            for (std::uint64_t i = next++; i < batches; i = next++) {
                const std::uint64_t first = i * cfg.batch;
                const std::uint64_t n = std::min(cfg.batch, cfg.samples - first);
                std::mt19937_64 rng(batch_seed(cfg.seed, i));
                body(rng, first, n, out[i]);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next = batches;
        }
    };

    const unsigned threads =
        static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, batches));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

OutageEstimate
proportion(std::uint64_t hits, std::uint64_t n)
{
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return {p, EstimateMethod::MonteCarlo, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

struct PairCounts
{
    std::uint64_t first_only = 0;
    std::uint64_t second_only = 0;
};

McDifference
difference(const std::vector<PairCounts>& counts, std::uint64_t n)
{
    std::uint64_t plus = 0;
    std::uint64_t minus = 0;
    for (const auto& c : counts) {
        plus += c.first_only;
        minus += c.second_only;
    }
    const double nn = static_cast<double>(n);
    const double eps = (static_cast<double>(plus) - static_cast<double>(minus)) / nn;
    const double second_moment = (static_cast<double>(plus) + static_cast<double>(minus)) / nn;
    const double var = std::max(0.0, second_moment - eps * eps);
    return {eps, std::sqrt(var / nn)};
}

std::uint64_t
total(const std::vector<std::uint64_t>& counts)
{
    std::uint64_t sum = 0;
    for (auto c : counts) {
        sum += c;
    }
    return sum;
}

} // namespace

void
McConfig::validate() const
{
    if (samples < kMinMcSamples) {
        throw DomainError("Monte-Carlo samples must be >= " + std::to_string(kMinMcSamples) +
                          ", got " + std::to_string(samples));
    }
    if (batch < 1 || batch > samples) {
        throw DomainError("Monte-Carlo batch must lie in [1, samples]");
    }
    if (workers < 1) {
        throw DomainError("Monte-Carlo workers must be >= 1");
    }
}

std::vector<Eigen::Vector2d>
sample_positions_2d(const PositionError2D& err, double distance, const McConfig& cfg)
{
    const Eigen::Matrix2d root = err.square_root();
    const Eigen::Vector2d mean(0.0, distance);
    std::vector<Eigen::Vector2d> out(cfg.samples);
    run_batches<char>(cfg, [&](std::mt19937_64& rng, std::uint64_t first, std::uint64_t n, char&) {
        std::normal_distribution<double> normal;
        for (std::uint64_t j = 0; j < n; ++j) {
            const double z1 = normal(rng);
            const double z2 = normal(rng);
            out[first + j] = mean + root * Eigen::Vector2d(z1, z2);
        }
    });
    return out;
}

std::vector<Eigen::Vector3d>
sample_positions_3d(const PositionError3D& err, double distance, const McConfig& cfg)
{
    const Eigen::Matrix3d root = err.square_root();
    const Eigen::Vector3d mean(0.0, distance, 0.0);
    std::vector<Eigen::Vector3d> out(cfg.samples);
    run_batches<char>(cfg, [&](std::mt19937_64& rng, std::uint64_t first, std::uint64_t n, char&) {
        std::normal_distribution<double> normal;
        for (std::uint64_t j = 0; j < n; ++j) {
            const double z1 = normal(rng);
            const double z2 = normal(rng);
            const double z3 = normal(rng);
            out[first + j] = mean + root * Eigen::Vector3d(z1, z2, z3);
        }
    });
    return out;
}

OutageEstimate
outage_2d_mc(const LinkBudget& budget, const BeamPattern2D& beam, const PositionError2D& err,
             const McConfig& cfg)
{
    const Eigen::Matrix2d root = err.square_root();
    const double d = budget.distance();
    const double scale = resolve_peak_power(budget, beam) * budget.ae() * free_space_gain(d);
    const double gamma = budget.gamma_th();
    const double am = budget.am();

    const auto counts = run_batches<std::uint64_t>(
        cfg, [&](std::mt19937_64& rng, std::uint64_t, std::uint64_t n, std::uint64_t& hits) {
            std::normal_distribution<double> normal;
            for (std::uint64_t j = 0; j < n; ++j) {
                const double z1 = normal(rng);
                const double z2 = normal(rng);
                const double x = root(0, 0) * z1 + root(0, 1) * z2;
                const double y = d + root(1, 0) * z1 + root(1, 1) * z2;
                const double theta = std::atan2(x, y);
                if (scale * gain_2d(beam, am, theta) <= gamma) {
                    ++hits;
                }
            }
        });
    return proportion(total(counts), cfg.samples);
}

OutageEstimate
outage_3d_mc(const LinkBudget& budget, const BeamPattern3D& beam, const PositionError3D& err,
             const McConfig& cfg)
{
    const Eigen::Matrix3d root = err.square_root();
    const double d = budget.distance();
    const double scale = resolve_peak_power(budget, beam) * budget.ae() * free_space_gain(d);
    const double gamma = budget.gamma_th();
    const double am = budget.am();

    const auto counts = run_batches<std::uint64_t>(
        cfg, [&](std::mt19937_64& rng, std::uint64_t, std::uint64_t n, std::uint64_t& hits) {
            std::normal_distribution<double> normal;
            for (std::uint64_t j = 0; j < n; ++j) {
                const double z1 = normal(rng);
                const double z2 = normal(rng);
                const double z3 = normal(rng);
                const Eigen::Vector3d z(z1, z2, z3);
                const Eigen::Vector3d p = root * z;
                const double x = p[0];
                const double y = d + p[1];
                const double theta = std::atan2(x, y);
                const double phi = std::atan(p[2] / std::hypot(x, y));
                if (scale * gain_3d(beam, am, theta, phi) <= gamma) {
                    ++hits;
                }
            }
        });
    return proportion(total(counts), cfg.samples);
}

McDifference
approx_error_mc_2d(const LinkBudget& budget, const BeamPattern2D& beam, const PositionError2D& err,
                   const McConfig& cfg)
{
    const double k = k_factor(budget, beam);
    const Eigen::Matrix2d root = err.square_root();
    const double d = budget.distance();
    const double kd = k * d;

    const auto counts = run_batches<PairCounts>(
        cfg, [&](std::mt19937_64& rng, std::uint64_t, std::uint64_t n, PairCounts& c) {
            std::normal_distribution<double> normal;
            for (std::uint64_t j = 0; j < n; ++j) {
                const double z1 = normal(rng);
                const double z2 = normal(rng);
                const double ax = std::abs(root(0, 0) * z1 + root(0, 1) * z2);
                const double y = d + root(1, 0) * z1 + root(1, 1) * z2;
                const bool cone = ax >= k * y;
                const bool strip = ax >= kd;
                c.first_only += cone && !strip;
                c.second_only += strip && !cone;
            }
        });
    return difference(counts, cfg.samples);
}

McDifference
approx_error_mc_3d(const LinkBudget& budget, const BeamPattern3D& beam, const PositionError3D& err,
                   const McConfig& cfg)
{
    const double d = budget.distance();
    const double level = threshold_radius_sq(budget, beam) / (d * d);
    const Eigen::Matrix2d a = beam.quadratic_form();
    const Eigen::Matrix3d root = err.square_root();
    const auto form = [&](double u, double v) {
        return a(0, 0) * u * u + 2.0 * a(0, 1) * u * v + a(1, 1) * v * v;
    };

    const auto counts = run_batches<PairCounts>(
        cfg, [&](std::mt19937_64& rng, std::uint64_t, std::uint64_t n, PairCounts& c) {
            std::normal_distribution<double> normal;
            for (std::uint64_t j = 0; j < n; ++j) {
                const double z1 = normal(rng);
                const double z2 = normal(rng);
                const double z3 = normal(rng);
                const Eigen::Vector3d z(z1, z2, z3);
                const Eigen::Vector3d p = root * z;
                const double x = p[0];
                const double y = d + p[1];
                const double theta = std::atan2(x, y);
                const double phi = std::atan(p[2] / std::hypot(x, y));
                const bool cone = form(theta, phi) >= level;
                const bool cylinder = form(x / d, p[2] / d) >= level;
                c.first_only += cone && !cylinder;
                c.second_only += cylinder && !cone;
            }
        });
    return difference(counts, cfg.samples);
}

} // namespace gbeam
