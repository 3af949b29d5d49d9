#pragma once

// Seeded Monte-Carlo estimates of the exact outage events.
//
// Samples are split into batches of McConfig::batch draws. Batch i uses its
// own generator seeded from (seed, i) and integer counts are merged in batch
// order, so every estimate is bit-identical for any number of workers.

#include "gbeam/geometry.hpp"
#include "gbeam/outage_types.hpp"

#include <cstdint>
#include <vector>

namespace gbeam {

struct McConfig
{
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    std::uint64_t batch = 65'536;
    unsigned workers = 1;

    /// Throws DomainError unless samples >= 1e4, 1 <= batch <= samples and workers >= 1.
    void validate() const;
};

inline constexpr std::uint64_t kMinMcSamples = 10'000;

struct McDifference
{
    double epsilon;
    double std_error;
};

/// Estimated positions drawn from N([0, d], Sigma), in batch order.
std::vector<Eigen::Vector2d> sample_positions_2d(const PositionError2D& err, double distance,
                                                 const McConfig& cfg);

/// Estimated positions drawn from N([0, d, 0], Sigma), in batch order.
std::vector<Eigen::Vector3d> sample_positions_3d(const PositionError3D& err, double distance,
                                                 const McConfig& cfg);

/// Fraction of draws whose received power, with the beam steered at atan2(x, y),
/// is at most gamma_th. Path loss uses the true distance.
OutageEstimate outage_2d_mc(const LinkBudget& budget, const BeamPattern2D& beam,
                            const PositionError2D& err, const McConfig& cfg);

/// Same for 3D with theta = atan2(x, y) and phi = atan(z / hypot(x, y)).
OutageEstimate outage_3d_mc(const LinkBudget& budget, const BeamPattern3D& beam,
                            const PositionError3D& err, const McConfig& cfg);

/// Pr(|x| >= k y) - Pr(|x| >= k d) on common draws. Throws StateError outside
/// the main-lobe regime.
McDifference approx_error_mc_2d(const LinkBudget& budget, const BeamPattern2D& beam,
                                const PositionError2D& err, const McConfig& cfg);

/// Probability of the exact-angle quadratic-form event minus that of the
/// small-angle (x / d, z / d) event, on common draws.
McDifference approx_error_mc_3d(const LinkBudget& budget, const BeamPattern3D& beam,
                                const PositionError3D& err, const McConfig& cfg);

} // namespace gbeam
