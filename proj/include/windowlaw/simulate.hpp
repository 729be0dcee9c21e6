#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "windowlaw/distribution.hpp"
#include "windowlaw/norming.hpp"
#include "windowlaw/rng.hpp"

namespace windowlaw {

enum class SimMode { CheckpointsOnly, DenseMax };

struct StreamConfig {
    DistributionSpec dist = DistributionSpec::normal(1.0);
    SlowlyVaryingSpec spec = SlowlyVaryingSpec::log_pow(1.0);
    double c = 2.0; // checkpoint spacing; > 1 makes windows eventually disjoint
    std::int64_t n_total = 0;
    std::uint64_t seed = 0;
    SimMode mode = SimMode::CheckpointsOnly;
    int replicates = 1;

    void validate() const;
    std::uint64_t config_hash() const; // stable across runs; guards state files
};

struct CheckpointRecord {
    std::int64_t k = 0;
    std::int64_t n = 0; // n_k
    std::int64_t a = 0; // a_{n_k}
    double d = 0;       // d_{n_k}
    double r = 0;       // window sum / sqrt(2 a d)
    double running_max = 0;
};

struct SimulationResult {
    std::vector<CheckpointRecord> checkpoints;
    double running_max = 0;
    double running_min = 0;
    std::optional<double> dense_max; // SimMode::DenseMax only
    std::uint64_t seed = 0;
    int replicate = 0;
    std::uint64_t config_hash = 0;
    double wall_seconds = 0;
    std::size_t working_bytes = 0; // peak container footprint of the pass
};

/// One replicate: a single deterministic pass evaluating the normalized
/// window sums at every checkpoint k with n_k + a_{n_k} <= n_total.
/// If state_path is non-empty, progress is checkpointed there and a
/// compatible existing file resumes the pass exactly.
SimulationResult run_windows(const StreamConfig& config, int replicate = 0,
                             const std::string& state_path = {});

/// All replicates, merged in replicate order.
std::vector<SimulationResult> run_replicates(const StreamConfig& config);

struct TruncationWindow {
    std::int64_t k = 0, n = 0, a = 0;
    double d = 0, f = 0;
    double cut1 = 0; // first level: (sigma delta / epsilon) sqrt(a/d)
    double cut2 = 0; // second level: delta sqrt(f)
    double t1 = 0, t2 = 0, t3 = 0; // window sums of the three truncated parts
    double total = 0;              // t1 + t2 + t3, the partition identity
    std::int64_t n_large = 0;      // count of summands at or above cut2
    int replicate = 0;
};

struct TruncationStats {
    std::vector<TruncationWindow> windows; // all replicates, replicate-major
    // Pooled over the last ten checkpoints of every replicate:
    double centering_ratio = 0; // |mean of t1 / sqrt(a d)|
    double centering_se = 0;    // Monte Carlo standard error of that mean
    double var_ratio = 0;       // Var(t1 / sqrt(a)) / sigma^2
    std::int64_t large_total = 0;
};

/// Split every window sum at the two truncation levels and report the
/// centering and variance diagnostics of the bounded part.
TruncationStats truncation_experiment(const StreamConfig& config, const BoundParams& params);

struct VarianceBlock {
    double d_mean = 0;
    double sample_var = 0;
    double expected = 0; // sigma^2 / (2 d_mean)
    double ratio = 0;
};

struct VarianceCheckReport {
    std::vector<VarianceBlock> blocks;
    double pooled_ratio = 0;
};

/// Compare the within-block sample variance of the normalized window sums
/// against sigma^2 / (2 d). Needs >= 30 checkpoints pooled.
VarianceCheckReport empirical_variance_check(const std::vector<SimulationResult>& results,
                                             double sigma);

struct LimsupReport {
    std::vector<double> max_over_sigma; // per replicate
    double median = 0;
    double band_lo = 0, band_hi = 0;
    double fraction_in_band = 0;
    double last_quarter_median = 0; // same statistic over the final 25% of checkpoints
};

/// Cross-replicate summary of the running maxima against the target sigma.
LimsupReport limsup_summary(const std::vector<SimulationResult>& results, double sigma,
                            double band_lo, double band_hi);

} // namespace windowlaw
