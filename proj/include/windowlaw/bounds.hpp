#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "windowlaw/distribution.hpp"
#include "windowlaw/norming.hpp"

namespace windowlaw {

/// exp{-(eps^2 (1-delta)^3 / sigma^2) d_n} — the upper exponential bound.
double upper_bound_34(const BoundParams& params, double d_n);

/// exp{-(eps^2 (1+delta)^2 (1+gamma) / (sigma^2 (1-delta))) d_n} — the lower one.
double lower_bound_36(const BoundParams& params, double d_n);

enum class SeriesVerdict { Converges, Diverges, Borderline };
std::string to_string(SeriesVerdict v);

struct BorelCantelliReport {
    double alpha = 0;
    std::int64_t k_max = 0;
    // Partial sums of exp(-alpha d_{n_k}) at k_max/4, k_max/2, k_max.
    double partial_quarter = 0;
    double partial_half = 0;
    double partial_full = 0;
    double slope = 0;            // least-squares slope of d_{n_k} against log k
    double decay_exponent = 0;   // alpha * slope; summand ~ k^-decay_exponent
    SeriesVerdict verdict = SeriesVerdict::Borderline;
};

/// Classify sum_k exp(-alpha d_{n_k}) by the fitted decay exponent of the
/// summand against k (margin 0.1 around the critical exponent 1).
BorelCantelliReport borel_cantelli_diagnostic(const SubsequenceSpec& sub, double alpha,
                                              std::int64_t k_max);

struct KhjReport {
    int n = 0;
    double x = 0, y = 0;
    double lhs = 0;        // P(|S_n| > 2x + y)
    double sum_tails = 0;  // sum_k P(|X_k| > y)
    double four_p_sq = 0;  // 4 P(|S_n| > x)^2
    double slack = 0;      // rhs - lhs
    bool holds = false;
};

/// Exact check of P(|S_n| > 2x+y) <= sum_k P(|X_k| > y) + 4 P(|S_n| > x)^2
/// by binomial enumeration. Requires a two-valued summand and n <= 22.
KhjReport khj_check(int n, double x, double y, const DistributionSpec& dist);

struct LevyReport {
    int n = 0;
    double x = 0;
    double lhs = 0; // P(max_{k<=n} S_k > x)
    double rhs = 0; // 2 P(S_n > x)
    bool holds = false;
};

/// Exact check of the maximal inequality for symmetric two-valued summands.
LevyReport levy_check(int n, double x, const DistributionSpec& dist);

/// Cumulant model for the Chernoff/Cramér machinery.
struct RateFunctionModel {
    DistributionSpec dist = DistributionSpec::rademacher();
    double t_max = 50.0; // minimization bracket cap for unbounded-minimizer laws

    explicit RateFunctionModel(const DistributionSpec& d);
    double x_max() const { return dist.x_max(); }
};

/// I(x) = sup_t (tx - log E e^{tX}) for x in [0, x_max]; at x = x_max
/// (bounded support) returns the limit -log P(X = x_max).
double cramer_rate(const RateFunctionModel& model, double x);

/// rho(c) = sup{x >= 0 : I(x) <= 1/c}, by bisection; returns x_max when the
/// rate saturates below 1/c.
double er_rho(const RateFunctionModel& model, double c);

struct ErSimResult {
    double variant_a = 0; // window width ceil(c log k), statistic T/(c log k)
    double variant_b = 0; // classical fixed width ceil(c log n), statistic T/(c log n)
};

/// Empirical max of normalized delayed sums over log-width windows.
ErSimResult er_simulate(const RateFunctionModel& model, double c, std::int64_t n,
                        std::uint64_t seed);

} // namespace windowlaw
