#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "windowlaw/slowly_varying.hpp"

namespace windowlaw {

/// Slack parameters feeding the exponential-bound expressions and the
/// first truncation level.
struct BoundParams {
    double sigma = 1.0;
    double delta = 0.1; // in (0,1)
    double epsilon = 1.0;
    double gamma = 0.1;

    void validate() const;
};

struct WindowSchedulePoint {
    std::int64_t n = 0;
    std::int64_t a_n = 0;                  // max(1, floor(n / L(n)))
    double d_n = 0;                        // log L(n) + log log n
    double f_n = 0;                        // min(a_n * d_n, n)
    std::optional<double> b_theorem21;     // (sigma delta / epsilon) sqrt(a_n / d_n)
    double b_theorem61 = 0;                // sqrt(a_n / d_n)
    double normalizer = 0;                 // sqrt(2 a_n d_n)
};

/// Smallest integer n >= 16 with n >= x0, L(n) > 1 and log log n > 0.
std::int64_t n_min(const SlowlyVaryingSpec& spec);

WindowSchedulePoint schedule_point(const SlowlyVaryingSpec& spec, std::int64_t n,
                                   std::optional<BoundParams> params = std::nullopt);

/// inf{ x >= n_min : f(x) >= y } on the interpolated step function f(x) = f_[x].
double f_inverse(const SlowlyVaryingSpec& spec, double y);
/// inf{ x >= n_min : b(x) >= y } with b(n) = sqrt(a_n / d_n).
double b_inverse(const SlowlyVaryingSpec& spec, double y);

/// d at n addressed by log n, safe when n itself overflows a double.
double d_from_log_n(const SlowlyVaryingSpec& spec, double log_n);

/// Per-family closed-form asymptote of f^-1(y). Throws std::domain_error for
/// ExpLogBeta with beta >= 1/2 (no closed form is supported in that regime).
double asymptotic_f_inverse(const SlowlyVaryingSpec& spec, double y);

struct SubsequenceSpec {
    SlowlyVaryingSpec spec;
    double c = 2.0;          // > 1 gives eventually disjoint windows
    std::int64_t k_start = 1;
};

/// n_k = round(psi(c k)).
std::int64_t subsequence(const SubsequenceSpec& sub, std::int64_t k);

/// n_k for k in [k_lo, k_hi], computed incrementally (one warm-started
/// Newton solve per k). Much cheaper than repeated psi calls.
std::vector<std::int64_t> subsequence_range(const SubsequenceSpec& sub, std::int64_t k_lo,
                                            std::int64_t k_hi);

struct SubsequenceDiagnostics {
    std::vector<std::int64_t> k;
    std::vector<std::int64_t> n_k;
    std::vector<double> d_over_log_k;   // d_{n_k} / log k
    std::vector<double> step_ratio;     // n_{k+1} / n_k
    std::vector<bool> disjoint;         // n_{k+1} > n_k + a_{n_k}
    std::int64_t first_disjoint_k = -1; // smallest k from which all windows are disjoint
    bool overlap_persists = false;      // true when no such k exists in range
};

SubsequenceDiagnostics subsequence_diagnostics(const SubsequenceSpec& sub,
                                               std::int64_t k_max);

} // namespace windowlaw
