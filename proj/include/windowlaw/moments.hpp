#pragma once

#include <string>
#include <vector>

#include "windowlaw/distribution.hpp"
#include "windowlaw/norming.hpp"
#include "windowlaw/slowly_varying.hpp"

namespace windowlaw {

enum class ConditionMode { FInverse, BInverse };
enum class ConditionKind { FInverse, BInverse, CorollaryClosedForm };
enum class Verdict { Finite, Infinite, Undetermined };
enum class MomentMethod { ClosedForm, Quadrature, TailComparison };

struct MomentVerdict {
    ConditionKind condition = ConditionKind::FInverse;
    SvFamily family = SvFamily::LogPow; // which closed form, for CorollaryClosedForm
    double estimate = 0;                // expectation value; +inf when divergent
    Verdict verdict = Verdict::Finite;
    MomentMethod method = MomentMethod::ClosedForm;
    double error_bound = 0;
};

std::string to_string(Verdict v);
std::string to_string(ConditionKind c);
std::string to_string(MomentMethod m);

/// Decide E w(X) < infinity for w = f_inverse(x^2) (window-length condition)
/// or w = b_inverse(|x|) (single-truncation condition), using the numeric
/// step-function inverses. Light-tailed kinds get a direct estimate; the
/// heavy-tailed family is classified by exponent comparison on the tail
/// integral, Undetermined within 1e-9 of the critical exponent.
MomentVerdict moment_condition(const SlowlyVaryingSpec& spec, const DistributionSpec& dist,
                               ConditionMode mode);

/// Same decision through the per-family closed-form weight:
///   x^2 (log+ x)^p / loglog+ x              [LogPow]
///   x^2                                     [IterLog]
///   x^2 (log+ x)^p / (loglog+ x)^(q+1)      [LogPowOverLogLogPow]
///   x^2 (loglog+ x)^(q-1)                   [LogLogPow]
///   x^2 exp(sqrt(2 log+ x)) / sqrt(log+ x)  [ExpSqrtLog]
///   x^2 exp((2 log+ x)^beta)/(log+ x)^(beta+gamma)  [ExpLogBeta, beta < 1/2]
/// and the single-truncation variants x^2 L(x^2) d(x^2) for mode BInverse.
MomentVerdict corollary_condition(const SlowlyVaryingSpec& spec, const DistributionSpec& dist,
                                  ConditionMode mode = ConditionMode::FInverse);

struct ComparatorRow {
    double log_exp = 0;
    Verdict f_verdict = Verdict::Finite;
    Verdict b_verdict = Verdict::Finite;
};

/// Sweep the heavy-tail log exponent and report both verdicts per point,
/// exhibiting the gap where the window-length condition holds but the
/// single-truncation condition fails.
std::vector<ComparatorRow> condition_comparator(const SlowlyVaryingSpec& spec,
                                                const std::vector<double>& log_exp_grid,
                                                double tail_power = 3.0,
                                                double x_cut = 7.38905609893065);

namespace detail {

/// Asymptotic shape x^x_pow * exp(sup_coef * (log x)^sup_beta)
/// * (log x)^log_e * (loglog x)^loglog_e * (logloglog x)^log3_e.
struct TailExponents {
    double x_pow = 0;
    double sup_coef = 0;
    double sup_beta = 0.5;
    double log_e = 0;
    double loglog_e = 0;
    double log3_e = 0;
};

TailExponents condition_weight_exponents(const SlowlyVaryingSpec& spec, ConditionMode mode);
Verdict classify_tail_integral(const TailExponents& e, double tol = 1e-9);

} // namespace detail

} // namespace windowlaw
