#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace windowlaw {

/// The built-in slowly varying families.
///
///   LogPow(p)                 L(x) = (log x)^p
///   IterLog(m)                L(x) = log_m x   (m-times iterated logarithm)
///   LogPowOverLogLogPow(p,q)  L(x) = (log x)^p / (log log x)^q
///   LogLogPow(q)              L(x) = (log log x)^q,  q > 1
///   ExpSqrtLog                L(x) = exp(sqrt(log x))
///   ExpLogBeta(beta,gamma)    L(x) = (log x)^(-gamma) * exp((log x)^beta)
enum class SvFamily {
    LogPow,
    IterLog,
    LogPowOverLogLogPow,
    LogLogPow,
    ExpSqrtLog,
    ExpLogBeta,
};

class NonConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SlowlyVaryingSpec {
    SvFamily family = SvFamily::LogPow;
    double p = 1.0;       // LogPow, LogPowOverLogLogPow
    double q = 1.0;       // LogPowOverLogLogPow, LogLogPow
    int m = 2;            // IterLog
    double beta = 0.5;    // ExpLogBeta, in (0,1)
    double gamma_exp = 0; // ExpLogBeta exponent on the log prefactor
    double x0 = 0;        // smallest abscissa where L is defined, positive, increasing

    static SlowlyVaryingSpec log_pow(double p);
    static SlowlyVaryingSpec iter_log(int m);
    static SlowlyVaryingSpec log_pow_over_loglog_pow(double p, double q);
    static SlowlyVaryingSpec loglog_pow(double q);
    static SlowlyVaryingSpec exp_sqrt_log();
    static SlowlyVaryingSpec exp_log_beta(double beta, double gamma_exp);

    bool operator==(const SlowlyVaryingSpec&) const = default;
};

/// Compact text form, e.g. "logpow(p=1.5)", "iterlog(m=3)",
/// "explogbeta(beta=0.4,gamma=1)". Case-insensitive on parse.
std::string to_string(const SlowlyVaryingSpec& spec);
SlowlyVaryingSpec parse_sv_spec(const std::string& text);

double eval_L(const SlowlyVaryingSpec& spec, double x);
/// log L(x), computed from per-family closed forms (no exp/log round trip).
double log_eval_L(const SlowlyVaryingSpec& spec, double x);
/// log L addressed by t = log x, safe when x itself overflows a double.
double log_eval_L_at_log(const SlowlyVaryingSpec& spec, double t);
/// r(x) = x L'(x) / L(x), hard-coded closed form per family.
double eval_ratio(const SlowlyVaryingSpec& spec, double x);

struct ConditionReport {
    SlowlyVaryingSpec spec;
    std::vector<double> grid;   // x0 * 2^j
    std::vector<double> ratios; // r at each grid point
    double monotone_from = 0;   // abscissa after which r is non-increasing
    bool verdict = false;
};

/// Checks condition (x L'/L decreasing) on the geometric grid x0*2^j, j=0..60.
ConditionReport verify_condition_12(const SlowlyVaryingSpec& spec);

/// phi(y) = integral over [x0, y] of L(u)/u du. Closed form where available,
/// adaptive quadrature (rel. tol 1e-10) otherwise.
double phi(const SlowlyVaryingSpec& spec, double y);
/// Integral over [y1, y2] of L(u)/u du, y1 <= y2, both >= x0.
double phi_between(const SlowlyVaryingSpec& spec, double y1, double y2);
/// Inverse of phi: the unique y >= x0 with phi(y) = t, t >= 0.
/// |phi(psi(t)) - t| <= 1e-8 * max(1, t).
double psi(const SlowlyVaryingSpec& spec, double t);

/// phi and psi addressed by log x. These stay finite on subsequences whose
/// n_k themselves overflow every machine type (e.g. doubly exponential ones).
double phi_at_log(const SlowlyVaryingSpec& spec, double t);
double phi_log_between(const SlowlyVaryingSpec& spec, double t1, double t2);
/// The t with phi(e^t) = target; log of psi(target), without the range cap.
double psi_log(const SlowlyVaryingSpec& spec, double target);

struct DeBruijnResult {
    double value = 0;    // L#(x)
    double residual = 0; // |L(x * L#(x)) * L#(x) - 1|
    int iterations = 0;
};

/// de Bruijn conjugate L#(x) via the fixed point y = 1/L(x*y), y0 = 1/L(x),
/// iterated until the relative step is <= 1e-12 (at most 200 iterations).
DeBruijnResult de_bruijn_conjugate(const SlowlyVaryingSpec& spec, double x);

/// log(L(t) log t) / log(phi(t)); approaches 1 as t grows.
double lemma31_ratio(const SlowlyVaryingSpec& spec, double t);

} // namespace windowlaw
