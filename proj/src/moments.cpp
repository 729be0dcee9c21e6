#include "windowlaw/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace windowlaw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_plus(double x) { return std::max(std::log(std::max(x, 1.0)), 1.0); }

// Closed-form corollary weight at |x|, per family and mode.
double corollary_weight(const SlowlyVaryingSpec& spec, ConditionMode mode, double x) {
    x = std::fabs(x);
    const double lp = log_plus(x);
    const double llp = std::max(std::log(lp), 1.0);
    const double x2 = x * x;
    if (mode == ConditionMode::FInverse) {
        switch (spec.family) {
        case SvFamily::LogPow: return x2 * std::pow(lp, spec.p) / llp;
        case SvFamily::IterLog: return x2;
        case SvFamily::LogPowOverLogLogPow:
            return x2 * std::pow(lp, spec.p) / std::pow(llp, spec.q + 1.0);
        case SvFamily::LogLogPow: return x2 * std::pow(llp, spec.q - 1.0);
        case SvFamily::ExpSqrtLog: return x2 * std::exp(std::sqrt(2.0 * lp)) / std::sqrt(lp);
        case SvFamily::ExpLogBeta:
            if (spec.beta >= 0.5)
                throw std::domain_error("corollary_condition: no closed form for beta >= 1/2");
            return x2 * std::exp(std::pow(2.0 * lp, spec.beta)) /
                   std::pow(lp, spec.beta + spec.gamma_exp);
        }
    } else {
        // x^2 L(x^2) d(x^2) up to constants, written with log+ chains.
        switch (spec.family) {
        case SvFamily::LogPow: return x2 * std::pow(lp, spec.p) * llp;
        case SvFamily::IterLog: {
            if (spec.m == 2) return x2 * llp * llp;
            if (spec.m == 3) return x2 * std::max(std::log(llp), 1.0) * llp;
            throw std::domain_error("corollary_condition: iterlog depth > 3 unsupported");
        }
        case SvFamily::LogPowOverLogLogPow:
            return x2 * std::pow(lp, spec.p) / std::pow(llp, spec.q - 1.0);
        case SvFamily::LogLogPow: return x2 * std::pow(llp, spec.q + 1.0);
        case SvFamily::ExpSqrtLog: return x2 * std::exp(std::sqrt(2.0 * lp)) * std::sqrt(lp);
        case SvFamily::ExpLogBeta:
            return x2 * std::exp(std::pow(2.0 * lp, spec.beta)) *
                   std::pow(lp, spec.beta - spec.gamma_exp);
        }
    }
    return 0.0;
}

template <typename W>
double atom_expectation(const DistributionSpec& dist, W&& w) {
    switch (dist.kind()) {
    case DistKind::Rademacher: return w(1.0);
    case DistKind::TwoPoint: {
        const double neg = dist.v() * dist.prob() / (1.0 - dist.prob());
        return dist.prob() * w(dist.v()) + (1.0 - dist.prob()) * w(neg);
    }
    case DistKind::Zero: return w(0.0);
    default: throw std::logic_error("atom_expectation: continuous kind");
    }
}

// Composite Simpson of g over [a,b] with n panels (n even).
template <typename G>
double simpson(G&& g, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = g(a) + g(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
    return s * h / 3.0;
}

// E w(|X|) for continuous light-tailed kinds, with a Richardson-style
// error estimate from halving the panel count.
template <typename W>
std::pair<double, double> light_tail_expectation(const DistributionSpec& dist, W&& w) {
    if (dist.kind() == DistKind::UniformSym) {
        const double a = dist.a();
        auto g = [&](double x) { return w(x) / a; };
        const double full = simpson(g, 0.0, a, 2048);
        const double half = simpson(g, 0.0, a, 1024);
        return {full, std::fabs(full - half)};
    }
    if (dist.kind() == DistKind::Normal) {
        const double s = dist.sigma();
        auto g = [&](double x) {
            return 2.0 * w(x) * std::exp(-0.5 * x * x / (s * s)) /
                   (s * std::sqrt(2.0 * M_PI));
        };
        const double hi = 12.0 * s;
        const double full = simpson(g, 0.0, hi, 4096);
        const double half = simpson(g, 0.0, hi, 2048);
        return {full, std::fabs(full - half) + g(hi) * s};
    }
    throw std::logic_error("light_tail_expectation: unsupported kind");
}

// Exponents of L(x) as a product of (log x)^l1 (loglog x)^l2 (log3 x)^l3
// and a superlog factor exp(coef * (log x)^beta).
struct GrowthExponents {
    double sup_coef = 0, sup_beta = 0.5, l1 = 0, l2 = 0, l3 = 0;
};

GrowthExponents L_exponents(const SlowlyVaryingSpec& spec) {
    GrowthExponents g;
    switch (spec.family) {
    case SvFamily::LogPow: g.l1 = spec.p; break;
    case SvFamily::IterLog:
        if (spec.m == 1) g.l1 = 1;
        else if (spec.m == 2) g.l2 = 1;
        else if (spec.m == 3) g.l3 = 1;
        else throw std::domain_error("tail comparison: iterlog depth > 3 unsupported");
        break;
    case SvFamily::LogPowOverLogLogPow: g.l1 = spec.p; g.l2 = -spec.q; break;
    case SvFamily::LogLogPow: g.l2 = spec.q; break;
    case SvFamily::ExpSqrtLog: g.sup_coef = 1; g.sup_beta = 0.5; break;
    case SvFamily::ExpLogBeta:
        g.sup_coef = 1; g.sup_beta = spec.beta; g.l1 = -spec.gamma_exp; break;
    }
    return g;
}

// d(x) = log L(x) + loglog x, kept to its leading factor.
GrowthExponents d_exponents(const SlowlyVaryingSpec& spec) {
    GrowthExponents g;
    switch (spec.family) {
    case SvFamily::ExpSqrtLog: g.l1 = 0.5; break;
    case SvFamily::ExpLogBeta: g.l1 = spec.beta; break;
    default: g.l2 = 1; break; // ~ (const) loglog x
    }
    return g;
}

// Does L(x)/d(x) -> infinity? (Decides whether f(n) = a_n d_n eventually.)
bool L_dominates_d(const GrowthExponents& L, const GrowthExponents& d) {
    if (L.sup_coef > 0) return true;
    if (L.l1 != d.l1) return L.l1 > d.l1;
    if (L.l2 != d.l2) return L.l2 > d.l2;
    return L.l3 > d.l3;
}

} // namespace

namespace detail {

TailExponents condition_weight_exponents(const SlowlyVaryingSpec& spec, ConditionMode mode) {
    const GrowthExponents L = L_exponents(spec), d = d_exponents(spec);
    TailExponents e;
    e.x_pow = 2;
    if (mode == ConditionMode::FInverse) {
        // f_inverse(y) ~ y L(y)/d(y) when L dominates d, else ~ y.
        if (L_dominates_d(L, d)) {
            e.sup_coef = L.sup_coef * std::pow(2.0, L.sup_beta);
            e.sup_beta = L.sup_beta;
            e.log_e = L.l1 - d.l1;
            e.loglog_e = L.l2 - d.l2;
            e.log3_e = L.l3 - d.l3;
        }
    } else {
        // b_inverse(y) ~ y^2 L(y^2) d(y^2).
        e.sup_coef = L.sup_coef * std::pow(2.0, L.sup_beta);
        e.sup_beta = L.sup_beta;
        e.log_e = L.l1 + d.l1;
        e.loglog_e = L.l2 + d.l2;
        e.log3_e = L.l3 + d.l3;
    }
    return e;
}

Verdict classify_tail_integral(const TailExponents& e, double tol) {
    // Integrand x^x_pow * superlog * polylog factors on (x_cut, inf):
    // decide against the critical exponent -1, level by level.
    if (e.x_pow > -1.0 + tol) return Verdict::Infinite;
    if (e.x_pow < -1.0 - tol) return Verdict::Finite;
    if (e.sup_coef > tol) return Verdict::Infinite;
    if (e.sup_coef < -tol) return Verdict::Finite;
    for (double lev : {e.log_e, e.loglog_e, e.log3_e}) {
        if (lev > -1.0 + tol) return Verdict::Infinite;
        if (lev < -1.0 - tol) return Verdict::Finite;
    }
    return Verdict::Undetermined;
}

} // namespace detail

namespace {

// Tail-comparison verdict plus (when finite) a numeric estimate of the
// reduced tail integral, normalized by the density's tail mass shape.
MomentVerdict tail_comparison(const SlowlyVaryingSpec& spec, const DistributionSpec& dist,
                              ConditionMode mode, ConditionKind ckind) {
    detail::TailExponents e = detail::condition_weight_exponents(spec, mode);
    // Fold in the density |x|^-A (log|x|)^-lambda.
    e.x_pow -= dist.tail_a();
    e.log_e -= dist.log_exp();

    MomentVerdict out;
    out.condition = ckind;
    out.family = spec.family;
    out.method = MomentMethod::TailComparison;
    out.verdict = detail::classify_tail_integral(e);
    if (out.verdict == Verdict::Infinite) {
        out.estimate = kInf;
        out.error_bound = 0;
        return out;
    }
    if (out.verdict == Verdict::Undetermined) {
        out.estimate = std::numeric_limits<double>::quiet_NaN();
        out.error_bound = kInf;
        return out;
    }
    // Expanding-limit quadrature of the integrand in s = log x.
    auto h = [&](double s) {
        double v = (e.x_pow + 1.0) * s + e.sup_coef * std::pow(s, e.sup_beta) +
                   e.log_e * std::log(s);
        const double ls = std::log(s);
        if (e.loglog_e != 0) v += e.loglog_e * std::log(ls);
        if (e.log3_e != 0 && ls > 1.0) v += e.log3_e * std::log(std::log(ls));
        return std::exp(v);
    };
    double s_lo = std::log(dist.x_cut());
    if (s_lo <= 1.01) s_lo = 1.01; // keep iterated logs defined
    double total = 0, increment = 0, s_hi = 2.0 * s_lo;
    for (int round = 0; round < 48; ++round) {
        increment = simpson(h, s_lo, s_hi, 256);
        total += increment;
        if (increment < 1e-12 * total && round > 2) break;
        s_lo = s_hi;
        s_hi *= 2.0;
    }
    out.estimate = total;
    out.error_bound = std::max(increment, 1e-10 * total);
    return out;
}

MomentVerdict build_verdict(ConditionKind ckind, const SlowlyVaryingSpec& spec,
                            const DistributionSpec& dist, ConditionMode mode, bool closed_form) {
    auto weight = [&](double x) -> double {
        if (closed_form) return corollary_weight(spec, mode, x);
        return mode == ConditionMode::FInverse ? f_inverse(spec, x * x)
                                               : b_inverse(spec, std::fabs(x));
    };
    MomentVerdict out;
    out.condition = ckind;
    out.family = spec.family;
    switch (dist.kind()) {
    case DistKind::Rademacher:
    case DistKind::TwoPoint:
    case DistKind::Zero:
        out.estimate = atom_expectation(dist, weight);
        out.method = MomentMethod::ClosedForm;
        out.error_bound = 0;
        return out;
    case DistKind::Normal:
    case DistKind::UniformSym: {
        auto [est, err] = light_tail_expectation(dist, weight);
        out.estimate = est;
        out.error_bound = err;
        out.method = MomentMethod::Quadrature;
        return out;
    }
    case DistKind::LogTailPareto:
        return tail_comparison(spec, dist, mode, ckind);
    }
    return out;
}

} // namespace

MomentVerdict moment_condition(const SlowlyVaryingSpec& spec, const DistributionSpec& dist,
                               ConditionMode mode) {
    const ConditionKind ck =
        mode == ConditionMode::FInverse ? ConditionKind::FInverse : ConditionKind::BInverse;
    return build_verdict(ck, spec, dist, mode, /*closed_form=*/false);
}

MomentVerdict corollary_condition(const SlowlyVaryingSpec& spec, const DistributionSpec& dist,
                                  ConditionMode mode) {
    return build_verdict(ConditionKind::CorollaryClosedForm, spec, dist, mode,
                         /*closed_form=*/true);
}

std::vector<ComparatorRow> condition_comparator(const SlowlyVaryingSpec& spec,
                                                const std::vector<double>& log_exp_grid,
                                                double tail_power, double x_cut) {
    std::vector<ComparatorRow> rows;
    rows.reserve(log_exp_grid.size());
    for (double a : log_exp_grid) {
        const DistributionSpec dist = DistributionSpec::log_tail_pareto(tail_power, a, x_cut);
        ComparatorRow row;
        row.log_exp = a;
        row.f_verdict = moment_condition(spec, dist, ConditionMode::FInverse).verdict;
        row.b_verdict = moment_condition(spec, dist, ConditionMode::BInverse).verdict;
        rows.push_back(row);
    }
    return rows;
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Finite: return "finite";
    case Verdict::Infinite: return "infinite";
    case Verdict::Undetermined: return "undetermined";
    }
    return "?";
}

std::string to_string(ConditionKind c) {
    switch (c) {
    case ConditionKind::FInverse: return "f_inverse";
    case ConditionKind::BInverse: return "b_inverse";
    case ConditionKind::CorollaryClosedForm: return "closed_form";
    }
    return "?";
}

std::string to_string(MomentMethod m) {
    switch (m) {
    case MomentMethod::ClosedForm: return "closed_form";
    case MomentMethod::Quadrature: return "quadrature";
    case MomentMethod::TailComparison: return "tail_comparison";
    }
    return "?";
}

} // namespace windowlaw
