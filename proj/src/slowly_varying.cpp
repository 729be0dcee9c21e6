#include "windowlaw/slowly_varying.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "windowlaw/detail/quadrature.hpp"

namespace windowlaw {

namespace {

constexpr double kE = 2.718281828459045235360287471352662498;

double iter_log(double x, int m) {
    double v = x;
    for (int i = 0; i < m; ++i) v = std::log(v);
    return v;
}

// e^^m (tower of height m): e, e^e, e^(e^e), ...
double e_tower(int m) {
    double v = kE;
    for (int i = 1; i < m; ++i) v = std::exp(v);
    return v;
}

double next_integer_power_of_e(double x) {
    return std::exp(std::ceil(std::log(x) - 1e-12));
}

} // namespace

SlowlyVaryingSpec SlowlyVaryingSpec::log_pow(double p) {
    if (p < 0) throw std::invalid_argument("logpow: p must be >= 0");
    SlowlyVaryingSpec s;
    s.family = SvFamily::LogPow;
    s.p = p;
    s.x0 = kE;
    return s;
}

SlowlyVaryingSpec SlowlyVaryingSpec::iter_log(int m) {
    if (m < 1) throw std::invalid_argument("iterlog: m must be >= 1");
    SlowlyVaryingSpec s;
    s.family = SvFamily::IterLog;
    s.m = m;
    s.x0 = e_tower(m);
    return s;
}

SlowlyVaryingSpec SlowlyVaryingSpec::log_pow_over_loglog_pow(double p, double q) {
    if (p <= 0 || q <= 0)
        throw std::invalid_argument("logpowoverloglogpow: p, q must be > 0");
    SlowlyVaryingSpec s;
    s.family = SvFamily::LogPowOverLogLogPow;
    s.p = p;
    s.q = q;
    // L increasing iff p/log x > q/(log x loglog x), i.e. loglog x > q/p.
    double x_incr = std::exp(std::exp(q / p));
    s.x0 = next_integer_power_of_e(std::max(x_incr, std::exp(kE)));
    return s;
}

SlowlyVaryingSpec SlowlyVaryingSpec::loglog_pow(double q) {
    if (q <= 1) throw std::invalid_argument("loglogpow: q must be > 1");
    SlowlyVaryingSpec s;
    s.family = SvFamily::LogLogPow;
    s.q = q;
    s.x0 = std::exp(kE); // e^e
    return s;
}

SlowlyVaryingSpec SlowlyVaryingSpec::exp_sqrt_log() {
    SlowlyVaryingSpec s;
    s.family = SvFamily::ExpSqrtLog;
    s.x0 = kE;
    return s;
}

SlowlyVaryingSpec SlowlyVaryingSpec::exp_log_beta(double beta, double gamma_exp) {
    if (!(beta > 0 && beta < 1))
        throw std::invalid_argument("explogbeta: beta must be in (0,1)");
    SlowlyVaryingSpec s;
    s.family = SvFamily::ExpLogBeta;
    s.beta = beta;
    s.gamma_exp = gamma_exp;
    // r(x) = beta t^(beta-1) - gamma/t with t = log x; positive iff
    // beta t^beta > gamma.
    double t_incr = (gamma_exp > 0) ? std::pow(gamma_exp / beta, 1.0 / beta) : 1.0;
    s.x0 = next_integer_power_of_e(std::exp(std::max(1.0, t_incr)));
    return s;
}

std::string to_string(const SlowlyVaryingSpec& s) {
    char buf[128];
    switch (s.family) {
        case SvFamily::LogPow:
            std::snprintf(buf, sizeof buf, "logpow(p=%.17g)", s.p);
            break;
        case SvFamily::IterLog:
            std::snprintf(buf, sizeof buf, "iterlog(m=%d)", s.m);
            break;
        case SvFamily::LogPowOverLogLogPow:
            std::snprintf(buf, sizeof buf, "logpowoverloglogpow(p=%.17g,q=%.17g)", s.p, s.q);
            break;
        case SvFamily::LogLogPow:
            std::snprintf(buf, sizeof buf, "loglogpow(q=%.17g)", s.q);
            break;
        case SvFamily::ExpSqrtLog:
            std::snprintf(buf, sizeof buf, "expsqrtlog");
            break;
        case SvFamily::ExpLogBeta:
            std::snprintf(buf, sizeof buf, "explogbeta(beta=%.17g,gamma=%.17g)", s.beta,
                          s.gamma_exp);
            break;
    }
    return buf;
}

namespace {

std::map<std::string, double> parse_kv_args(const std::string& inside) {
    std::map<std::string, double> kv;
    std::stringstream ss(inside);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("expected key=value, got '" + item + "'");
        std::string key = item.substr(0, eq);
        key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
        kv[key] = std::stod(item.substr(eq + 1));
    }
    return kv;
}

} // namespace

SlowlyVaryingSpec parse_sv_spec(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    std::string name = t;
    std::map<std::string, double> kv;
    auto open = t.find('(');
    if (open != std::string::npos) {
        if (t.back() != ')') throw std::invalid_argument("unbalanced '(' in spec: " + text);
        name = t.substr(0, open);
        kv = parse_kv_args(t.substr(open + 1, t.size() - open - 2));
    }
    auto need = [&](const char* k) {
        auto it = kv.find(k);
        if (it == kv.end())
            throw std::invalid_argument(std::string("spec '") + name + "' needs parameter " + k);
        return it->second;
    };
    if (name == "logpow") return SlowlyVaryingSpec::log_pow(need("p"));
    if (name == "iterlog") return SlowlyVaryingSpec::iter_log(static_cast<int>(need("m")));
    if (name == "logpowoverloglogpow" || name == "logpowoverllp" || name == "lpoll")
        return SlowlyVaryingSpec::log_pow_over_loglog_pow(need("p"), need("q"));
    if (name == "loglogpow") return SlowlyVaryingSpec::loglog_pow(need("q"));
    if (name == "expsqrtlog") return SlowlyVaryingSpec::exp_sqrt_log();
    if (name == "explogbeta")
        return SlowlyVaryingSpec::exp_log_beta(need("beta"), need("gamma"));
    throw std::invalid_argument("unknown slowly varying family: " + text);
}

namespace {

void check_domain(const SlowlyVaryingSpec& s, double x) {
    if (!(x >= s.x0 * (1 - 1e-12)))
        throw std::domain_error("x = " + std::to_string(x) + " below x0 = " +
                                std::to_string(s.x0) + " for " + to_string(s));
}

} // namespace

double log_eval_L(const SlowlyVaryingSpec& s, double x) {
    check_domain(s, x);
    return log_eval_L_at_log(s, std::log(x));
}

double log_eval_L_at_log(const SlowlyVaryingSpec& s, double t) {
    switch (s.family) {
        case SvFamily::LogPow: return s.p * std::log(t);
        case SvFamily::IterLog: {
            double v = t;
            for (int i = 1; i < s.m; ++i) v = std::log(v);
            return std::log(v);
        }
        case SvFamily::LogPowOverLogLogPow:
            return s.p * std::log(t) - s.q * std::log(std::log(t));
        case SvFamily::LogLogPow: return s.q * std::log(std::log(t));
        case SvFamily::ExpSqrtLog: return std::sqrt(t);
        case SvFamily::ExpLogBeta: return std::pow(t, s.beta) - s.gamma_exp * std::log(t);
    }
    return 0;
}

double eval_L(const SlowlyVaryingSpec& s, double x) {
    return std::exp(log_eval_L(s, x));
}

double eval_ratio(const SlowlyVaryingSpec& s, double x) {
    check_domain(s, x);
    double t = std::log(x);
    switch (s.family) {
        case SvFamily::LogPow: return s.p / t;
        case SvFamily::IterLog: {
            // prod over i=1..m of 1/log_i x
            double r = 1.0, v = x;
            for (int i = 0; i < s.m; ++i) {
                v = std::log(v);
                r /= v;
            }
            return r;
        }
        case SvFamily::LogPowOverLogLogPow:
            return s.p / t - s.q / (t * std::log(t));
        case SvFamily::LogLogPow: return s.q / (t * std::log(t));
        case SvFamily::ExpSqrtLog: return 0.5 / std::sqrt(t);
        case SvFamily::ExpLogBeta:
            return s.beta * std::pow(t, s.beta - 1.0) - s.gamma_exp / t;
    }
    return 0;
}

ConditionReport verify_condition_12(const SlowlyVaryingSpec& s) {
    ConditionReport rep;
    rep.spec = s;
    for (int j = 0; j <= 60; ++j) {
        double x = s.x0 * std::ldexp(1.0, j);
        if (!std::isfinite(x)) break;
        rep.grid.push_back(x);
        rep.ratios.push_back(eval_ratio(s, x));
    }
    // First index from which the ratios are non-increasing to the end.
    std::size_t from = rep.ratios.size() - 1;
    while (from > 0 && rep.ratios[from - 1] >= rep.ratios[from] * (1 - 1e-13)) --from;
    rep.monotone_from = rep.grid[from];
    rep.verdict = from + 1 < rep.ratios.size();
    return rep;
}

namespace {

// L(e^t) as a function of t = log x; phi in t-space is the plain integral
// of this over [log x0, log y].
double integrand_t(const SlowlyVaryingSpec& s, double t) {
    switch (s.family) {
        case SvFamily::LogPow: return std::pow(t, s.p);
        case SvFamily::IterLog: {
            double v = t;
            for (int i = 1; i < s.m; ++i) v = std::log(v);
            return v;
        }
        case SvFamily::LogPowOverLogLogPow:
            return std::pow(t, s.p) / std::pow(std::log(t), s.q);
        case SvFamily::LogLogPow: return std::pow(std::log(t), s.q);
        case SvFamily::ExpSqrtLog: return std::exp(std::sqrt(t));
        case SvFamily::ExpLogBeta:
            return std::exp(std::pow(t, s.beta) - s.gamma_exp * std::log(t));
    }
    return 0;
}

// Closed-form antiderivative of integrand_t, where one exists.
bool phi_closed_form(const SlowlyVaryingSpec& s, double t0, double t1, double* out) {
    switch (s.family) {
        case SvFamily::LogPow: {
            double e = s.p + 1.0;
            *out = (std::pow(t1, e) - std::pow(t0, e)) / e;
            return true;
        }
        case SvFamily::IterLog:
            if (s.m == 1) {
                *out = 0.5 * (t1 * t1 - t0 * t0);
                return true;
            }
            if (s.m == 2) {
                // antiderivative of log t is t (log t - 1)
                *out = t1 * (std::log(t1) - 1) - t0 * (std::log(t0) - 1);
                return true;
            }
            return false;
        case SvFamily::ExpSqrtLog: {
            // antiderivative of exp(sqrt t) is 2 exp(sqrt t)(sqrt t - 1)
            auto F = [](double t) {
                double r = std::sqrt(t);
                return 2.0 * std::exp(r) * (r - 1.0);
            };
            *out = F(t1) - F(t0);
            return true;
        }
        default: return false;
    }
}

double phi_t_range(const SlowlyVaryingSpec& s, double t0, double t1) {
    double v;
    if (phi_closed_form(s, t0, t1, &v)) return v;
    return detail::integrate([&](double t) { return integrand_t(s, t); }, t0, t1, 1e-10);
}

} // namespace

double phi(const SlowlyVaryingSpec& s, double y) {
    check_domain(s, y);
    return phi_t_range(s, std::log(s.x0), std::log(y));
}

double phi_between(const SlowlyVaryingSpec& s, double y1, double y2) {
    check_domain(s, y1);
    check_domain(s, y2);
    double t1 = std::log(y1), t2 = std::log(y2);
    if (t2 >= t1) return phi_t_range(s, t1, t2);
    return -phi_t_range(s, t2, t1);
}

double psi(const SlowlyVaryingSpec& s, double t) {
    if (!(t >= 0)) throw std::domain_error("psi: t must be >= 0");
    if (t == 0) return s.x0;
    const double t0 = std::log(s.x0);
    // Bracket in log space; phi grows without bound so this terminates.
    double lo = t0, hi = t0 + 1.0;
    while (phi_t_range(s, t0, hi) < t) {
        lo = hi;
        hi = t0 + 2.0 * (hi - t0);
        if (hi > 708.0) {
            hi = 708.0;
            break;
        }
    }
    double flo = phi_t_range(s, t0, lo);
    for (int i = 0; i < 30; ++i) {
        double mid = 0.5 * (lo + hi);
        double fmid = flo + phi_t_range(s, lo, mid);
        if (fmid < t) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    // Newton polish on g(u) = phi(e^u) - t, g'(u) = L(e^u).
    double u = lo, fu = flo;
    const double tol = 1e-10 * std::max(1.0, t);
    for (int i = 0; i < 60 && std::abs(fu - t) > tol; ++i) {
        double step = (t - fu) / integrand_t(s, u);
        if (u + step < t0) step = t0 - u;
        fu += (step >= 0) ? phi_t_range(s, u, u + step) : -phi_t_range(s, u + step, u);
        u += step;
    }
    return std::exp(u);
}

double phi_at_log(const SlowlyVaryingSpec& s, double t) {
    const double t0 = std::log(s.x0);
    if (!(t >= t0)) throw std::domain_error("phi_at_log: log x below log x0");
    return phi_t_range(s, t0, t);
}

double phi_log_between(const SlowlyVaryingSpec& s, double t1, double t2) {
    if (t2 >= t1) return phi_t_range(s, t1, t2);
    return -phi_t_range(s, t2, t1);
}

double psi_log(const SlowlyVaryingSpec& s, double target) {
    if (!(target >= 0)) throw std::domain_error("psi_log: target must be >= 0");
    const double t0 = std::log(s.x0);
    if (target == 0) return t0;
    double lo = t0, hi = t0 + 1.0;
    while (phi_t_range(s, t0, hi) < target) {
        lo = hi;
        hi = t0 + 2.0 * (hi - t0);
        if (!std::isfinite(hi)) throw NonConvergenceError("psi_log: bracket overflow");
    }
    double flo = phi_t_range(s, t0, lo);
    for (int i = 0; i < 30; ++i) {
        double mid = 0.5 * (lo + hi);
        double fmid = flo + phi_t_range(s, lo, mid);
        if (fmid < target) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    double u = lo, fu = flo;
    const double tol = 1e-10 * std::max(1.0, target);
    for (int i = 0; i < 60 && std::abs(fu - target) > tol; ++i) {
        double step = (target - fu) / integrand_t(s, u);
        if (u + step < t0) step = t0 - u;
        fu += (step >= 0) ? phi_t_range(s, u, u + step) : -phi_t_range(s, u + step, u);
        u += step;
    }
    return u;
}

DeBruijnResult de_bruijn_conjugate(const SlowlyVaryingSpec& s, double x) {
    if (!(x >= s.x0 * s.x0))
        throw std::domain_error("de_bruijn_conjugate: x must be >= x0^2");
    DeBruijnResult res;
    double y = 1.0 / eval_L(s, x);
    for (int it = 1; it <= 200; ++it) {
        double next = 1.0 / eval_L(s, x * y);
        res.iterations = it;
        bool done = std::abs(next / y - 1.0) <= 1e-12;
        y = next;
        if (done) {
            res.value = y;
            res.residual = std::abs(eval_L(s, x * y) * y - 1.0);
            return res;
        }
    }
    throw NonConvergenceError("de_bruijn_conjugate: no convergence in 200 iterations at x = " +
                              std::to_string(x));
}

double lemma31_ratio(const SlowlyVaryingSpec& s, double t) {
    double num = log_eval_L(s, t) + std::log(std::log(t));
    double ph = phi(s, t);
    if (!(num > 0) || !(ph > 1))
        throw std::domain_error("lemma31_ratio: t too small (need L(t) log t > 1 and phi > 1)");
    return num / std::log(ph);
}

} // namespace windowlaw
