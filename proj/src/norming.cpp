#include "windowlaw/norming.hpp"

#include <cmath>
#include <stdexcept>

namespace windowlaw {

void BoundParams::validate() const {
    if (!(sigma > 0) || !(epsilon > 0) || !(gamma > 0) || !(delta > 0) || !(delta < 1))
        throw std::invalid_argument(
            "BoundParams: need sigma, epsilon, gamma > 0 and delta in (0,1)");
}

std::int64_t n_min(const SlowlyVaryingSpec& spec) {
    auto n = static_cast<std::int64_t>(std::max(16.0, std::ceil(spec.x0)));
    while (!(log_eval_L(spec, static_cast<double>(n)) > 0)) ++n;
    return n;
}

WindowSchedulePoint schedule_point(const SlowlyVaryingSpec& spec, std::int64_t n,
                                   std::optional<BoundParams> params) {
    if (n < n_min(spec))
        throw std::domain_error("schedule_point: n = " + std::to_string(n) +
                                " below n_min = " + std::to_string(n_min(spec)));
    WindowSchedulePoint pt;
    pt.n = n;
    double x = static_cast<double>(n);
    double L = eval_L(spec, x);
    pt.a_n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(x / L)));
    pt.d_n = log_eval_L(spec, x) + std::log(std::log(x));
    double ad = static_cast<double>(pt.a_n) * pt.d_n;
    pt.f_n = std::min(ad, x);
    pt.b_theorem61 = std::sqrt(static_cast<double>(pt.a_n) / pt.d_n);
    pt.normalizer = std::sqrt(2.0 * ad);
    if (params) {
        params->validate();
        pt.b_theorem21 = params->sigma * params->delta / params->epsilon * pt.b_theorem61;
    }
    return pt;
}

namespace {

// inf{ n integer >= n_min : g(n) >= y } by bisection on a nondecreasing step
// function, with a short local walk to absorb plateau wiggles from floor(a_n).
template <typename G>
std::int64_t step_inverse(const SlowlyVaryingSpec& spec, double y, G g) {
    std::int64_t lo = n_min(spec);
    if (g(lo) >= y) return lo;
    std::int64_t hi = lo;
    while (g(hi) < y) {
        if (hi > (std::int64_t{1} << 61))
            throw std::domain_error("step_inverse: y out of representable range");
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (g(mid) >= y)
            hi = mid;
        else
            lo = mid;
    }
    while (hi > n_min(spec) && g(hi - 1) >= y) --hi;
    while (g(hi) < y) ++hi;
    return hi;
}

} // namespace

double f_inverse(const SlowlyVaryingSpec& spec, double y) {
    auto f = [&](std::int64_t n) { return schedule_point(spec, n).f_n; };
    return static_cast<double>(step_inverse(spec, y, f));
}

double b_inverse(const SlowlyVaryingSpec& spec, double y) {
    auto b = [&](std::int64_t n) { return schedule_point(spec, n).b_theorem61; };
    return static_cast<double>(step_inverse(spec, y, b));
}

double d_from_log_n(const SlowlyVaryingSpec& spec, double log_n) {
    if (!(log_n > 1.0)) throw std::domain_error("d_from_log_n: log n must exceed 1");
    return log_eval_L_at_log(spec, log_n) + std::log(log_n);
}

double asymptotic_f_inverse(const SlowlyVaryingSpec& spec, double y) {
    if (!(y >= 1e3)) throw std::domain_error("asymptotic_f_inverse: y must be >= 1e3");
    double t = std::log(y);
    double tt = std::log(t);
    switch (spec.family) {
        case SvFamily::LogPow:
            return y * std::pow(t, spec.p) / ((spec.p + 1.0) * tt);
        case SvFamily::IterLog:
            return y;
        case SvFamily::LogPowOverLogLogPow:
            return y * std::pow(t, spec.p) / std::pow(tt, spec.q + 1.0);
        case SvFamily::LogLogPow:
            return y * std::pow(tt, spec.q - 1.0);
        case SvFamily::ExpSqrtLog:
            return y * std::exp(std::sqrt(t + 0.5)) / std::sqrt(t);
        case SvFamily::ExpLogBeta:
            if (spec.beta >= 0.5)
                throw std::domain_error(
                    "asymptotic_f_inverse: unsupported regime beta >= 1/2 for explogbeta");
            return y * std::exp(std::pow(t, spec.beta)) /
                   std::pow(t, spec.beta + spec.gamma_exp);
    }
    return 0;
}

namespace {

// Warm-started phi inversion: advances (u = log n, phi value) to the target
// phi = t via Newton steps with incremental integrals.
class PhiTracker {
  public:
    explicit PhiTracker(const SlowlyVaryingSpec& spec)
        : spec_(spec), u_(std::log(spec.x0)), value_(0) {}

    double advance_to(double t) {
        if (t < value_) { // restart for a backwards request
            u_ = std::log(spec_.x0);
            value_ = 0;
        }
        if (value_ == 0 && u_ == std::log(spec_.x0)) {
            double y = psi(spec_, t);
            u_ = std::log(y);
            value_ = t;
            return y;
        }
        for (int i = 0; i < 80; ++i) {
            double err = t - value_;
            if (std::abs(err) <= 1e-10 * std::max(1.0, t)) break;
            double deriv = eval_L(spec_, std::exp(u_)); // d phi / d log y
            double step = err / deriv;
            double u2 = std::max(u_ + step, std::log(spec_.x0));
            value_ += phi_between(spec_, std::exp(u_), std::exp(u2));
            u_ = u2;
        }
        return std::exp(u_);
    }

  private:
    SlowlyVaryingSpec spec_;
    double u_;
    double value_;
};

} // namespace

std::int64_t subsequence(const SubsequenceSpec& sub, std::int64_t k) {
    if (!(sub.c > 0)) throw std::invalid_argument("subsequence: c must be > 0");
    if (k < sub.k_start) throw std::domain_error("subsequence: k below k_start");
    return std::llround(psi(sub.spec, sub.c * static_cast<double>(k)));
}

std::vector<std::int64_t> subsequence_range(const SubsequenceSpec& sub, std::int64_t k_lo,
                                            std::int64_t k_hi) {
    if (!(sub.c > 0)) throw std::invalid_argument("subsequence_range: c must be > 0");
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, k_hi - k_lo + 1)));
    PhiTracker tracker(sub.spec);
    for (std::int64_t k = k_lo; k <= k_hi; ++k)
        out.push_back(std::llround(tracker.advance_to(sub.c * static_cast<double>(k))));
    return out;
}

SubsequenceDiagnostics subsequence_diagnostics(const SubsequenceSpec& sub,
                                               std::int64_t k_max) {
    if (k_max < sub.k_start + 10)
        throw std::invalid_argument("subsequence_diagnostics: k_max must be >= k_start + 10");
    SubsequenceDiagnostics diag;
    auto nk = subsequence_range(sub, sub.k_start, k_max + 1);
    std::int64_t lowest = n_min(sub.spec);
    for (std::int64_t k = sub.k_start; k <= k_max; ++k) {
        auto i = static_cast<std::size_t>(k - sub.k_start);
        if (nk[i] < lowest) continue;
        auto pt = schedule_point(sub.spec, nk[i]);
        diag.k.push_back(k);
        diag.n_k.push_back(nk[i]);
        diag.d_over_log_k.push_back(pt.d_n / std::log(static_cast<double>(k)));
        diag.step_ratio.push_back(static_cast<double>(nk[i + 1]) /
                                  static_cast<double>(nk[i]));
        diag.disjoint.push_back(nk[i + 1] > nk[i] + pt.a_n);
    }
    diag.overlap_persists = true;
    for (std::size_t i = diag.disjoint.size(); i-- > 0;) {
        if (!diag.disjoint[i]) break;
        diag.first_disjoint_k = diag.k[i];
        diag.overlap_persists = false;
    }
    return diag;
}

} // namespace windowlaw
