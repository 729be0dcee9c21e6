#include "windowlaw/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace windowlaw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact pmf of S_n for a two-valued summand taking v w.p. p and -w w.p. 1-p:
// value(k) = k v - (n-k) w with probability C(n,k) p^k (1-p)^(n-k).
struct TwoValued {
    double v = 1, w = 1, p = 0.5;
};

TwoValued two_valued_of(const DistributionSpec& dist) {
    if (dist.kind() == DistKind::Rademacher) return {1.0, 1.0, 0.5};
    if (dist.kind() == DistKind::TwoPoint) {
        const double p = dist.prob();
        return {dist.v(), dist.v() * p / (1.0 - p), p};
    }
    throw std::invalid_argument("exact enumeration needs a two-valued summand");
}

std::vector<double> binomial_pmf(int n, double p) {
    std::vector<double> pmf(n + 1);
    pmf[0] = 1.0;
    for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k >= 1; --k) pmf[k] = pmf[k] * (1.0 - p) + pmf[k - 1] * p;
        pmf[0] *= 1.0 - p;
    }
    return pmf;
}

} // namespace

double upper_bound_34(const BoundParams& params, double d_n) {
    params.validate();
    const double d1 = 1.0 - params.delta;
    const double rate = params.epsilon * params.epsilon * d1 * d1 * d1 /
                        (params.sigma * params.sigma);
    return std::exp(-rate * d_n);
}

double lower_bound_36(const BoundParams& params, double d_n) {
    params.validate();
    const double rate = params.epsilon * params.epsilon * (1.0 + params.delta) *
                        (1.0 + params.delta) * (1.0 + params.gamma) /
                        (params.sigma * params.sigma * (1.0 - params.delta));
    return std::exp(-rate * d_n);
}

std::string to_string(SeriesVerdict v) {
    switch (v) {
    case SeriesVerdict::Converges: return "converges";
    case SeriesVerdict::Diverges: return "diverges";
    case SeriesVerdict::Borderline: return "borderline";
    }
    return "?";
}

BorelCantelliReport borel_cantelli_diagnostic(const SubsequenceSpec& sub, double alpha,
                                              std::int64_t k_max) {
    if (k_max < 100) throw std::invalid_argument("borel_cantelli_diagnostic: k_max >= 100");
    // n_k explodes doubly exponentially for the slowest families, so the
    // whole diagnostic runs on t_k = log n_k: warm-started inversion of
    // phi(e^t) = c k, then d from the log representation.
    const double t_floor = std::log(static_cast<double>(n_min(sub.spec)));

    BorelCantelliReport rep;
    rep.alpha = alpha;
    rep.k_max = k_max;
    double sum = 0;
    std::vector<double> d(k_max + 1, 0.0);
    double u = psi_log(sub.spec, sub.c), f = sub.c;
    for (std::int64_t k = 1; k <= k_max; ++k) {
        const double target = sub.c * static_cast<double>(k);
        for (int it = 0; it < 60 && std::fabs(f - target) > 1e-9 * target; ++it) {
            const double step = (target - f) / std::exp(log_eval_L_at_log(sub.spec, u));
            f += phi_log_between(sub.spec, u, u + step);
            u += step;
        }
        d[k] = d_from_log_n(sub.spec, std::max(u, t_floor));
        sum += std::exp(-alpha * d[k]);
        if (k == k_max / 4) rep.partial_quarter = sum;
        if (k == k_max / 2) rep.partial_half = sum;
    }
    rep.partial_full = sum;

    // Fit d_{n_k} ~ slope * log k + const over the upper half, where the
    // additive transients have died down; the summand then decays like
    // k^-(alpha * slope).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::int64_t cnt = 0;
    for (std::int64_t k = k_max / 2; k <= k_max; ++k) {
        const double x = std::log(static_cast<double>(k));
        sx += x;
        sy += d[k];
        sxx += x * x;
        sxy += x * d[k];
        ++cnt;
    }
    rep.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    rep.decay_exponent = alpha * rep.slope;
    const double margin = 0.1;
    if (rep.decay_exponent > 1.0 + margin) rep.verdict = SeriesVerdict::Converges;
    else if (rep.decay_exponent < 1.0 - margin) rep.verdict = SeriesVerdict::Diverges;
    else rep.verdict = SeriesVerdict::Borderline;
    return rep;
}

KhjReport khj_check(int n, double x, double y, const DistributionSpec& dist) {
    if (n < 1 || n > 22) throw std::invalid_argument("khj_check: n must be in [1, 22]");
    const TwoValued tv = two_valued_of(dist);
    const std::vector<double> pmf = binomial_pmf(n, tv.p);

    auto p_abs_sn_gt = [&](double t) {
        double s = 0;
        for (int k = 0; k <= n; ++k) {
            const double val = k * tv.v - (n - k) * tv.w;
            if (std::fabs(val) > t) s += pmf[k];
        }
        return s;
    };
    const double p_tail_x =
        tv.p * (tv.v > y ? 1.0 : 0.0) + (1.0 - tv.p) * (tv.w > y ? 1.0 : 0.0);

    KhjReport rep;
    rep.n = n;
    rep.x = x;
    rep.y = y;
    rep.lhs = p_abs_sn_gt(2.0 * x + y);
    rep.sum_tails = n * p_tail_x;
    const double px = p_abs_sn_gt(x);
    rep.four_p_sq = 4.0 * px * px;
    rep.slack = rep.sum_tails + rep.four_p_sq - rep.lhs;
    rep.holds = rep.lhs <= rep.sum_tails + rep.four_p_sq + 1e-15;
    return rep;
}

LevyReport levy_check(int n, double x, const DistributionSpec& dist) {
    if (n < 1 || n > 22) throw std::invalid_argument("levy_check: n must be in [1, 22]");
    if (!dist.symmetric())
        throw std::invalid_argument("levy_check: summands must be symmetric");
    const TwoValued tv = two_valued_of(dist);

    // Walk on the lattice {j * v}; absorb the first time the partial sum
    // exceeds x.
    std::vector<double> alive(2 * n + 1, 0.0);
    alive[n] = 1.0; // offset j + n, sum = j * v
    double absorbed = 0.0;
    for (int step = 0; step < n; ++step) {
        std::vector<double> next(2 * n + 1, 0.0);
        for (int idx = 0; idx <= 2 * n; ++idx) {
            const double mass = alive[idx];
            if (mass == 0.0) continue;
            for (int dir : {+1, -1}) {
                const int jdx = idx + dir;
                const double sum = (jdx - n) * tv.v;
                const double m = 0.5 * mass;
                if (sum > x) absorbed += m;
                else next[jdx] += m;
            }
        }
        alive.swap(next);
    }

    const std::vector<double> pmf = binomial_pmf(n, 0.5);
    double p_sn_gt = 0.0;
    for (int k = 0; k <= n; ++k)
        if ((2 * k - n) * tv.v > x) p_sn_gt += pmf[k];

    LevyReport rep;
    rep.n = n;
    rep.x = x;
    rep.lhs = absorbed;
    rep.rhs = 2.0 * p_sn_gt;
    rep.holds = rep.lhs <= rep.rhs + 1e-15;
    return rep;
}

RateFunctionModel::RateFunctionModel(const DistributionSpec& d) : dist(d) {
    if (!d.mgf_available())
        throw std::invalid_argument("RateFunctionModel: moment generating function required");
}

double cramer_rate(const RateFunctionModel& model, double x) {
    if (x < 0) throw std::domain_error("cramer_rate: x must be >= 0");
    const double xm = model.x_max();
    if (x > xm) throw std::domain_error("cramer_rate: x beyond the essential supremum");
    if (x == 0) return 0.0;
    if (x == xm) {
        const double p = model.dist.p_at_x_max();
        return p > 0 ? -std::log(p) : kInf;
    }
    auto g = [&](double t) { return model.dist.log_mgf(t) - t * x; };

    // Bracket the convex minimizer, then golden-section to 1e-12 in t.
    double hi = 1.0;
    const double cap = std::isfinite(xm) ? 1e9 : model.t_max;
    while (hi < cap && g(2.0 * hi) < g(hi)) hi *= 2.0;
    hi = std::min(2.0 * hi, cap);

    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = hi;
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = g(c1), f2 = g(c2);
    while (b - a > 1e-12 * std::max(1.0, b)) {
        if (f1 < f2) {
            b = c2; c2 = c1; f2 = f1;
            c1 = b - gr * (b - a); f1 = g(c1);
        } else {
            a = c1; c1 = c2; f1 = f2;
            c2 = a + gr * (b - a); f2 = g(c2);
        }
    }
    return -std::min(f1, f2);
}

double er_rho(const RateFunctionModel& model, double c) {
    if (!(c > 0)) throw std::invalid_argument("er_rho: c must be > 0");
    const double target = 1.0 / c;
    const double xm = model.x_max();

    double hi;
    if (std::isfinite(xm)) {
        if (cramer_rate(model, xm) <= target) return xm; // saturation
        hi = xm;
    } else {
        hi = 1.0;
        while (cramer_rate(model, hi) <= target) hi *= 2.0;
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (cramer_rate(model, mid) <= target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ErSimResult er_simulate(const RateFunctionModel& model, double c, std::int64_t n,
                        std::uint64_t seed) {
    if (n < 100) throw std::invalid_argument("er_simulate: n >= 100");
    const CounterRng rng(seed, 0);
    std::vector<double> prefix(n + 1, 0.0);
    double sum = 0.0, comp = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double term = model.dist.sample(rng, static_cast<std::uint64_t>(i)) - comp;
        const double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
        prefix[i + 1] = sum;
    }

    ErSimResult out;
    out.variant_a = -kInf;
    out.variant_b = -kInf;

    const std::int64_t wb = static_cast<std::int64_t>(std::ceil(c * std::log(static_cast<double>(n))));
    const double denom_b = c * std::log(static_cast<double>(n));
    for (std::int64_t k = 0; k + wb <= n; ++k)
        out.variant_b = std::max(out.variant_b, (prefix[k + wb] - prefix[k]) / denom_b);

    for (std::int64_t k = 2; k <= n; ++k) {
        const double denom = c * std::log(static_cast<double>(k));
        const std::int64_t wk = static_cast<std::int64_t>(std::ceil(denom));
        if (wk < 1 || k + wk > n) continue;
        out.variant_a = std::max(out.variant_a, (prefix[k + wk] - prefix[k]) / denom);
    }
    if (!std::isfinite(out.variant_a)) out.variant_a = 0.0;
    if (!std::isfinite(out.variant_b)) out.variant_b = 0.0;
    return out;
}

} // namespace windowlaw
