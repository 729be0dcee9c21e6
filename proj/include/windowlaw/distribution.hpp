#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "windowlaw/rng.hpp"

namespace windowlaw {

enum class DistKind {
    Normal,        // Normal(0, sigma^2)
    Rademacher,    // +-1 with probability 1/2
    UniformSym,    // uniform on [-a, a]
    TwoPoint,      // v w.p. prob, -v*prob/(1-prob) otherwise (mean 0)
    LogTailPareto, // symmetric density c |x|^-tail_a (log|x|)^-log_exp, |x| > x_cut
    Zero,          // degenerate X == 0 (test / diagnostics only)
};

/// A mean-zero law: sampler, tail description, variance, MGF where available.
class DistributionSpec {
  public:
    static DistributionSpec normal(double sigma);
    static DistributionSpec rademacher();
    static DistributionSpec uniform_sym(double a);
    static DistributionSpec two_point(double v, double prob);
    static DistributionSpec log_tail_pareto(double tail_a, double log_exp, double x_cut);
    static DistributionSpec zero();

    DistKind kind() const { return kind_; }
    double sigma() const { return sigma_; }
    double a() const { return a_; }
    double v() const { return v_; }
    double prob() const { return prob_; }
    double tail_a() const { return tail_a_; }
    double log_exp() const { return log_exp_; }
    double x_cut() const { return x_cut_; }

    double mean() const { return 0.0; }
    /// Variance; +infinity when the tail is too fat.
    double variance() const;
    bool mgf_available() const;
    /// log E exp(tX); only for kinds with mgf_available().
    double log_mgf(double t) const;
    /// Essential supremum of X (+infinity for unbounded kinds).
    double x_max() const;
    /// P(X = x_max) for discrete kinds, 0 otherwise.
    double p_at_x_max() const;
    bool symmetric() const;

    /// Draw i of the stream defined by rng. Pure in (rng key, i).
    double sample(const CounterRng& rng, std::uint64_t i) const;

    bool operator==(const DistributionSpec& o) const;

  private:
    DistributionSpec() = default;
    void build_tail_table();

    DistKind kind_ = DistKind::Zero;
    double sigma_ = 1, a_ = 1, v_ = 1, prob_ = 0.5;
    double tail_a_ = 3, log_exp_ = 2, x_cut_ = 7.38905609893065;
    // Inverse-CDF table for the LogTailPareto magnitude: grid in s = log x
    // with cumulative tail probabilities.
    std::vector<double> tail_s_;
    std::vector<double> tail_cum_;
    double tail_norm_ = 0; // integral of x^-tail_a (log x)^-log_exp over (x_cut, inf)
};

/// Text forms: "normal(sigma=1)", "rademacher", "uniformsym(a=1.7)",
/// "twopoint(v=1,prob=0.5)", "logtail(a=3,cut=7.39)" with optional
/// "logexp=..." (tail power fixed at 3 unless "power=..." given), "zero".
std::string to_string(const DistributionSpec& dist);
DistributionSpec parse_dist(const std::string& text);

} // namespace windowlaw
