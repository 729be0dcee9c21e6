#include "windowlaw/distribution.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

namespace windowlaw {
namespace {

double fmt_roundtrip(char* buf, std::size_t n, double v) {
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, n, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return v;
}

std::string num(double v) {
    char buf[40];
    fmt_roundtrip(buf, sizeof buf, v);
    return buf;
}

} // namespace

DistributionSpec DistributionSpec::normal(double sigma) {
    if (!(sigma > 0)) throw std::invalid_argument("normal: sigma must be > 0");
    DistributionSpec d;
    d.kind_ = DistKind::Normal;
    d.sigma_ = sigma;
    return d;
}

DistributionSpec DistributionSpec::rademacher() {
    DistributionSpec d;
    d.kind_ = DistKind::Rademacher;
    return d;
}

DistributionSpec DistributionSpec::uniform_sym(double a) {
    if (!(a > 0)) throw std::invalid_argument("uniform_sym: a must be > 0");
    DistributionSpec d;
    d.kind_ = DistKind::UniformSym;
    d.a_ = a;
    return d;
}

DistributionSpec DistributionSpec::two_point(double v, double prob) {
    if (!(v > 0)) throw std::invalid_argument("two_point: v must be > 0");
    if (!(prob > 0 && prob < 1)) throw std::invalid_argument("two_point: prob must lie in (0,1)");
    DistributionSpec d;
    d.kind_ = DistKind::TwoPoint;
    d.v_ = v;
    d.prob_ = prob;
    return d;
}

DistributionSpec DistributionSpec::log_tail_pareto(double tail_a, double log_exp, double x_cut) {
    if (!(tail_a > 1)) throw std::invalid_argument("log_tail_pareto: tail power must be > 1");
    if (!(x_cut > 1)) throw std::invalid_argument("log_tail_pareto: x_cut must be > 1");
    DistributionSpec d;
    d.kind_ = DistKind::LogTailPareto;
    d.tail_a_ = tail_a;
    d.log_exp_ = log_exp;
    d.x_cut_ = x_cut;
    d.build_tail_table();
    return d;
}

DistributionSpec DistributionSpec::zero() { return DistributionSpec{}; }

// Magnitude density in s = log x: g(s) = exp((1-A)s) * s^(-lambda), s > log(x_cut).
void DistributionSpec::build_tail_table() {
    const double A = tail_a_, lam = log_exp_;
    const double s0 = std::log(x_cut_);
    auto g = [&](double s) { return std::exp((1.0 - A) * s - lam * std::log(s)); };

    double s1 = s0 + 60.0 / (A - 1.0);
    while (g(s1) > 1e-24 * g(s0)) s1 = s0 + 2.0 * (s1 - s0);

    const int n = 4096;
    tail_s_.resize(n + 1);
    tail_cum_.resize(n + 1);
    const double h = (s1 - s0) / n;
    tail_s_[0] = s0;
    tail_cum_[0] = 0.0;
    double acc = 0.0;
    for (int j = 1; j <= n; ++j) {
        const double a = s0 + (j - 1) * h, b = s0 + j * h;
        acc += h / 6.0 * (g(a) + 4.0 * g(0.5 * (a + b)) + g(b));
        tail_s_[j] = b;
        tail_cum_[j] = acc;
    }
    // Mass beyond s1, by the local exponential model g(s) ~ g(s1) e^{-r (s-s1)}.
    const double r1 = (A - 1.0) + lam / s1;
    tail_norm_ = acc + g(s1) / r1;
}

double DistributionSpec::variance() const {
    switch (kind_) {
    case DistKind::Normal: return sigma_ * sigma_;
    case DistKind::Rademacher: return 1.0;
    case DistKind::UniformSym: return a_ * a_ / 3.0;
    case DistKind::TwoPoint: return v_ * v_ * prob_ / (1.0 - prob_);
    case DistKind::Zero: return 0.0;
    case DistKind::LogTailPareto: {
        const double A = tail_a_, lam = log_exp_;
        if (A < 3.0 || (A == 3.0 && lam <= 1.0))
            return std::numeric_limits<double>::infinity();
        const double s0 = std::log(x_cut_);
        if (A == 3.0)
            return std::pow(s0, 1.0 - lam) / (lam - 1.0) / tail_norm_;
        // E X^2 = (1/norm) * int exp((3-A)s) s^(-lam) ds over (s0, inf).
        auto g2 = [&](double s) { return std::exp((3.0 - A) * s - lam * std::log(s)); };
        double s1 = s0 + 60.0 / (A - 3.0);
        while (g2(s1) > 1e-24 * g2(s0)) s1 = s0 + 2.0 * (s1 - s0);
        const int n = 1 << 16;
        const double h = (s1 - s0) / n;
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const double a = s0 + j * h;
            acc += h / 6.0 * (g2(a) + 4.0 * g2(a + 0.5 * h) + g2(a + h));
        }
        acc += g2(s1) / ((A - 3.0) + lam / s1);
        return acc / tail_norm_;
    }
    }
    return 0.0;
}

bool DistributionSpec::mgf_available() const { return kind_ != DistKind::LogTailPareto; }

double DistributionSpec::log_mgf(double t) const {
    switch (kind_) {
    case DistKind::Normal: return 0.5 * t * t * sigma_ * sigma_;
    case DistKind::Rademacher: {
        const double u = std::fabs(t);
        return u + std::log1p(std::exp(-2.0 * u)) - std::log(2.0);
    }
    case DistKind::UniformSym: {
        const double z = std::fabs(a_ * t);
        if (z < 1e-4) return std::log1p(z * z / 6.0 * (1.0 + z * z / 20.0));
        return z + std::log1p(-std::exp(-2.0 * z)) - std::log(2.0 * z);
    }
    case DistKind::TwoPoint: {
        const double w = v_ * prob_ / (1.0 - prob_);
        const double e1 = t * v_ + std::log(prob_);
        const double e2 = -t * w + std::log1p(-prob_);
        const double m = std::max(e1, e2);
        return m + std::log(std::exp(e1 - m) + std::exp(e2 - m));
    }
    case DistKind::Zero: return 0.0;
    case DistKind::LogTailPareto:
        throw std::logic_error("log_mgf: moment generating function does not exist");
    }
    return 0.0;
}

double DistributionSpec::x_max() const {
    switch (kind_) {
    case DistKind::Normal:
    case DistKind::LogTailPareto: return std::numeric_limits<double>::infinity();
    case DistKind::Rademacher: return 1.0;
    case DistKind::UniformSym: return a_;
    case DistKind::TwoPoint: return v_;
    case DistKind::Zero: return 0.0;
    }
    return 0.0;
}

double DistributionSpec::p_at_x_max() const {
    switch (kind_) {
    case DistKind::Rademacher: return 0.5;
    case DistKind::TwoPoint: return prob_;
    case DistKind::Zero: return 1.0;
    default: return 0.0;
    }
}

bool DistributionSpec::symmetric() const {
    if (kind_ == DistKind::TwoPoint) return prob_ == 0.5;
    return true;
}

double DistributionSpec::sample(const CounterRng& rng, std::uint64_t i) const {
    const double u = rng.uniform01(i);
    switch (kind_) {
    case DistKind::Normal: return sigma_ * normal_quantile(u);
    case DistKind::Rademacher: return u < 0.5 ? -1.0 : 1.0;
    case DistKind::UniformSym: return a_ * (2.0 * u - 1.0);
    case DistKind::TwoPoint:
        return u < prob_ ? v_ : -v_ * prob_ / (1.0 - prob_);
    case DistKind::Zero: return 0.0;
    case DistKind::LogTailPareto: {
        const double sign = (rng.bits(i) & 1u) ? 1.0 : -1.0;
        const double target = u * tail_norm_;
        auto it = std::upper_bound(tail_cum_.begin(), tail_cum_.end(), target);
        std::size_t j = (it == tail_cum_.begin()) ? 0 : (it - tail_cum_.begin() - 1);
        if (j >= tail_s_.size() - 1) j = tail_s_.size() - 2;
        const double sj = tail_s_[j];
        const double rem = target - tail_cum_[j];
        // Local exponential model for the density within the cell.
        const double A = tail_a_, lam = log_exp_;
        const double gj = std::exp((1.0 - A) * sj - lam * std::log(sj));
        const double r = (A - 1.0) + lam / sj;
        const double frac = std::min(rem * r / gj, 1.0 - 1e-15);
        const double s = sj - std::log1p(-frac) / r;
        return sign * std::exp(s);
    }
    }
    return 0.0;
}

bool DistributionSpec::operator==(const DistributionSpec& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
    case DistKind::Normal: return sigma_ == o.sigma_;
    case DistKind::Rademacher:
    case DistKind::Zero: return true;
    case DistKind::UniformSym: return a_ == o.a_;
    case DistKind::TwoPoint: return v_ == o.v_ && prob_ == o.prob_;
    case DistKind::LogTailPareto:
        return tail_a_ == o.tail_a_ && log_exp_ == o.log_exp_ && x_cut_ == o.x_cut_;
    }
    return false;
}

std::string to_string(const DistributionSpec& d) {
    std::ostringstream os;
    switch (d.kind()) {
    case DistKind::Normal: os << "normal(sigma=" << num(d.sigma()) << ")"; break;
    case DistKind::Rademacher: os << "rademacher"; break;
    case DistKind::UniformSym: os << "uniformsym(a=" << num(d.a()) << ")"; break;
    case DistKind::TwoPoint:
        os << "twopoint(v=" << num(d.v()) << ",prob=" << num(d.prob()) << ")";
        break;
    case DistKind::LogTailPareto:
        os << "logtail(a=" << num(d.log_exp()) << ",cut=" << num(d.x_cut());
        if (d.tail_a() != 3.0) os << ",power=" << num(d.tail_a());
        os << ")";
        break;
    case DistKind::Zero: os << "zero"; break;
    }
    return os.str();
}

DistributionSpec parse_dist(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    std::string name = s;
    std::map<std::string, double> kv;
    const auto lp = s.find('(');
    if (lp != std::string::npos) {
        if (s.back() != ')') throw std::invalid_argument("parse_dist: missing ')' in '" + text + "'");
        name = s.substr(0, lp);
        std::string args = s.substr(lp + 1, s.size() - lp - 2);
        std::istringstream is(args);
        std::string item;
        while (std::getline(is, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("parse_dist: expected key=value, got '" + item + "'");
            kv[item.substr(0, eq)] = std::strtod(item.c_str() + eq + 1, nullptr);
        }
    }
    auto take = [&](const std::string& key, double dflt) {
        auto it = kv.find(key);
        if (it == kv.end()) return dflt;
        double v = it->second;
        kv.erase(it);
        return v;
    };
    DistributionSpec out = DistributionSpec::zero();
    if (name == "normal") out = DistributionSpec::normal(take("sigma", 1.0));
    else if (name == "rademacher") out = DistributionSpec::rademacher();
    else if (name == "uniformsym") out = DistributionSpec::uniform_sym(take("a", 1.0));
    else if (name == "twopoint") out = DistributionSpec::two_point(take("v", 1.0), take("prob", 0.5));
    else if (name == "logtail") {
        const double le = take("a", 2.0);
        const double cut = take("cut", 7.38905609893065);
        const double power = take("power", 3.0);
        out = DistributionSpec::log_tail_pareto(power, le, cut);
    } else if (name == "zero") out = DistributionSpec::zero();
    else throw std::invalid_argument("parse_dist: unknown distribution '" + text + "'");
    if (!kv.empty())
        throw std::invalid_argument("parse_dist: unknown key '" + kv.begin()->first + "'");
    return out;
}

} // namespace windowlaw
