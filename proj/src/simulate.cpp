#include "windowlaw/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace windowlaw {
namespace {

constexpr std::uint64_t kStateMagic = 0x574C53544154455FULL; // "WLSTATE_"
constexpr std::uint64_t kStateVersion = 1;

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xCBF29CE484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t fnv1a_str(const std::string& s, std::uint64_t h) {
    return fnv1a(s.data(), s.size(), h);
}

struct PlanPoint {
    std::int64_t k = 0, n = 0, a = 0;
    double d = 0, norm = 0;
    std::int64_t start = 0, end = 0; // window sum over stream indices (start, end]
};

std::vector<PlanPoint> build_plan(const StreamConfig& cfg) {
    const std::int64_t lo = n_min(cfg.spec);
    // Upper bound on k: n_k = psi(ck) <= n_total means ck <= phi(n_total).
    const double phi_top = phi(cfg.spec, static_cast<double>(std::max<std::int64_t>(cfg.n_total, lo)));
    const std::int64_t k_cap = static_cast<std::int64_t>(std::ceil(phi_top / cfg.c)) + 4;
    SubsequenceSpec sub{cfg.spec, cfg.c, 1};
    const std::vector<std::int64_t> nk = subsequence_range(sub, 1, std::max<std::int64_t>(k_cap, 1));

    std::vector<PlanPoint> plan;
    for (std::int64_t k = 1; k <= static_cast<std::int64_t>(nk.size()); ++k) {
        const std::int64_t n = nk[k - 1];
        if (n < lo) continue;
        const WindowSchedulePoint sp = schedule_point(cfg.spec, n);
        if (n + sp.a_n > cfg.n_total) break;
        PlanPoint p;
        p.k = k;
        p.n = n;
        p.a = sp.a_n;
        p.d = sp.d_n;
        p.norm = sp.normalizer;
        p.start = n;
        p.end = n + sp.a_n;
        plan.push_back(p);
    }
    return plan;
}

struct Interval {
    std::int64_t lo = 0, hi = 0; // covers stream indices (lo, hi]
};

std::vector<Interval> merged_intervals(const std::vector<PlanPoint>& plan) {
    std::vector<Interval> merged;
    for (const PlanPoint& p : plan) {
        if (!merged.empty() && p.start <= merged.back().hi)
            merged.back().hi = std::max(merged.back().hi, p.end);
        else
            merged.push_back({p.start, p.end});
    }
    return merged;
}

std::vector<std::int64_t> boundary_positions(const std::vector<PlanPoint>& plan) {
    std::vector<std::int64_t> b;
    b.reserve(2 * plan.size());
    for (const PlanPoint& p : plan) {
        b.push_back(p.start);
        b.push_back(p.end);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

struct PassState {
    std::int64_t pos = 0; // highest stream index already consumed
    std::uint64_t bidx = 0;
    double z = 0, comp = 0; // compensated running sum over generated indices
};

void save_state(const std::string& path, const StreamConfig& cfg, int replicate,
                const PassState& st, const std::vector<double>& zvals) {
    const std::string tmp = path + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot write state file: " + tmp);
    auto put = [&](const void* p, std::size_t n) { std::fwrite(p, 1, n, f); };
    const std::uint64_t hash = cfg.config_hash();
    const std::int64_t rep = replicate;
    put(&kStateMagic, 8);
    put(&kStateVersion, 8);
    put(&hash, 8);
    put(&cfg.seed, 8);
    put(&rep, 8);
    put(&st.pos, 8);
    put(&st.bidx, 8);
    put(&st.z, 8);
    put(&st.comp, 8);
    put(zvals.data(), st.bidx * sizeof(double));
    std::fclose(f);
    std::rename(tmp.c_str(), path.c_str());
}

bool load_state(const std::string& path, const StreamConfig& cfg, int replicate,
                PassState& st, std::vector<double>& zvals) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) return false;
    auto get = [&](void* p, std::size_t n) {
        if (std::fread(p, 1, n, f) != n) throw std::runtime_error("truncated state file: " + path);
    };
    std::uint64_t magic = 0, version = 0, hash = 0, seed = 0;
    std::int64_t rep = 0;
    get(&magic, 8);
    get(&version, 8);
    get(&hash, 8);
    get(&seed, 8);
    get(&rep, 8);
    if (magic != kStateMagic || version != kStateVersion) {
        std::fclose(f);
        throw std::runtime_error("unrecognized state file format: " + path);
    }
    if (hash != cfg.config_hash() || seed != cfg.seed || rep != replicate) {
        std::fclose(f);
        throw std::runtime_error("state file does not match this run: " + path);
    }
    get(&st.pos, 8);
    get(&st.bidx, 8);
    get(&st.z, 8);
    get(&st.comp, 8);
    if (st.bidx > zvals.size()) {
        std::fclose(f);
        throw std::runtime_error("corrupt state file: " + path);
    }
    get(zvals.data(), st.bidx * sizeof(double));
    std::fclose(f);
    return true;
}

void kahan_add(double& sum, double& comp, double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
}

} // namespace

void StreamConfig::validate() const {
    if (!(c > 1.0)) throw std::invalid_argument("StreamConfig: c must be > 1");
    if (n_total < n_min(spec))
        throw std::invalid_argument("StreamConfig: n_total below the admissible range");
    if (replicates < 1) throw std::invalid_argument("StreamConfig: replicates >= 1");
}

std::uint64_t StreamConfig::config_hash() const {
    std::uint64_t h = fnv1a_str(to_string(spec), 0xCBF29CE484222325ULL);
    h = fnv1a_str(to_string(dist), h);
    const double cd = c;
    h = fnv1a(&cd, sizeof cd, h);
    h = fnv1a(&n_total, sizeof n_total, h);
    const std::uint64_t m = static_cast<std::uint64_t>(mode);
    h = fnv1a(&m, sizeof m, h);
    return h;
}

SimulationResult run_windows(const StreamConfig& config, int replicate,
                             const std::string& state_path) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const std::vector<PlanPoint> plan = build_plan(config);
    if (plan.empty())
        throw std::invalid_argument("run_windows: n_total shorter than the first window");
    const std::vector<std::int64_t> bounds = boundary_positions(plan);
    std::vector<double> zvals(bounds.size(), 0.0);
    const CounterRng rng(config.seed, static_cast<std::uint64_t>(replicate));

    PassState st;
    std::size_t ring_bytes = 0;
    std::optional<double> dense;
    if (!state_path.empty() && config.mode == SimMode::CheckpointsOnly)
        load_state(state_path, config, replicate, st, zvals);

    if (config.mode == SimMode::CheckpointsOnly) {
        // Only indices inside some window contribute to any recorded
        // statistic; the counter RNG is index-addressable, so the pass can
        // skip the gaps while producing the same draws a full sweep would.
        constexpr std::int64_t kSaveEvery = std::int64_t{1} << 24;
        std::int64_t since_save = 0;
        for (const Interval& iv : merged_intervals(plan)) {
            while (st.bidx < bounds.size() && bounds[st.bidx] <= std::max(iv.lo, st.pos))
                zvals[st.bidx] = st.z, ++st.bidx;
            for (std::int64_t i = std::max(iv.lo, st.pos) + 1; i <= iv.hi; ++i) {
                kahan_add(st.z, st.comp, config.dist.sample(rng, static_cast<std::uint64_t>(i)));
                st.pos = i;
                if (st.bidx < bounds.size() && bounds[st.bidx] == i)
                    zvals[st.bidx] = st.z, ++st.bidx;
                if (!state_path.empty() && ++since_save >= kSaveEvery) {
                    save_state(state_path, config, replicate, st, zvals);
                    since_save = 0;
                }
            }
            st.pos = std::max(st.pos, iv.hi);
            if (!state_path.empty()) save_state(state_path, config, replicate, st, zvals);
        }
        while (st.bidx < bounds.size()) zvals[st.bidx] = st.z, ++st.bidx;
    } else {
        // Dense sweep: generate everything, keep a circular buffer of prefix
        // sums wide enough for the largest window.
        if (!state_path.empty())
            throw std::invalid_argument("run_windows: state files support CheckpointsOnly mode");
        const std::int64_t lo_n = n_min(config.spec);
        const std::int64_t cap =
            schedule_point(config.spec, std::max(config.n_total, lo_n)).a_n + 2;
        std::vector<double> ring(static_cast<std::size_t>(cap), 0.0);
        ring_bytes = ring.size() * sizeof(double);
        double dense_val = -std::numeric_limits<double>::infinity();
        std::int64_t n_ptr = lo_n;
        WindowSchedulePoint sp_ptr = schedule_point(config.spec, n_ptr);
        for (std::int64_t i = 1; i <= config.n_total; ++i) {
            kahan_add(st.z, st.comp, config.dist.sample(rng, static_cast<std::uint64_t>(i)));
            ring[static_cast<std::size_t>(i % cap)] = st.z;
            if (st.bidx < bounds.size() && bounds[st.bidx] == i)
                zvals[st.bidx] = st.z, ++st.bidx;
            while (n_ptr + sp_ptr.a_n <= i) {
                if (n_ptr + sp_ptr.a_n == i) {
                    const double s_start = ring[static_cast<std::size_t>(n_ptr % cap)];
                    dense_val = std::max(dense_val, (st.z - s_start) / sp_ptr.normalizer);
                }
                sp_ptr = schedule_point(config.spec, ++n_ptr);
            }
        }
        while (st.bidx < bounds.size()) zvals[st.bidx] = st.z, ++st.bidx;
        st.pos = config.n_total;
        dense = dense_val;
    }

    SimulationResult result;
    result.dense_max = dense;
    result.seed = config.seed;
    result.replicate = replicate;
    result.config_hash = config.config_hash();
    double rmax = -std::numeric_limits<double>::infinity();
    double rmin = std::numeric_limits<double>::infinity();
    for (const PlanPoint& p : plan) {
        const auto is = std::lower_bound(bounds.begin(), bounds.end(), p.start) - bounds.begin();
        const auto ie = std::lower_bound(bounds.begin(), bounds.end(), p.end) - bounds.begin();
        const double r = (zvals[static_cast<std::size_t>(ie)] -
                          zvals[static_cast<std::size_t>(is)]) / p.norm;
        rmax = std::max(rmax, r);
        rmin = std::min(rmin, r);
        result.checkpoints.push_back({p.k, p.n, p.a, p.d, r, rmax});
    }
    result.running_max = rmax;
    result.running_min = rmin;
    result.working_bytes = plan.size() * sizeof(PlanPoint) +
                           bounds.size() * sizeof(std::int64_t) +
                           zvals.size() * sizeof(double) + ring_bytes;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!state_path.empty()) std::remove(state_path.c_str());
    return result;
}

std::vector<SimulationResult> run_replicates(const StreamConfig& config) {
    config.validate();
    std::vector<SimulationResult> out;
    out.reserve(static_cast<std::size_t>(config.replicates));
    for (int r = 0; r < config.replicates; ++r) out.push_back(run_windows(config, r));
    return out;
}

TruncationStats truncation_experiment(const StreamConfig& config, const BoundParams& params) {
    config.validate();
    params.validate();
    const std::vector<PlanPoint> plan = build_plan(config);
    if (plan.empty())
        throw std::invalid_argument("truncation_experiment: n_total shorter than the first window");

    TruncationStats stats;
    for (int rep = 0; rep < config.replicates; ++rep) {
        const CounterRng rng(config.seed, static_cast<std::uint64_t>(rep));
        for (const PlanPoint& p : plan) {
            const WindowSchedulePoint sp = schedule_point(config.spec, p.n, params);
            TruncationWindow w;
            w.k = p.k;
            w.n = p.n;
            w.a = p.a;
            w.d = p.d;
            w.f = sp.f_n;
            w.cut1 = *sp.b_theorem21;
            w.cut2 = params.delta * std::sqrt(sp.f_n);
            w.replicate = rep;
            for (std::int64_t i = p.start + 1; i <= p.end; ++i) {
                const double x = config.dist.sample(rng, static_cast<std::uint64_t>(i));
                const double ax = std::fabs(x);
                if (ax >= w.cut2) {
                    w.t3 += x;
                    ++w.n_large;
                } else if (ax <= w.cut1) {
                    w.t1 += x;
                } else {
                    w.t2 += x;
                }
            }
            w.total = w.t1 + w.t2 + w.t3;
            stats.large_total += w.n_large;
            stats.windows.push_back(w);
        }
    }

    // Pool the diagnostics over the last ten checkpoints of each replicate.
    const std::size_t per_rep = plan.size();
    const std::size_t tail = std::min<std::size_t>(10, per_rep);
    double su = 0, suu = 0, sw = 0, sww = 0;
    std::size_t n = 0;
    for (int rep = 0; rep < config.replicates; ++rep) {
        for (std::size_t j = per_rep - tail; j < per_rep; ++j) {
            const TruncationWindow& w = stats.windows[rep * per_rep + j];
            const double u = w.t1 / std::sqrt(static_cast<double>(w.a) * w.d);
            const double v = w.t1 / std::sqrt(static_cast<double>(w.a));
            su += u;
            suu += u * u;
            sw += v;
            sww += v * v;
            ++n;
        }
    }
    if (n > 1) {
        const double mu = su / n;
        const double var_u = (suu - n * mu * mu) / (n - 1);
        stats.centering_ratio = std::fabs(mu);
        stats.centering_se = std::sqrt(std::max(var_u, 0.0) / n);
        const double mw = sw / n;
        const double var_w = (sww - n * mw * mw) / (n - 1);
        stats.var_ratio = var_w / (params.sigma * params.sigma);
    }
    return stats;
}

VarianceCheckReport empirical_variance_check(const std::vector<SimulationResult>& results,
                                             double sigma) {
    std::size_t total = 0;
    for (const auto& r : results) total += r.checkpoints.size();
    if (total < 30)
        throw std::invalid_argument("empirical_variance_check: needs >= 30 checkpoints");

    const std::size_t m = results.front().checkpoints.size();
    const std::size_t block_len = 16;
    VarianceCheckReport rep;
    double pooled = 0;
    std::size_t pooled_n = 0;
    for (std::size_t b0 = 0; b0 < m; b0 += block_len) {
        const std::size_t b1 = std::min(m, b0 + block_len);
        double sr = 0, srr = 0, sd = 0;
        std::size_t n = 0;
        for (const auto& res : results) {
            for (std::size_t j = b0; j < b1 && j < res.checkpoints.size(); ++j) {
                const double r = res.checkpoints[j].r;
                sr += r;
                srr += r * r;
                sd += res.checkpoints[j].d;
                ++n;
            }
        }
        if (n < 2) continue;
        VarianceBlock blk;
        const double mr = sr / n;
        blk.sample_var = (srr - n * mr * mr) / (n - 1);
        blk.d_mean = sd / n;
        blk.expected = sigma * sigma / (2.0 * blk.d_mean);
        blk.ratio = blk.sample_var / blk.expected;
        rep.blocks.push_back(blk);
    }
    // Pooled ratio: each r^2 has expectation sigma^2 / (2 d).
    for (const auto& res : results)
        for (const auto& cp : res.checkpoints) {
            pooled += cp.r * cp.r / (sigma * sigma / (2.0 * cp.d));
            ++pooled_n;
        }
    rep.pooled_ratio = pooled_n ? pooled / pooled_n : 0.0;
    return rep;
}

LimsupReport limsup_summary(const std::vector<SimulationResult>& results, double sigma,
                            double band_lo, double band_hi) {
    if (results.size() < 8)
        throw std::invalid_argument("limsup_summary: needs >= 8 replicates");
    LimsupReport rep;
    rep.band_lo = band_lo;
    rep.band_hi = band_hi;
    std::vector<double> lastq;
    std::size_t in_band = 0;
    for (const auto& res : results) {
        const double v = res.running_max / sigma;
        rep.max_over_sigma.push_back(v);
        if (v >= band_lo && v <= band_hi) ++in_band;
        const std::size_t m = res.checkpoints.size();
        double q = -std::numeric_limits<double>::infinity();
        for (std::size_t j = m - std::max<std::size_t>(m / 4, 1); j < m; ++j)
            q = std::max(q, res.checkpoints[j].r);
        lastq.push_back(q / sigma);
    }
    auto median_of = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    rep.median = median_of(rep.max_over_sigma);
    rep.last_quarter_median = median_of(lastq);
    rep.fraction_in_band = static_cast<double>(in_band) / results.size();
    return rep;
}

} // namespace windowlaw
