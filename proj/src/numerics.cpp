#include "errors.hpp"
#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bicm {

namespace {
constexpr double neg_inf = -std::numeric_limits<double>::infinity();
constexpr double pi = 3.14159265358979323846;
} // namespace

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n <= 8) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double log_sum_exp(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("log_sum_exp: empty input");
    double mx = neg_inf;
    for (double v : values) mx = std::max(mx, v);
    if (mx == neg_inf) return neg_inf;
    if (std::isinf(mx)) return mx; // +inf dominates
    thread_local std::vector<double> shifted;
    shifted.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        shifted[i] = (values[i] == neg_inf) ? 0.0 : std::exp(values[i] - mx);
    return mx + std::log(pairwise_sum(shifted));
}

double log_sum_exp2(double a, double b) {
    if (a < b) std::swap(a, b);
    if (a == neg_inf) return neg_inf;
    return a + std::log1p(std::exp(b - a));
}

ScalarMaxResult golden_section_max(const std::function<double(double)>& f, double a, double b,
                                   double xtol, int max_iter) {
    constexpr double inv_phi = 0.6180339887498948482;
    ScalarMaxResult res;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    res.evaluations = 2;
    int iter = 0;
    while (b - a > xtol && iter < max_iter) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++res.evaluations;
        ++iter;
    }
    if (fc > fd) {
        res.x = c;
        res.value = fc;
    } else {
        res.x = d;
        res.value = fd;
    }
    res.converged = (b - a) <= xtol;
    return res;
}

GaussHermiteRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on the physicists' Hermite recurrence; roots found for
    // the upper half and mirrored.
    const double sqrt_pi = std::sqrt(pi);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Initial guesses (Numerical Recipes); roots found largest-first, the
        // previously located root sits at nodes[n - i].
        double z;
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z = rule.nodes[n - 1] - 1.14 * std::pow(static_cast<double>(n), 0.426) / rule.nodes[n - 1];
        else if (i == 2)
            z = 1.86 * rule.nodes[n - 2] - 0.86 * rule.nodes[n - 1];
        else if (i == 3)
            z = 1.91 * rule.nodes[n - 3] - 0.91 * rule.nodes[n - 2];
        else
            z = 2.0 * rule.nodes[n - i] - rule.nodes[n - i + 1];

        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Orthonormal Hermite recurrence.
            double p1 = 1.0 / std::sqrt(sqrt_pi);
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        rule.nodes[n - 1 - i] = z;
        rule.nodes[i] = -z;
        rule.weights[n - 1 - i] = 2.0 / (pp * pp);
        rule.weights[i] = rule.weights[n - 1 - i];
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

FrozenSamples generate_frozen_samples(std::uint64_t seed, const ChannelModel& ch,
                                      const Constellation& c, long count) {
    if (count < 1) throw std::invalid_argument("frozen samples: count must be positive");
    FrozenSamples fs;
    fs.m = c.m;
    fs.M = c.size();
    fs.count = count;
    fs.symbol.resize(count);
    fs.h.resize(count);
    fs.y.resize(count);
    fs.ext_normals.resize(static_cast<std::size_t>(count) * c.m);

    // Stream identity: (seed, channel kind, m). The SNR only scales y, so a
    // sweep over SNR reuses the same symbol/fading/noise draws.
    std::uint64_t sm = seed ^ (ch.kind == ChannelKind::rayleigh ? 0x52415900ULL : 0x4157474eULL)
                            ^ (static_cast<std::uint64_t>(c.m) << 40);
    Rng rng(splitmix64(sm));
    const double amp = std::sqrt(ch.snr);
    for (long i = 0; i < count; ++i) {
        const int s = rng.uniform_int(fs.M);
        fs.symbol[i] = static_cast<std::int32_t>(s);
        cplx h{1.0, 0.0};
        if (ch.kind == ChannelKind::rayleigh) h = rng.cnormal();
        const cplx z = rng.cnormal();
        fs.h[i] = h;
        fs.y[i] = h * amp * c.points[s] + z;
        for (int j = 0; j < c.m; ++j)
            fs.ext_normals[static_cast<std::size_t>(i) * c.m + j] = rng.normal();
    }
    return fs;
}

GhGrid build_gh_grid(int nodes_per_axis, const ChannelModel& ch, const Constellation& c) {
    if (ch.kind != ChannelKind::awgn)
        throw UnsupportedError("gauss_hermite backend supports AWGN only");
    if (nodes_per_axis < 8)
        throw std::invalid_argument("gauss_hermite: need at least 8 nodes per axis");
    const GaussHermiteRule rule = gauss_hermite(nodes_per_axis);
    GhGrid grid;
    grid.m = c.m;
    grid.M = c.size();
    grid.count = static_cast<long>(grid.M) * nodes_per_axis * nodes_per_axis;
    grid.symbol.reserve(grid.count);
    grid.y.reserve(grid.count);
    grid.log_weight.reserve(grid.count);
    // z = t_a + i t_b maps the CN(0,1) noise onto two exp(-t^2) axes; the
    // Jacobian and density constants collapse into w_a w_b / pi.
    const double amp = std::sqrt(ch.snr);
    const double log_prior = -c.m * std::log(2.0);
    for (int s = 0; s < grid.M; ++s) {
        const cplx mean = amp * c.points[s];
        for (int a = 0; a < nodes_per_axis; ++a)
            for (int b = 0; b < nodes_per_axis; ++b) {
                grid.symbol.push_back(static_cast<std::int32_t>(s));
                grid.y.emplace_back(mean.real() + rule.nodes[a], mean.imag() + rule.nodes[b]);
                grid.log_weight.push_back(log_prior + std::log(rule.weights[a]) +
                                          std::log(rule.weights[b]) - std::log(pi));
            }
    }
    return grid;
}

Engine::Engine(EngineConfig config) : config_(config) {
    if (config_.backend == Backend::monte_carlo && config_.samples < 1000)
        throw std::invalid_argument("engine: need at least 1000 Monte Carlo samples");
    if (config_.backend == Backend::gauss_hermite && config_.nodes_per_axis < 8)
        throw std::invalid_argument("engine: need at least 8 Gauss-Hermite nodes per axis");
}

const FrozenSamples& Engine::frozen(const ChannelModel& ch, const Constellation& c,
                                    long count) const {
    if (count < 0) count = config_.samples;
    const CacheKey key{static_cast<int>(ch.kind), ch.snr, c.content_hash(), count};
    auto it = mc_cache_.find(key);
    if (it == mc_cache_.end()) {
        auto fs = std::make_unique<FrozenSamples>(
            generate_frozen_samples(config_.seed, ch, c, count));
        it = mc_cache_.emplace(key, std::move(fs)).first;
    }
    return *it->second;
}

const GhGrid& Engine::gh_grid(const ChannelModel& ch, const Constellation& c) const {
    const CacheKey key{static_cast<int>(ch.kind), ch.snr, c.content_hash(), 0};
    auto it = gh_cache_.find(key);
    if (it == gh_cache_.end()) {
        auto grid = std::make_unique<GhGrid>(build_gh_grid(config_.nodes_per_axis, ch, c));
        it = gh_cache_.emplace(key, std::move(grid)).first;
    }
    return *it->second;
}

Estimate mc_mean(std::span<const double> values) {
    const long n = static_cast<long>(values.size());
    Estimate est;
    est.n_effective = n;
    est.mean = pairwise_sum(values) / static_cast<double>(n);
    if (n > 1) {
        std::vector<double> sq(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double d = values[i] - est.mean;
            sq[i] = d * d;
        }
        const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
        est.std_error = std::sqrt(var / static_cast<double>(n));
    }
    return est;
}

Estimate mc_log_mean_exp(std::span<const double> values) {
    const long n = static_cast<long>(values.size());
    Estimate est;
    est.n_effective = n;
    const double log_n = std::log(static_cast<double>(n));
    const double log_mean = log_sum_exp(values) - log_n;
    est.mean = log_mean;
    if (n > 1) {
        // First-order: SE(log W-bar) = SE(W-bar) / W-bar, computed in the log
        // domain to avoid overflow of exp(v).
        std::vector<double> doubled(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) doubled[i] = 2.0 * values[i];
        const double log_mean_sq = log_sum_exp(doubled) - log_n;
        const double log_var_num = log_mean_sq > 2.0 * log_mean
            ? log_mean_sq + std::log1p(-std::exp(2.0 * log_mean - log_mean_sq))
            : neg_inf;
        if (log_var_num > neg_inf) {
            const double log_var =
                log_var_num + std::log(static_cast<double>(n) / static_cast<double>(n - 1));
            est.std_error = std::exp(0.5 * log_var - 0.5 * log_n - log_mean);
        }
    }
    return est;
}

Estimate Engine::expect(const ChannelModel& ch, const Constellation& c,
                        const std::function<double(const SampleView&)>& integrand) const {
    if (is_monte_carlo()) {
        const FrozenSamples& fs = frozen(ch, c);
        std::vector<double> values(fs.count);
        for (long i = 0; i < fs.count; ++i) {
            SampleView view{fs.symbol[i], Observation{fs.y[i], fs.h[i]}, fs.ext_row(i)};
            values[i] = integrand(view);
        }
        return mc_mean(values);
    }
    const GhGrid& grid = gh_grid(ch, c);
    std::vector<double> weighted(grid.count);
    for (long i = 0; i < grid.count; ++i) {
        SampleView view{grid.symbol[i], Observation{grid.y[i], cplx{1.0, 0.0}}, {}};
        weighted[i] = std::exp(grid.log_weight[i]) * integrand(view);
    }
    Estimate est;
    est.mean = pairwise_sum(weighted);
    est.std_error = 0.0;
    est.n_effective = grid.count;
    return est;
}

Estimate Engine::log_expect_exp(const ChannelModel& ch, const Constellation& c,
                                const std::function<double(const SampleView&)>& log_integrand) const {
    if (is_monte_carlo()) {
        const FrozenSamples& fs = frozen(ch, c);
        std::vector<double> values(fs.count);
        for (long i = 0; i < fs.count; ++i) {
            SampleView view{fs.symbol[i], Observation{fs.y[i], fs.h[i]}, fs.ext_row(i)};
            values[i] = log_integrand(view);
        }
        return mc_log_mean_exp(values);
    }
    const GhGrid& grid = gh_grid(ch, c);
    std::vector<double> values(grid.count);
    for (long i = 0; i < grid.count; ++i) {
        SampleView view{grid.symbol[i], Observation{grid.y[i], cplx{1.0, 0.0}}, {}};
        values[i] = grid.log_weight[i] + log_integrand(view);
    }
    Estimate est;
    est.mean = log_sum_exp(values);
    est.std_error = 0.0;
    est.n_effective = grid.count;
    return est;
}

} // namespace bicm
