// Expectation engine: seeded Monte Carlo and Gauss-Hermite backends, stable
// log-domain reductions with a fixed pairwise summation tree, scalar golden
// section search.
#pragma once

#include "channel.hpp"
#include "constellation.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace bicm {

// ---------------------------------------------------------------------------
// Reductions

// Deterministic pairwise sum; the reduction tree depends only on the length.
double pairwise_sum(std::span<const double> values);

// log(sum(exp(v))) via max shift; tolerates -inf entries, requires nonempty.
double log_sum_exp(std::span<const double> values);
double log_sum_exp2(double a, double b);

// log(sum(exp(s * v))) without materializing the scaled array; sequential
// inner sum (the outer sample reduction carries the pairwise tree).
inline double log_sum_exp_scaled(std::span<const double> values, double s) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : values) mx = std::max(mx, s * v);
    if (std::isinf(mx)) return mx;
    double acc = 0.0;
    for (double v : values) acc += std::exp(s * v - mx);
    return mx + std::log(acc);
}

// ---------------------------------------------------------------------------
// Scalar maximization

struct ScalarMaxResult {
    double x = 0.0;
    double value = 0.0;
    bool converged = false;
    int evaluations = 0;
};

// Golden-section maximization of a unimodal f on [a,b] to |b-a| <= xtol.
ScalarMaxResult golden_section_max(const std::function<double(double)>& f, double a, double b,
                                   double xtol, int max_iter = 200);

// ---------------------------------------------------------------------------
// Gauss-Hermite rule (physicists' convention: int exp(-t^2) f(t) dt)

struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(int n);

// ---------------------------------------------------------------------------
// Engine

enum class Backend { monte_carlo, gauss_hermite };

struct EngineConfig {
    Backend backend = Backend::monte_carlo;
    long samples = 200000;    // MC sample count
    int nodes_per_axis = 32;  // GH nodes per real noise axis
    std::uint64_t seed = 1;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0; // 0 for quadrature
    long n_effective = 0;
};

// Deterministic function of (seed, channel, constellation, count): transmitted
// symbols drawn uniformly, fading/noise per the channel kind, plus m standard
// normals per sample that back the extrinsic-information models. The stream
// depends on (seed, kind, m) only, so a shorter set is a prefix of a longer
// one and SNR sweeps reuse the same underlying draws.
struct FrozenSamples {
    int m = 0;
    int M = 0;
    long count = 0;
    std::vector<std::int32_t> symbol;
    std::vector<cplx> h;
    std::vector<cplx> y;
    std::vector<double> ext_normals; // count * m, row-major

    std::span<const double> ext_row(long i) const {
        return {ext_normals.data() + static_cast<std::size_t>(i) * m, static_cast<std::size_t>(m)};
    }
};

FrozenSamples generate_frozen_samples(std::uint64_t seed, const ChannelModel& ch,
                                      const Constellation& c, long count);

// Precomputed (x, y) enumeration with log-weights for the GH backend:
// exact sum over symbols, tensor quadrature over the two noise axes.
struct GhGrid {
    int m = 0;
    int M = 0;
    long count = 0;                  // M * nodes^2
    std::vector<std::int32_t> symbol;
    std::vector<cplx> y;
    std::vector<double> log_weight;
};

GhGrid build_gh_grid(int nodes_per_axis, const ChannelModel& ch, const Constellation& c);

// One evaluation point handed to integrands.
struct SampleView {
    std::int32_t symbol = 0;
    Observation obs;
    std::span<const double> ext_normals; // empty for the GH backend
};

class Engine {
public:
    explicit Engine(EngineConfig config);

    const EngineConfig& config() const { return config_; }

    // Frozen sample set for (channel, constellation); cached per engine.
    // count < 0 selects the configured sample count.
    const FrozenSamples& frozen(const ChannelModel& ch, const Constellation& c,
                                long count = -1) const;

    // GH grid for an AWGN channel; throws for Rayleigh.
    const GhGrid& gh_grid(const ChannelModel& ch, const Constellation& c) const;

    bool is_monte_carlo() const { return config_.backend == Backend::monte_carlo; }

    // E[f(X, Y[, ext])] over p(x) p(y|x).
    Estimate expect(const ChannelModel& ch, const Constellation& c,
                    const std::function<double(const SampleView&)>& integrand) const;

    // log E[exp(g(.))], with a first-order standard error for the MC backend.
    Estimate log_expect_exp(const ChannelModel& ch, const Constellation& c,
                            const std::function<double(const SampleView&)>& log_integrand) const;

private:
    EngineConfig config_;
    struct CacheKey {
        int kind;
        double snr;
        std::uint64_t chash;
        long count;
        bool operator<(const CacheKey& o) const {
            if (kind != o.kind) return kind < o.kind;
            if (snr != o.snr) return snr < o.snr;
            if (chash != o.chash) return chash < o.chash;
            return count < o.count;
        }
    };
    mutable std::map<CacheKey, std::unique_ptr<FrozenSamples>> mc_cache_;
    mutable std::map<CacheKey, std::unique_ptr<GhGrid>> gh_cache_;
};

// Mean and standard error of a plain sample mean (deterministic reduction).
Estimate mc_mean(std::span<const double> values);

// -log( sum_i exp(log_w_i + g_i) ) style reductions used by the Gallager
// functions: returns log of the weighted mean with first-order SE for MC.
Estimate mc_log_mean_exp(std::span<const double> values);

} // namespace bicm
