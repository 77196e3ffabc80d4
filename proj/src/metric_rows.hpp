// Per-sample metric tables over an engine's sample enumeration. Built once
// per (metric, channel, engine) and reused across every (rho, s) evaluation
// of a sweep, so curve comparisons are paired through common random numbers.
#pragma once

#include "metrics.hpp"
#include "numerics.hpp"

#include <vector>

namespace bicm {

struct MetricRows {
    long n = 0;
    int M = 0;
    int m = 0;
    bool monte_carlo = true;
    double log_prior = 0.0;            // log 2^-m
    std::vector<double> rows;          // n x M, log q(x', y_i)
    std::vector<double> row_max;       // per-sample max of rows
    std::vector<std::int32_t> tx;      // transmitted point index per sample
    std::vector<double> log_weight;    // GH backend only

    std::span<const double> row(long i) const {
        return {rows.data() + static_cast<std::size_t>(i) * M, static_cast<std::size_t>(M)};
    }

    // log sum_x' p(x') (q(x',y_i)/q(x_i,y_i))^s, one exp pass using the
    // cached row maximum (s > 0 keeps the max shift valid).
    double log_inner(long i, double s) const {
        const double* r = rows.data() + static_cast<std::size_t>(i) * M;
        const double mx = row_max[i];
        double acc = 0.0;
        for (int x = 0; x < M; ++x) acc += std::exp(s * (r[x] - mx));
        return log_prior + s * (mx - r[tx[i]]) + std::log(acc);
    }
};

MetricRows build_metric_rows(const SymbolMetric& metric, const ChannelModel& ch,
                             const Engine& engine);

// Bit-level tables log q_j(b, y_i), layout n x 2m, for bit-decomposable
// metrics (per-bit rate decompositions and the parallel-channel model).
struct BitRows {
    long n = 0;
    int m = 0;
    bool monte_carlo = true;
    std::vector<double> table;         // n x 2m, (j-1)*2 + b
    std::vector<std::int32_t> tx;      // transmitted point index
    std::vector<double> log_weight;    // GH backend only
    const Labeling* labeling = nullptr;

    std::span<const double> bits(long i) const {
        return {table.data() + static_cast<std::size_t>(i) * 2 * m,
                static_cast<std::size_t>(2 * m)};
    }
};

BitRows build_bit_rows(const SymbolMetric& metric, const ChannelModel& ch, const Engine& engine);

// Realize the metric's extrinsic model for one sample, or return nullptr for
// metrics that take no side information.
class ExtrinsicPerSample {
public:
    ExtrinsicPerSample(const SymbolMetric& metric, bool monte_carlo);
    const ExtrinsicRealization* realize(std::span<const double> normals);

private:
    const ExtrinsicModel* model_ = nullptr;
    int m_ = 0;
    ExtrinsicRealization current_;
};

} // namespace bicm
