#include "measures.hpp"

#include "errors.hpp"
#include "metric_rows.hpp"

#include <cmath>

namespace bicm {

namespace {

constexpr double ln2 = 0.69314718055994530942;
constexpr double log_half = -0.69314718055994530942;

// Weighted mean for the GH backend: values are exact integrand evaluations.
Estimate gh_mean(std::span<const double> values, std::span<const double> log_weight) {
    std::vector<double> weighted(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        weighted[i] = std::exp(log_weight[i]) * values[i];
    Estimate est;
    est.mean = pairwise_sum(weighted);
    est.n_effective = static_cast<long>(values.size());
    return est;
}

// GMI(s) in nats over prebuilt metric rows.
Estimate gmi_at_s_nats(const MetricRows& rows, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("gmi: s must be positive");
    std::vector<double> values(rows.n);
    for (long i = 0; i < rows.n; ++i) values[i] = -rows.log_inner(i, s);
    return rows.monte_carlo ? mc_mean(values) : gh_mean(values, rows.log_weight);
}

MeasureResult to_bits(const Estimate& est) {
    MeasureResult r;
    r.value = est.mean / ln2;
    r.std_error = est.std_error / ln2;
    return r;
}

// Per-bit GMI(s) summands in nats; returns the total estimate and fills
// per_bit (also nats).
Estimate per_bit_gmi_nats(const BitRows& rows, double s, std::vector<double>& per_bit) {
    if (!(s > 0.0)) throw std::invalid_argument("gmi: s must be positive");
    const int m = rows.m;
    per_bit.assign(m, 0.0);
    std::vector<double> total(rows.n);
    std::vector<std::vector<double>> bit_values(m, std::vector<double>(rows.n));
    for (long i = 0; i < rows.n; ++i) {
        const auto t = rows.bits(i);
        double acc = 0.0;
        for (int j = 1; j <= m; ++j) {
            const int b = rows.labeling->bit_of_point(rows.tx[i], j);
            const double v = s * t[(j - 1) * 2 + b] -
                             log_sum_exp2(log_half + s * t[(j - 1) * 2], log_half + s * t[(j - 1) * 2 + 1]);
            bit_values[j - 1][i] = v;
            acc += v;
        }
        total[i] = acc;
    }
    Estimate est;
    if (rows.monte_carlo) {
        est = mc_mean(total);
        for (int j = 0; j < m; ++j) per_bit[j] = mc_mean(bit_values[j]).mean;
    } else {
        est = gh_mean(total, rows.log_weight);
        for (int j = 0; j < m; ++j) per_bit[j] = gh_mean(bit_values[j], rows.log_weight).mean;
    }
    return est;
}

} // namespace

MeasureResult cm_capacity(const ChannelModel& ch, const Constellation& c, const Engine& engine) {
    const MatchedMetric metric(c);
    const MetricRows rows = build_metric_rows(metric, ch, engine);
    return to_bits(gmi_at_s_nats(rows, 1.0));
}

MeasureResult bicm_capacity(const ChannelModel& ch, const Constellation& c, const Labeling& l,
                            const Engine& engine) {
    const BicmSumMetric metric(c, l);
    const BitRows rows = build_bit_rows(metric, ch, engine);
    std::vector<double> per_bit;
    MeasureResult r = to_bits(per_bit_gmi_nats(rows, 1.0, per_bit));
    for (auto& v : per_bit) v /= ln2;
    r.per_bit = std::move(per_bit);
    return r;
}

MeasureResult gmi_at_s(const SymbolMetric& metric, const ChannelModel& ch, const Engine& engine,
                       double s) {
    const MetricRows rows = build_metric_rows(metric, ch, engine);
    return to_bits(gmi_at_s_nats(rows, s));
}

MeasureResult gmi(const SymbolMetric& metric, const ChannelModel& ch, const Engine& engine) {
    const MetricRows rows = build_metric_rows(metric, ch, engine);
    const auto objective = [&rows](double log_s) { return gmi_at_s_nats(rows, std::exp(log_s)).mean; };
    const ScalarMaxResult opt = golden_section_max(objective, std::log(s_search_min),
                                                   std::log(s_search_max), s_search_log_tol);
    const double s_opt = std::exp(opt.x);
    MeasureResult r = to_bits(gmi_at_s_nats(rows, s_opt));
    r.s_opt = s_opt;
    r.converged = opt.converged;
    return r;
}

MeasureResult gmi_per_bit(const SymbolMetric& metric, const ChannelModel& ch,
                          const Engine& engine, double s) {
    const BitRows rows = build_bit_rows(metric, ch, engine);
    std::vector<double> per_bit;
    MeasureResult r = to_bits(per_bit_gmi_nats(rows, s, per_bit));
    for (auto& v : per_bit) v /= ln2;
    r.per_bit = std::move(per_bit);
    r.s_opt = s;
    return r;
}

MeasureResult pseudo_gmi_extrinsic_tx(const SymbolMetric& metric, const ChannelModel& ch,
                                      const Engine& engine) {
    if (metric.kind() != MetricKind::extrinsic_tx)
        throw UnsupportedError("pseudo-GMI is defined for the extrinsic-tx metric");
    MeasureResult r = gmi_per_bit(metric, ch, engine, 1.0);
    r.s_opt.reset();
    r.pseudo = true;
    return r;
}

} // namespace bicm
