#include "metric_rows.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>

namespace bicm {

ExtrinsicPerSample::ExtrinsicPerSample(const SymbolMetric& metric, bool monte_carlo)
    : m_(metric.constellation().m) {
    if (!metric.uses_extrinsic()) return;
    model_ = metric.extrinsic_model();
    if (!monte_carlo && model_->kind == ExtrinsicKind::gaussian_llr)
        throw UnsupportedError("gaussian extrinsic model requires the Monte Carlo backend");
}

const ExtrinsicRealization* ExtrinsicPerSample::realize(std::span<const double> normals) {
    if (model_ == nullptr) return nullptr;
    current_ = realize_extrinsic(*model_, m_, normals);
    return &current_;
}

MetricRows build_metric_rows(const SymbolMetric& metric, const ChannelModel& ch,
                             const Engine& engine) {
    const Constellation& c = metric.constellation();
    MetricRows out;
    out.M = c.size();
    out.m = c.m;
    out.log_prior = -c.m * std::log(2.0);
    out.monte_carlo = engine.is_monte_carlo();
    ExtrinsicPerSample ext(metric, out.monte_carlo);
    if (out.monte_carlo) {
        const FrozenSamples& fs = engine.frozen(ch, c);
        out.n = fs.count;
        out.rows.resize(static_cast<std::size_t>(out.n) * out.M);
        out.tx.assign(fs.symbol.begin(), fs.symbol.end());
        for (long i = 0; i < out.n; ++i) {
            MetricContext ctx{fs.symbol[i], ext.realize(fs.ext_row(i))};
            metric.log_metric_row(ch, Observation{fs.y[i], fs.h[i]}, ctx,
                                  {out.rows.data() + static_cast<std::size_t>(i) * out.M,
                                   static_cast<std::size_t>(out.M)});
        }
    } else {
        const GhGrid& grid = engine.gh_grid(ch, c);
        out.n = grid.count;
        out.rows.resize(static_cast<std::size_t>(out.n) * out.M);
        out.tx.assign(grid.symbol.begin(), grid.symbol.end());
        out.log_weight = grid.log_weight;
        for (long i = 0; i < out.n; ++i) {
            MetricContext ctx{grid.symbol[i], ext.realize({})};
            metric.log_metric_row(ch, Observation{grid.y[i], cplx{1.0, 0.0}}, ctx,
                                  {out.rows.data() + static_cast<std::size_t>(i) * out.M,
                                   static_cast<std::size_t>(out.M)});
        }
    }
    out.row_max.resize(out.n);
    for (long i = 0; i < out.n; ++i) {
        const double* r = out.rows.data() + static_cast<std::size_t>(i) * out.M;
        double mx = r[0];
        for (int x = 1; x < out.M; ++x) mx = std::max(mx, r[x]);
        out.row_max[i] = mx;
    }
    return out;
}

BitRows build_bit_rows(const SymbolMetric& metric, const ChannelModel& ch, const Engine& engine) {
    if (!metric.bit_decomposable())
        throw UnsupportedError(std::string(metric_kind_name(metric.kind())) +
                               ": per-bit decomposition does not apply");
    const Constellation& c = metric.constellation();
    BitRows out;
    out.m = c.m;
    out.monte_carlo = engine.is_monte_carlo();
    out.labeling = metric.labeling();
    ExtrinsicPerSample ext(metric, out.monte_carlo);
    const std::size_t stride = 2 * static_cast<std::size_t>(out.m);
    if (out.monte_carlo) {
        const FrozenSamples& fs = engine.frozen(ch, c);
        out.n = fs.count;
        out.table.resize(static_cast<std::size_t>(out.n) * stride);
        out.tx.assign(fs.symbol.begin(), fs.symbol.end());
        for (long i = 0; i < out.n; ++i) {
            MetricContext ctx{fs.symbol[i], ext.realize(fs.ext_row(i))};
            metric.log_bit_table(ch, Observation{fs.y[i], fs.h[i]}, ctx,
                                 {out.table.data() + static_cast<std::size_t>(i) * stride, stride});
        }
    } else {
        const GhGrid& grid = engine.gh_grid(ch, c);
        out.n = grid.count;
        out.table.resize(static_cast<std::size_t>(out.n) * stride);
        out.tx.assign(grid.symbol.begin(), grid.symbol.end());
        out.log_weight = grid.log_weight;
        for (long i = 0; i < out.n; ++i) {
            MetricContext ctx{grid.symbol[i], ext.realize({})};
            metric.log_bit_table(ch, Observation{grid.y[i], cplx{1.0, 0.0}}, ctx,
                                 {out.table.data() + static_cast<std::size_t>(i) * stride, stride});
        }
    }
    return out;
}

} // namespace bicm
