#include "metrics.hpp"

#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bicm {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();
constexpr double log_half = -0.69314718055994530942;

void fill_log_densities(const ChannelModel& ch, const Constellation& c, const Observation& obs,
                        std::vector<double>& ld) {
    const int M = c.size();
    ld.resize(M);
    const cplx hy = obs.h * std::sqrt(ch.snr);
    constexpr double log_pi = 1.1447298858494001741;
    for (int x = 0; x < M; ++x) ld[x] = -log_pi - std::norm(obs.y - hy * c.points[x]);
}

// log q_j(b,y) with extrinsic weights referenced to ref_symbol, for all
// (j,b). Exclusive-of-j weight sums are built from prefix/suffix arrays so
// -inf factors (perfect side information) never hit a subtraction.
void fill_bit_table_referenced(const std::vector<double>& ld, const Labeling& l,
                               const ExtrinsicRealization& ext, int ref_symbol,
                               std::span<double> out) {
    const int m = l.bits();
    const int M = 1 << m;
    thread_local std::vector<double> excl; // (j-1)*M + x
    thread_local std::vector<double> pre, suf;
    excl.resize(static_cast<std::size_t>(m) * M);
    pre.resize(m + 2);
    suf.resize(m + 2);
    for (int x = 0; x < M; ++x) {
        pre[0] = 0.0;
        for (int j = 1; j <= m; ++j) {
            const double lw = (l.bit_of_point(x, j) == l.bit_of_point(ref_symbol, j))
                                  ? ext.log_ext0[j - 1]
                                  : ext.log_ext1[j - 1];
            pre[j] = pre[j - 1] + lw;
        }
        suf[m + 1] = 0.0;
        for (int j = m; j >= 1; --j) {
            const double lw = (l.bit_of_point(x, j) == l.bit_of_point(ref_symbol, j))
                                  ? ext.log_ext0[j - 1]
                                  : ext.log_ext1[j - 1];
            suf[j] = suf[j + 1] + lw;
        }
        for (int j = 1; j <= m; ++j)
            excl[static_cast<std::size_t>(j - 1) * M + x] = pre[j - 1] + suf[j + 1];
    }
    thread_local std::vector<double> terms;
    for (int j = 1; j <= m; ++j)
        for (int b = 0; b < 2; ++b) {
            const auto& sub = l.subset(j, b);
            terms.resize(sub.size());
            for (std::size_t k = 0; k < sub.size(); ++k)
                terms[k] = ld[sub[k]] + excl[static_cast<std::size_t>(j - 1) * M + sub[k]];
            out[(j - 1) * 2 + b] = log_sum_exp(terms);
        }
}

const ExtrinsicRealization& require_ext(const MetricContext& ctx, const char* what) {
    if (ctx.ext == nullptr)
        throw std::logic_error(std::string(what) + ": extrinsic realization not configured");
    return *ctx.ext;
}

} // namespace

const char* metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::matched: return "matched";
        case MetricKind::bicm_sum: return "sum";
        case MetricKind::bicm_maxlog: return "maxlog";
        case MetricKind::extrinsic_tx: return "ext-tx";
        case MetricKind::extrinsic_hyp: return "ext-hyp";
    }
    return "?";
}

MetricKind metric_kind_from_name(const std::string& name) {
    if (name == "matched") return MetricKind::matched;
    if (name == "sum" || name == "bicm_sum") return MetricKind::bicm_sum;
    if (name == "maxlog" || name == "bicm_maxlog" || name == "max-log") return MetricKind::bicm_maxlog;
    if (name == "ext-tx" || name == "extrinsic_tx") return MetricKind::extrinsic_tx;
    if (name == "ext-hyp" || name == "extrinsic_hyp") return MetricKind::extrinsic_hyp;
    throw std::invalid_argument("unknown metric kind: " + name);
}

const char* extrinsic_kind_name(ExtrinsicKind kind) {
    switch (kind) {
        case ExtrinsicKind::none: return "none";
        case ExtrinsicKind::perfect: return "perfect";
        case ExtrinsicKind::gaussian_llr: return "gaussian";
    }
    return "?";
}

ExtrinsicKind extrinsic_kind_from_name(const std::string& name) {
    if (name == "none") return ExtrinsicKind::none;
    if (name == "perfect") return ExtrinsicKind::perfect;
    if (name == "gaussian" || name == "gaussian_llr") return ExtrinsicKind::gaussian_llr;
    throw std::invalid_argument("unknown extrinsic model: " + name);
}

ExtrinsicRealization realize_extrinsic(const ExtrinsicModel& model, int m,
                                       std::span<const double> normals) {
    if (m < 1) throw std::invalid_argument("extrinsic: m must be >= 1");
    ExtrinsicRealization r;
    r.ext0.resize(m);
    r.log_ext0.resize(m);
    r.log_ext1.resize(m);
    switch (model.kind) {
        case ExtrinsicKind::none:
            for (int j = 0; j < m; ++j) {
                r.ext0[j] = 0.5;
                r.log_ext0[j] = log_half;
                r.log_ext1[j] = log_half;
            }
            break;
        case ExtrinsicKind::perfect:
            for (int j = 0; j < m; ++j) {
                r.ext0[j] = 1.0;
                r.log_ext0[j] = 0.0;
                r.log_ext1[j] = neg_inf;
            }
            break;
        case ExtrinsicKind::gaussian_llr: {
            if (model.sigma < 0.0) throw std::invalid_argument("extrinsic: sigma must be >= 0");
            if (static_cast<int>(normals.size()) < m)
                throw std::invalid_argument("extrinsic: need m normal draws per realization");
            const double s2 = model.sigma * model.sigma;
            for (int j = 0; j < m; ++j) {
                const double llr_draw = 0.5 * s2 + model.sigma * normals[j];
                // ext0 = sigmoid(llr); logs via log1p keep the tails exact.
                r.log_ext0[j] = -std::log1p(std::exp(-llr_draw));
                r.log_ext1[j] = -std::log1p(std::exp(llr_draw));
                r.ext0[j] = std::exp(r.log_ext0[j]);
            }
            break;
        }
    }
    return r;
}

ExtrinsicRealization draw_extrinsic(const ExtrinsicModel& model, int m, Rng& rng) {
    if (model.sigma < 0.0) throw std::invalid_argument("extrinsic: sigma must be >= 0");
    std::vector<double> normals(m);
    for (auto& u : normals) u = rng.normal();
    return realize_extrinsic(model, m, normals);
}

void SymbolMetric::log_bit_table(const ChannelModel&, const Observation&, const MetricContext&,
                                 std::span<double>) const {
    throw std::invalid_argument(std::string(metric_kind_name(kind_)) +
                                ": metric has no per-bit decomposition");
}

double SymbolMetric::log_metric(const ChannelModel& ch, int x_hyp, const Observation& obs,
                                const MetricContext& ctx) const {
    if (x_hyp < 0 || x_hyp >= c_->size())
        throw std::invalid_argument("log_metric: symbol index out of range");
    thread_local std::vector<double> row;
    row.resize(c_->size());
    log_metric_row(ch, obs, ctx, row);
    return row[x_hyp];
}

void MatchedMetric::log_metric_row(const ChannelModel& ch, const Observation& obs,
                                   const MetricContext&, std::span<double> out) const {
    const int M = c_->size();
    const cplx hy = obs.h * std::sqrt(ch.snr);
    constexpr double log_pi = 1.1447298858494001741;
    for (int x = 0; x < M; ++x) out[x] = -log_pi - std::norm(obs.y - hy * c_->points[x]);
}

void BicmSumMetric::log_bit_table(const ChannelModel& ch, const Observation& obs,
                                  const MetricContext&, std::span<double> out) const {
    thread_local std::vector<double> ld, terms;
    fill_log_densities(ch, *c_, obs, ld);
    const int m = l_->bits();
    for (int j = 1; j <= m; ++j)
        for (int b = 0; b < 2; ++b) {
            const auto& sub = l_->subset(j, b);
            terms.resize(sub.size());
            for (std::size_t k = 0; k < sub.size(); ++k) terms[k] = ld[sub[k]];
            out[(j - 1) * 2 + b] = log_sum_exp(terms);
        }
}

void BicmSumMetric::log_metric_row(const ChannelModel& ch, const Observation& obs,
                                   const MetricContext& ctx, std::span<double> out) const {
    const int m = l_->bits();
    thread_local std::vector<double> table;
    table.resize(2 * m);
    log_bit_table(ch, obs, ctx, table);
    for (int x = 0; x < c_->size(); ++x) {
        double acc = 0.0;
        for (int j = 1; j <= m; ++j) acc += table[(j - 1) * 2 + l_->bit_of_point(x, j)];
        out[x] = acc;
    }
}

void BicmMaxlogMetric::log_bit_table(const ChannelModel& ch, const Observation& obs,
                                     const MetricContext&, std::span<double> out) const {
    thread_local std::vector<double> ld;
    fill_log_densities(ch, *c_, obs, ld);
    const int m = l_->bits();
    for (int j = 1; j <= m; ++j)
        for (int b = 0; b < 2; ++b) {
            const auto& sub = l_->subset(j, b);
            double mx = neg_inf;
            for (const auto x : sub) mx = std::max(mx, ld[x]);
            out[(j - 1) * 2 + b] = mx;
        }
}

void BicmMaxlogMetric::log_metric_row(const ChannelModel& ch, const Observation& obs,
                                      const MetricContext& ctx, std::span<double> out) const {
    const int m = l_->bits();
    thread_local std::vector<double> table;
    table.resize(2 * m);
    log_bit_table(ch, obs, ctx, table);
    for (int x = 0; x < c_->size(); ++x) {
        double acc = 0.0;
        for (int j = 1; j <= m; ++j) acc += table[(j - 1) * 2 + l_->bit_of_point(x, j)];
        out[x] = acc;
    }
}

void ExtrinsicTxMetric::log_bit_table(const ChannelModel& ch, const Observation& obs,
                                      const MetricContext& ctx, std::span<double> out) const {
    const ExtrinsicRealization& ext = require_ext(ctx, "extrinsic_tx");
    if (ctx.tx_symbol < 0 || ctx.tx_symbol >= c_->size())
        throw std::logic_error("extrinsic_tx: transmitted symbol not configured");
    thread_local std::vector<double> ld;
    fill_log_densities(ch, *c_, obs, ld);
    fill_bit_table_referenced(ld, *l_, ext, ctx.tx_symbol, out);
}

void ExtrinsicTxMetric::log_metric_row(const ChannelModel& ch, const Observation& obs,
                                       const MetricContext& ctx, std::span<double> out) const {
    const int m = l_->bits();
    thread_local std::vector<double> table;
    table.resize(2 * m);
    log_bit_table(ch, obs, ctx, table);
    for (int x = 0; x < c_->size(); ++x) {
        double acc = 0.0;
        for (int j = 1; j <= m; ++j) acc += table[(j - 1) * 2 + l_->bit_of_point(x, j)];
        out[x] = acc;
    }
}

void ExtrinsicHypMetric::log_metric_row(const ChannelModel& ch, const Observation& obs,
                                        const MetricContext& ctx, std::span<double> out) const {
    const ExtrinsicRealization& ext = require_ext(ctx, "extrinsic_hyp");
    const int m = l_->bits();
    thread_local std::vector<double> ld, table;
    fill_log_densities(ch, *c_, obs, ld);
    table.resize(2 * m);
    for (int x_hyp = 0; x_hyp < c_->size(); ++x_hyp) {
        fill_bit_table_referenced(ld, *l_, ext, x_hyp, table);
        double acc = 0.0;
        for (int j = 1; j <= m; ++j) acc += table[(j - 1) * 2 + l_->bit_of_point(x_hyp, j)];
        out[x_hyp] = acc;
    }
}

std::unique_ptr<SymbolMetric> make_metric(MetricKind kind, const Constellation& c,
                                          const Labeling* l, ExtrinsicModel model) {
    if (kind != MetricKind::matched && l == nullptr)
        throw std::invalid_argument("metric: bit metrics require a labeling");
    if (l != nullptr && l->bits() != c.m)
        throw std::invalid_argument("metric: labeling does not match constellation");
    switch (kind) {
        case MetricKind::matched: return std::make_unique<MatchedMetric>(c);
        case MetricKind::bicm_sum: return std::make_unique<BicmSumMetric>(c, *l);
        case MetricKind::bicm_maxlog: return std::make_unique<BicmMaxlogMetric>(c, *l);
        case MetricKind::extrinsic_tx: return std::make_unique<ExtrinsicTxMetric>(c, *l, model);
        case MetricKind::extrinsic_hyp: return std::make_unique<ExtrinsicHypMetric>(c, *l, model);
    }
    throw std::invalid_argument("metric: unknown kind");
}

double log_bit_metric_sum(const ChannelModel& ch, const Constellation& c, const Labeling& l,
                          int j, int b, const Observation& obs) {
    const auto& sub = subset(c, l, j, b);
    thread_local std::vector<double> terms;
    terms.resize(sub.size());
    for (std::size_t k = 0; k < sub.size(); ++k)
        terms[k] = log_transition_density(ch, obs, c.points[sub[k]]);
    return log_sum_exp(terms);
}

double log_bit_metric_maxlog(const ChannelModel& ch, const Constellation& c, const Labeling& l,
                             int j, int b, const Observation& obs) {
    const auto& sub = subset(c, l, j, b);
    double mx = neg_inf;
    for (const auto x : sub) mx = std::max(mx, log_transition_density(ch, obs, c.points[x]));
    return mx;
}

double llr(const SymbolMetric& metric, const ChannelModel& ch, int j, const Observation& obs) {
    const Labeling* l = metric.labeling();
    if (l == nullptr || (metric.kind() != MetricKind::bicm_sum && metric.kind() != MetricKind::bicm_maxlog))
        throw std::invalid_argument("llr: defined for the sum and max-log bit metrics");
    if (metric.kind() == MetricKind::bicm_sum)
        return log_bit_metric_sum(ch, metric.constellation(), *l, j, 1, obs) -
               log_bit_metric_sum(ch, metric.constellation(), *l, j, 0, obs);
    return log_bit_metric_maxlog(ch, metric.constellation(), *l, j, 1, obs) -
           log_bit_metric_maxlog(ch, metric.constellation(), *l, j, 0, obs);
}

} // namespace bicm
