// Symbol decoding metric families, all in the log domain: the matched
// likelihood metric, the BICM sum and max-log bit metrics, and the two
// extrinsic-side-information variants (reference = transmitted symbol or
// reference = hypothesized symbol).
#pragma once

#include "channel.hpp"
#include "constellation.hpp"
#include "rng.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bicm {

enum class MetricKind { matched, bicm_sum, bicm_maxlog, extrinsic_tx, extrinsic_hyp };

const char* metric_kind_name(MetricKind kind);
MetricKind metric_kind_from_name(const std::string& name);

enum class ExtrinsicKind { none, perfect, gaussian_llr };

const char* extrinsic_kind_name(ExtrinsicKind kind);
ExtrinsicKind extrinsic_kind_from_name(const std::string& name);

// Per-bit prior model feeding the extrinsic metrics. The gaussian_llr kind
// draws a consistent Gaussian LLR (mean sigma^2/2 toward the reference bit,
// variance sigma^2) and squashes it through a sigmoid.
struct ExtrinsicModel {
    ExtrinsicKind kind = ExtrinsicKind::none;
    double sigma = 0.0;
};

// One draw of the m per-bit extrinsic values. ext0[j-1] is the probability
// that bit j agrees with the reference symbol's bit (the 0 argument of the
// xor in the metric); ext_j(1) = 1 - ext_j(0). Log values are kept alongside
// so degenerate draws (perfect side information) stay exact.
struct ExtrinsicRealization {
    std::vector<double> ext0;
    std::vector<double> log_ext0;
    std::vector<double> log_ext1;

    int bits() const { return static_cast<int>(ext0.size()); }
};

// Deterministic map from m standard normals to a realization.
ExtrinsicRealization realize_extrinsic(const ExtrinsicModel& model, int m,
                                       std::span<const double> normals);
ExtrinsicRealization draw_extrinsic(const ExtrinsicModel& model, int m, Rng& rng);

// Evaluation-time side data. tx_symbol is the transmitted point index (used
// by the extrinsic_tx reference convention); ext is the current realization.
struct MetricContext {
    std::int32_t tx_symbol = -1;
    const ExtrinsicRealization* ext = nullptr;
};

class SymbolMetric {
public:
    SymbolMetric(MetricKind kind, const Constellation& c, const Labeling* l)
        : kind_(kind), c_(&c), l_(l) {}
    virtual ~SymbolMetric() = default;

    MetricKind kind() const { return kind_; }
    const Constellation& constellation() const { return *c_; }
    const Labeling* labeling() const { return l_; }

    virtual bool uses_extrinsic() const { return false; }
    // True when the metric value of a hypothesis depends on the transmitted
    // symbol (extrinsic_tx); such metrics fall outside the data-processing
    // inequality.
    virtual bool transmit_dependent() const { return false; }
    // True when the symbol metric is a product of per-position bit metrics
    // that do not vary with the hypothesized symbol beyond its bits, i.e.
    // the per-bit rate decomposition applies.
    virtual bool bit_decomposable() const { return false; }

    // log q(x', y) for every hypothesized symbol x'. out.size() == M.
    virtual void log_metric_row(const ChannelModel& ch, const Observation& obs,
                                const MetricContext& ctx, std::span<double> out) const = 0;

    // log q_j(b, y) table, laid out (j-1)*2 + b, for bit-decomposable kinds.
    virtual void log_bit_table(const ChannelModel& ch, const Observation& obs,
                               const MetricContext& ctx, std::span<double> out) const;

    double log_metric(const ChannelModel& ch, int x_hyp, const Observation& obs,
                      const MetricContext& ctx = {}) const;

    virtual const ExtrinsicModel* extrinsic_model() const { return nullptr; }

protected:
    MetricKind kind_;
    const Constellation* c_;
    const Labeling* l_;
};

class MatchedMetric final : public SymbolMetric {
public:
    explicit MatchedMetric(const Constellation& c) : SymbolMetric(MetricKind::matched, c, nullptr) {}
    void log_metric_row(const ChannelModel& ch, const Observation& obs, const MetricContext&,
                        std::span<double> out) const override;
};

class BicmSumMetric final : public SymbolMetric {
public:
    BicmSumMetric(const Constellation& c, const Labeling& l)
        : SymbolMetric(MetricKind::bicm_sum, c, &l) {}
    bool bit_decomposable() const override { return true; }
    void log_metric_row(const ChannelModel& ch, const Observation& obs, const MetricContext&,
                        std::span<double> out) const override;
    void log_bit_table(const ChannelModel& ch, const Observation& obs, const MetricContext&,
                       std::span<double> out) const override;
};

class BicmMaxlogMetric final : public SymbolMetric {
public:
    BicmMaxlogMetric(const Constellation& c, const Labeling& l)
        : SymbolMetric(MetricKind::bicm_maxlog, c, &l) {}
    bool bit_decomposable() const override { return true; }
    void log_metric_row(const ChannelModel& ch, const Observation& obs, const MetricContext&,
                        std::span<double> out) const override;
    void log_bit_table(const ChannelModel& ch, const Observation& obs, const MetricContext&,
                       std::span<double> out) const override;
};

// Bit metric with extrinsic weights referenced to the transmitted symbol.
class ExtrinsicTxMetric final : public SymbolMetric {
public:
    ExtrinsicTxMetric(const Constellation& c, const Labeling& l, ExtrinsicModel model)
        : SymbolMetric(MetricKind::extrinsic_tx, c, &l), model_(model) {}
    bool uses_extrinsic() const override { return true; }
    bool transmit_dependent() const override { return true; }
    bool bit_decomposable() const override { return true; }
    const ExtrinsicModel* extrinsic_model() const override { return &model_; }
    void log_metric_row(const ChannelModel& ch, const Observation& obs, const MetricContext& ctx,
                        std::span<double> out) const override;
    void log_bit_table(const ChannelModel& ch, const Observation& obs, const MetricContext& ctx,
                       std::span<double> out) const override;

private:
    ExtrinsicModel model_;
};

// Bit metric with extrinsic weights referenced to the hypothesized symbol.
// Not bit-decomposable: the per-position factors change with the hypothesis.
class ExtrinsicHypMetric final : public SymbolMetric {
public:
    ExtrinsicHypMetric(const Constellation& c, const Labeling& l, ExtrinsicModel model)
        : SymbolMetric(MetricKind::extrinsic_hyp, c, &l), model_(model) {}
    bool uses_extrinsic() const override { return true; }
    const ExtrinsicModel* extrinsic_model() const override { return &model_; }
    void log_metric_row(const ChannelModel& ch, const Observation& obs, const MetricContext& ctx,
                        std::span<double> out) const override;

private:
    ExtrinsicModel model_;
};

std::unique_ptr<SymbolMetric> make_metric(MetricKind kind, const Constellation& c,
                                          const Labeling* l,
                                          ExtrinsicModel model = ExtrinsicModel{});

// --- Bit-level operations -------------------------------------------------

// log sum_{x in X_b^j} p(y|x)
double log_bit_metric_sum(const ChannelModel& ch, const Constellation& c, const Labeling& l,
                          int j, int b, const Observation& obs);

// log max_{x in X_b^j} p(y|x)
double log_bit_metric_maxlog(const ChannelModel& ch, const Constellation& c, const Labeling& l,
                             int j, int b, const Observation& obs);

// Bit log-metric ratio log q_j(1,y)/q_j(0,y) for the sum or max-log family.
double llr(const SymbolMetric& metric, const ChannelModel& ch, int j, const Observation& obs);

} // namespace bicm
