// Mutual-information-type quantities: CM capacity, BICM capacity, the
// generalized mutual information GMI(s) and its s-optimized value, per-bit
// decompositions, and the extrinsic pseudo-GMI. Values are reported in bits
// per channel use; all internal accumulation is in nats.
#pragma once

#include "metrics.hpp"
#include "numerics.hpp"

#include <optional>
#include <vector>

namespace bicm {

struct MeasureResult {
    double value = 0.0;     // bits per channel use
    double std_error = 0.0; // bits
    std::optional<double> s_opt;
    std::optional<std::vector<double>> per_bit; // bits, one entry per label position
    bool pseudo = false;    // not an achievable rate (extrinsic-tx expectation)
    bool converged = true;
};

// E[log p(Y|X) / sum_x' p(x') p(Y|x')] with uniform inputs.
MeasureResult cm_capacity(const ChannelModel& ch, const Constellation& c, const Engine& engine);

// sum_j I(B_j; Y) with the sum bit metric; per_bit holds the m summands.
MeasureResult bicm_capacity(const ChannelModel& ch, const Constellation& c, const Labeling& l,
                            const Engine& engine);

// E[log q(X,Y)^s / sum_x' p(x') q(x',Y)^s] for a fixed s > 0.
MeasureResult gmi_at_s(const SymbolMetric& metric, const ChannelModel& ch, const Engine& engine,
                       double s);

// sup_{s>0} gmi_at_s, scalar search on log s over [1e-3, 1e3].
MeasureResult gmi(const SymbolMetric& metric, const ChannelModel& ch, const Engine& engine);

// Per-position rate decomposition at the given s; valid for product bit
// metrics whose factors do not vary with the hypothesized symbol.
MeasureResult gmi_per_bit(const SymbolMetric& metric, const ChannelModel& ch,
                          const Engine& engine, double s);

// Per-bit sum at s=1 under the transmitted-symbol-referenced extrinsic
// metric; flagged pseudo (no operational meaning as an achievable rate).
MeasureResult pseudo_gmi_extrinsic_tx(const SymbolMetric& metric, const ChannelModel& ch,
                                      const Engine& engine);

// Search domain and tolerance for every s-optimization in the artifact.
inline constexpr double s_search_min = 1e-3;
inline constexpr double s_search_max = 1e3;
inline constexpr double s_search_log_tol = 1e-3;

} // namespace bicm
