// Gallager functions for the four model families, random-coding exponents
// and cutoff-rate variants. Exponents are in nats; rates cross the interface
// in bits per channel use.
#pragma once

#include "measures.hpp"
#include "metric_rows.hpp"

#include <memory>
#include <optional>

namespace bicm {

// -log E[( 2^-m sum_x' (p(Y|x')/p(Y|X))^(1/(1+rho)) )^rho], uniform inputs.
Estimate e0_cm(const ChannelModel& ch, const Constellation& c, const Engine& engine, double rho);

// Generalized Gallager function -log E[( sum_x' p(x') q(x',Y)^s/q(X,Y)^s )^rho]
// for any symbol metric; extrinsic metrics draw a fresh realization per
// Monte Carlo sample.
Estimate e0_q(const SymbolMetric& metric, const ChannelModel& ch, const Engine& engine,
              double rho, double s);

// Parallel-channel (independent subchannel) Gallager function, bit metric
// matched to p_j(y|b), s = 1/(1+rho); each subchannel sees a statistically
// independent output draw.
Estimate e0_ind(const ChannelModel& ch, const Constellation& c, const Labeling& l,
                const Engine& engine, double rho);

enum class SMode { optimize, fixed, coupled }; // coupled: s = 1/(1+rho)

struct GallagerFamily {
    enum class Kind { cm, q, ind };
    Kind kind = Kind::cm;
    const SymbolMetric* metric = nullptr; // q kind only
    SMode s_mode = SMode::optimize;
    double s_fixed = 1.0;
};

struct ExponentPoint {
    double rate_bits = 0.0;
    double er_nats = 0.0;
    double rho_opt = 0.0;
    double s_opt = 0.0;
    double std_error = 0.0; // SE of E0 at the optimum, nats
    bool converged = true;
};

// Caches the per-sample tables of one family so a rate sweep reuses common
// random numbers across every (rho, s, R) evaluation.
class ExponentSolver {
public:
    ExponentSolver(const GallagerFamily& family, const ChannelModel& ch, const Constellation& c,
                   const Labeling* l, const Engine& engine);

    // max_s E0(rho, s) per the family's s-mode.
    Estimate e0(double rho, double* s_used = nullptr) const;

    // E_r(R) = max_{0<=rho<=1} E0*(rho) - rho R.
    ExponentPoint at(double rate_bits) const;

private:
    GallagerFamily family_;
    std::optional<MetricRows> rows_;          // cm / q families
    std::unique_ptr<SymbolMetric> owned_metric_; // matched metric for cm
    // ind family: per subchannel, log q_j(b,y)-log q_j(b_tx,y) for b=0,1.
    struct IndTables {
        int m = 0;
        long n = 0;
        bool monte_carlo = true;
        std::vector<double> ratio; // m x n x 2
        std::vector<double> log_weight; // GH: n per subchannel (shared)
    };
    std::optional<IndTables> ind_;

    Estimate e0_ind_from_tables(double rho) const;
};

ExponentPoint random_coding_exponent(const GallagerFamily& family, const ChannelModel& ch,
                                     const Constellation& c, const Labeling* l,
                                     const Engine& engine, double rate_bits);

struct CutoffRates {
    Estimate r0_cm;   // nats
    Estimate r0_q;    // nats, max_s E0^q(1,s)
    double r0_q_s_opt = 1.0;
    Estimate r0_ind;  // nats
    Estimate r0_av;   // nats, averaged-channel closed form
};

CutoffRates cutoff_rates(const ChannelModel& ch, const Constellation& c, const Labeling& l,
                         const SymbolMetric& metric_for_q, const Engine& engine);

// Optimizer brackets pinned for the whole artifact.
inline constexpr double rho_search_tol = 1e-4;

} // namespace bicm
