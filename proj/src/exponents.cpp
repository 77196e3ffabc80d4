#include "exponents.hpp"

#include <cmath>

namespace bicm {

namespace {

constexpr double ln2 = 0.69314718055994530942;
constexpr double log_half = -0.69314718055994530942;

void check_rho(double rho) {
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::invalid_argument("gallager: rho must lie in [0,1]");
}

void check_s(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("gallager: s must be positive");
}

// E0(rho, s) over prebuilt metric rows. The inner expression for sample i is
//   inner_i = log sum_x' p(x') (q(x',y)/q(x,y))^s
// and E0 = -log E[exp(rho * inner)].
Estimate e0_from_rows(const MetricRows& rows, double rho, double s) {
    check_rho(rho);
    check_s(s);
    if (rho == 0.0) return Estimate{0.0, 0.0, rows.n}; // E[(.)^0] = 1
    std::vector<double> values(rows.n);
    for (long i = 0; i < rows.n; ++i) values[i] = rho * rows.log_inner(i, s);
    if (rows.monte_carlo) {
        Estimate est = mc_log_mean_exp(values);
        est.mean = -est.mean;
        return est;
    }
    for (long i = 0; i < rows.n; ++i) values[i] += rows.log_weight[i];
    Estimate est;
    est.mean = -log_sum_exp(values);
    est.n_effective = rows.n;
    return est;
}

} // namespace

ExponentSolver::ExponentSolver(const GallagerFamily& family, const ChannelModel& ch,
                               const Constellation& c, const Labeling* l, const Engine& engine)
    : family_(family) {
    switch (family_.kind) {
        case GallagerFamily::Kind::cm:
            owned_metric_ = std::make_unique<MatchedMetric>(c);
            rows_ = build_metric_rows(*owned_metric_, ch, engine);
            break;
        case GallagerFamily::Kind::q:
            if (family_.metric == nullptr)
                throw std::invalid_argument("gallager: q family needs a metric");
            rows_ = build_metric_rows(*family_.metric, ch, engine);
            break;
        case GallagerFamily::Kind::ind: {
            if (l == nullptr) throw std::invalid_argument("gallager: ind family needs a labeling");
            IndTables tables;
            tables.m = c.m;
            const BicmSumMetric sum_metric(c, *l);
            std::vector<double> bit_table(2 * static_cast<std::size_t>(c.m));
            if (engine.is_monte_carlo()) {
                // m independent channel uses per Monte Carlo trial: subchannel
                // j reads block j of an m*n frozen set (block 0 coincides with
                // the main sample set of the same engine).
                const long n = engine.config().samples;
                const FrozenSamples& fs = engine.frozen(ch, c, n * c.m);
                tables.n = n;
                tables.monte_carlo = true;
                tables.ratio.resize(static_cast<std::size_t>(c.m) * n * 2);
                for (int j = 1; j <= c.m; ++j)
                    for (long i = 0; i < n; ++i) {
                        const long idx = (j - 1) * n + i;
                        sum_metric.log_bit_table(ch, Observation{fs.y[idx], fs.h[idx]}, {}, bit_table);
                        const int txb = l->bit_of_point(fs.symbol[idx], j);
                        const double ref = bit_table[(j - 1) * 2 + txb];
                        double* out = &tables.ratio[(static_cast<std::size_t>(j - 1) * n + i) * 2];
                        out[0] = bit_table[(j - 1) * 2] - ref;
                        out[1] = bit_table[(j - 1) * 2 + 1] - ref;
                    }
            } else {
                // Quadrature: the per-subchannel integrals factorize, so each
                // subchannel reuses the same (symbol, node) grid.
                const GhGrid& grid = engine.gh_grid(ch, c);
                tables.n = grid.count;
                tables.monte_carlo = false;
                tables.log_weight = grid.log_weight;
                tables.ratio.resize(static_cast<std::size_t>(c.m) * grid.count * 2);
                for (long i = 0; i < grid.count; ++i) {
                    sum_metric.log_bit_table(ch, Observation{grid.y[i], cplx{1.0, 0.0}}, {}, bit_table);
                    for (int j = 1; j <= c.m; ++j) {
                        const int txb = l->bit_of_point(grid.symbol[i], j);
                        const double ref = bit_table[(j - 1) * 2 + txb];
                        double* out =
                            &tables.ratio[(static_cast<std::size_t>(j - 1) * grid.count + i) * 2];
                        out[0] = bit_table[(j - 1) * 2] - ref;
                        out[1] = bit_table[(j - 1) * 2 + 1] - ref;
                    }
                }
            }
            ind_ = std::move(tables);
            break;
        }
    }
}

Estimate ExponentSolver::e0_ind_from_tables(double rho) const {
    check_rho(rho);
    const IndTables& t = *ind_;
    if (rho == 0.0) return Estimate{0.0, 0.0, t.n};
    const double s = 1.0 / (1.0 + rho);
    std::vector<double> values(t.n);
    double total = 0.0;
    double var_acc = 0.0;
    for (int j = 0; j < t.m; ++j) {
        const double* block = &t.ratio[static_cast<std::size_t>(j) * t.n * 2];
        for (long i = 0; i < t.n; ++i) {
            const double inner =
                log_sum_exp2(log_half + s * block[2 * i], log_half + s * block[2 * i + 1]);
            values[i] = rho * inner;
        }
        if (t.monte_carlo) {
            const Estimate term = mc_log_mean_exp(values);
            total -= term.mean;
            var_acc += term.std_error * term.std_error;
        } else {
            for (long i = 0; i < t.n; ++i) values[i] += t.log_weight[i];
            total -= log_sum_exp(values);
        }
    }
    Estimate est;
    est.mean = total;
    est.std_error = std::sqrt(var_acc);
    est.n_effective = t.n;
    return est;
}

Estimate ExponentSolver::e0(double rho, double* s_used) const {
    check_rho(rho);
    switch (family_.kind) {
        case GallagerFamily::Kind::cm: {
            const double s = 1.0 / (1.0 + rho);
            if (s_used) *s_used = s;
            return e0_from_rows(*rows_, rho, s);
        }
        case GallagerFamily::Kind::q: {
            double s = family_.s_fixed;
            if (family_.s_mode == SMode::coupled) s = 1.0 / (1.0 + rho);
            if (family_.s_mode == SMode::optimize) {
                if (rho == 0.0) {
                    if (s_used) *s_used = 1.0;
                    return Estimate{0.0, 0.0, rows_->n};
                }
                const auto objective = [this, rho](double log_s) {
                    return e0_from_rows(*rows_, rho, std::exp(log_s)).mean;
                };
                const ScalarMaxResult opt = golden_section_max(
                    objective, std::log(s_search_min), std::log(s_search_max), s_search_log_tol);
                s = std::exp(opt.x);
            }
            if (s_used) *s_used = s;
            return e0_from_rows(*rows_, rho, s);
        }
        case GallagerFamily::Kind::ind: {
            if (s_used) *s_used = 1.0 / (1.0 + rho);
            return e0_ind_from_tables(rho);
        }
    }
    throw std::logic_error("gallager: unknown family");
}

ExponentPoint ExponentSolver::at(double rate_bits) const {
    if (rate_bits < 0.0) throw std::invalid_argument("exponent: rate must be nonnegative");
    const double rate_nats = rate_bits * ln2;
    const auto gain = [this, rate_nats](double rho) { return e0(rho).mean - rho * rate_nats; };
    const ScalarMaxResult opt = golden_section_max(gain, 0.0, 1.0, rho_search_tol);

    // Candidates: interior golden-section point, the rho=1 boundary, and the
    // structural zero at rho=0.
    double best_rho = 0.0;
    double best_gain = 0.0; // E0(0) - 0 = 0
    if (opt.value > best_gain) {
        best_rho = opt.x;
        best_gain = opt.value;
    }
    const double g1 = gain(1.0);
    if (g1 > best_gain) {
        best_rho = 1.0;
        best_gain = g1;
    }

    ExponentPoint point;
    point.rate_bits = rate_bits;
    point.rho_opt = best_rho;
    const Estimate est = e0(best_rho, &point.s_opt);
    point.er_nats = est.mean - best_rho * rate_nats;
    point.std_error = est.std_error;
    point.converged = opt.converged;
    return point;
}

Estimate e0_cm(const ChannelModel& ch, const Constellation& c, const Engine& engine, double rho) {
    check_rho(rho);
    const ExponentSolver solver(GallagerFamily{GallagerFamily::Kind::cm}, ch, c, nullptr, engine);
    return solver.e0(rho);
}

Estimate e0_q(const SymbolMetric& metric, const ChannelModel& ch, const Engine& engine,
              double rho, double s) {
    check_rho(rho);
    check_s(s);
    const MetricRows rows = build_metric_rows(metric, ch, engine);
    return e0_from_rows(rows, rho, s);
}

Estimate e0_ind(const ChannelModel& ch, const Constellation& c, const Labeling& l,
                const Engine& engine, double rho) {
    check_rho(rho);
    const ExponentSolver solver(GallagerFamily{GallagerFamily::Kind::ind}, ch, c, &l, engine);
    return solver.e0(rho);
}

ExponentPoint random_coding_exponent(const GallagerFamily& family, const ChannelModel& ch,
                                     const Constellation& c, const Labeling* l,
                                     const Engine& engine, double rate_bits) {
    const ExponentSolver solver(family, ch, c, l, engine);
    return solver.at(rate_bits);
}

CutoffRates cutoff_rates(const ChannelModel& ch, const Constellation& c, const Labeling& l,
                         const SymbolMetric& metric_for_q, const Engine& engine) {
    CutoffRates out;
    out.r0_cm = e0_cm(ch, c, engine, 1.0);

    GallagerFamily q_family{GallagerFamily::Kind::q, &metric_for_q, SMode::optimize, 1.0};
    const ExponentSolver q_solver(q_family, ch, c, &l, engine);
    out.r0_q = q_solver.e0(1.0, &out.r0_q_s_opt);

    out.r0_ind = e0_ind(ch, c, l, engine, 1.0);

    // Averaged-channel form: m [log 2 - log(1 + mean_j E[sqrt(q_j(bbar,Y)/q_j(B,Y))])].
    const BicmSumMetric sum_metric(c, l);
    const BitRows rows = build_bit_rows(sum_metric, ch, engine);
    std::vector<double> values(rows.n);
    for (long i = 0; i < rows.n; ++i) {
        const auto t = rows.bits(i);
        double acc = 0.0;
        for (int j = 1; j <= c.m; ++j) {
            const int b = l.bit_of_point(rows.tx[i], j);
            acc += std::exp(0.5 * (t[(j - 1) * 2 + (1 - b)] - t[(j - 1) * 2 + b]));
        }
        values[i] = acc / c.m;
    }
    Estimate bhat;
    if (rows.monte_carlo) {
        bhat = mc_mean(values);
    } else {
        std::vector<double> weighted(rows.n);
        for (long i = 0; i < rows.n; ++i) weighted[i] = std::exp(rows.log_weight[i]) * values[i];
        bhat.mean = pairwise_sum(weighted);
        bhat.n_effective = rows.n;
    }
    out.r0_av.mean = c.m * (ln2 - std::log1p(bhat.mean));
    out.r0_av.std_error = c.m * bhat.std_error / (1.0 + bhat.mean);
    out.r0_av.n_effective = bhat.n_effective;
    return out;
}

} // namespace bicm
