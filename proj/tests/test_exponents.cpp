#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "exponents.hpp"

#include <cmath>

using namespace bicm;

namespace {

constexpr double ln2 = 0.69314718055994530942;

double combined_se(const Estimate& a, const Estimate& b) {
    return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

// Brute-force trapezoid oracle for the BPSK Gallager function: only the real
// axis carries information, the imaginary noise axis integrates out.
double bpsk_e0_oracle(double snr, double rho) {
    const double a = std::sqrt(snr);
    const double lo = -a - 12.0, hi = a + 12.0;
    const int n = 48000;
    const double step = (hi - lo) / n;
    const double inv_sqrt_pi = 1.0 / std::sqrt(3.14159265358979323846);
    double integral = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = lo + (i + 0.5) * step;
        const double fp = inv_sqrt_pi * std::exp(-(u - a) * (u - a));
        const double fm = inv_sqrt_pi * std::exp(-(u + a) * (u + a));
        const double inner =
            0.5 * std::pow(fp, 1.0 / (1.0 + rho)) + 0.5 * std::pow(fm, 1.0 / (1.0 + rho));
        integral += std::pow(inner, 1.0 + rho) * step;
    }
    return -std::log(integral);
}

// c * p(y|x)^t: proportional to a power of the channel transition
// probability, the Hoelder equality family.
struct PowerMetric final : SymbolMetric {
    double t;
    explicit PowerMetric(const Constellation& c, double power)
        : SymbolMetric(MetricKind::matched, c, nullptr), t(power) {}
    void log_metric_row(const ChannelModel& ch, const Observation& obs, const MetricContext&,
                        std::span<double> out) const override {
        for (int x = 0; x < c_->size(); ++x)
            out[x] = t * log_transition_density(ch, obs, c_->points[x]) + 0.7;
    }
};

} // namespace

TEST_CASE("e0 vanishes structurally at rho = 0") {
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 10000, 32, 1});
    CHECK(e0_cm(ch, c, engine, 0.0).mean == 0.0);
    const BicmSumMetric sum_metric(c, l);
    CHECK(e0_q(sum_metric, ch, engine, 0.0, 0.5).mean == 0.0);
    CHECK(e0_ind(ch, c, l, engine, 0.0).mean == 0.0);
    const ExtrinsicHypMetric hyp(c, l, {ExtrinsicKind::gaussian_llr, 1.0});
    CHECK(e0_q(hyp, ch, engine, 0.0, 1.0).mean == 0.0);

    CHECK_THROWS_AS(e0_cm(ch, c, engine, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(e0_cm(ch, c, engine, 1.1), std::invalid_argument);
    CHECK_THROWS_AS(e0_q(sum_metric, ch, engine, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("bpsk e0_cm against the trapezoid oracle") {
    const double snr = snr_db_to_linear(3.0);
    const ChannelModel ch(ChannelKind::awgn, snr);
    const Constellation c = build_psk(2);
    Engine engine(EngineConfig{Backend::monte_carlo, 200000, 32, 2});
    for (double rho : {0.25, 0.5, 1.0}) {
        const Estimate est = e0_cm(ch, c, engine, rho);
        const double oracle = bpsk_e0_oracle(snr, rho);
        CHECK(std::abs(est.mean - oracle) <= 3.0 * est.std_error);
    }
    // Quadrature backend nails the oracle directly.
    Engine gh(EngineConfig{Backend::gauss_hermite, 200000, 48, 2});
    for (double rho : {0.25, 1.0})
        CHECK(e0_cm(ch, c, gh, rho).mean == doctest::Approx(bpsk_e0_oracle(snr, rho)).epsilon(1e-6));
}

TEST_CASE("slope at rho=0 recovers the capacity") {
    const Constellation c = build_qam(16);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 100000, 32, 3});
    const double h = 1e-3;
    const double slope = e0_cm(ch, c, engine, h).mean / h;
    const double cap_nats = cm_capacity(ch, c, engine).value * ln2;
    CHECK(slope == doctest::Approx(cap_nats).epsilon(0.05));
}

TEST_CASE("matched metric with s = 1/(1+rho) reduces to the cm exponent") {
    const Constellation c = build_qam(16);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 50000, 32, 4});
    const MatchedMetric matched(c);
    for (double rho : {0.1, 0.5, 1.0}) {
        const Estimate a = e0_cm(ch, c, engine, rho);
        const Estimate b = e0_q(matched, ch, engine, rho, 1.0 / (1.0 + rho));
        CHECK(a.mean == b.mean); // same samples, same arithmetic
    }
}

TEST_CASE("generalized exponent never beats the matched one") {
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 50000, 32, 5});
    const BicmSumMetric sum_metric(c, l);
    for (double rho : {0.2, 0.6, 1.0})
        for (double s : {0.25, 0.5, 1.0, 2.0}) {
            const Estimate a = e0_cm(ch, c, engine, rho);
            const Estimate b = e0_q(sum_metric, ch, engine, rho, s);
            CHECK(b.mean <= a.mean + 3.0 * combined_se(a, b));
        }
}

TEST_CASE("bpsk: parallel-channel exponent equals the cm exponent") {
    const Constellation c = build_psk(2);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::awgn, snr_db_to_linear(2.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 50000, 32, 6});
    for (double rho : {0.3, 1.0}) {
        const Estimate a = e0_cm(ch, c, engine, rho);
        const Estimate b = e0_ind(ch, c, l, engine, rho);
        CHECK(b.mean == doctest::Approx(a.mean).epsilon(1e-10));
    }
}

TEST_CASE("parallel-channel model beats cm for 16-qam rayleigh at 5 dB") {
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 200000, 32, 7});
    const Estimate ind = e0_ind(ch, c, l, engine, 1.0);
    const Estimate cm = e0_cm(ch, c, engine, 1.0);
    CHECK(ind.mean - cm.mean > 3.0 * combined_se(ind, cm));
}

TEST_CASE("e0 is nondecreasing in rho for every family") {
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 50000, 32, 8});
    const BicmSumMetric sum_metric(c, l);
    const BicmMaxlogMetric ml(c, l);

    const GallagerFamily cm_family{GallagerFamily::Kind::cm};
    const GallagerFamily sum_family{GallagerFamily::Kind::q, &sum_metric, SMode::optimize, 1.0};
    const GallagerFamily ml_family{GallagerFamily::Kind::q, &ml, SMode::coupled, 1.0};
    const GallagerFamily ind_family{GallagerFamily::Kind::ind};
    for (const GallagerFamily& family : {cm_family, sum_family, ml_family, ind_family}) {
        const ExponentSolver solver(family, ch, c, &l, engine);
        double prev = 0.0, prev_se = 0.0;
        for (double rho : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const Estimate est = solver.e0(rho);
            CHECK(est.mean >= prev - 3.0 * (est.std_error + prev_se));
            prev = est.mean;
            prev_se = est.std_error;
        }
    }
}

TEST_CASE("slope identity for sum and max-log metrics") {
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 50000, 32, 9});
    const BicmSumMetric sum_metric(c, l);
    const BicmMaxlogMetric ml(c, l);
    const double h = 1e-3;
    for (const SymbolMetric* metric : {static_cast<const SymbolMetric*>(&sum_metric),
                                       static_cast<const SymbolMetric*>(&ml)})
        for (double s : {0.75, 1.0}) {
            const double slope = e0_q(*metric, ch, engine, h, s).mean / h;
            const double rate_nats = gmi_at_s(*metric, ch, engine, s).value * ln2;
            CHECK(slope == doctest::Approx(rate_nats).epsilon(0.05));
        }
}

TEST_CASE("hoelder equality: power metrics achieve the cm exponent") {
    const Constellation c = build_qam(16);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 50000, 32, 10});
    const PowerMetric power(c, 3.0);
    for (double rho : {0.5, 1.0}) {
        const Estimate cm = e0_cm(ch, c, engine, rho);
        // At s = 1/(t(1+rho)) the scaled metric reproduces the matched ratio.
        const Estimate coupled = e0_q(power, ch, engine, rho, 1.0 / (3.0 * (1.0 + rho)));
        CHECK(coupled.mean == doctest::Approx(cm.mean).epsilon(1e-9));
        // The s-optimized family recovers it; sampling noise allows the
        // paired estimate to stray by a statistical margin only.
        const GallagerFamily family{GallagerFamily::Kind::q, &power, SMode::optimize, 1.0};
        const ExponentSolver solver(family, ch, c, nullptr, engine);
        double s_used = 0.0;
        const Estimate best = solver.e0(rho, &s_used);
        CHECK(best.mean >= coupled.mean - 1e-6);
        CHECK(best.mean <= cm.mean + 3.0 * combined_se(best, cm));
        CHECK(s_used == doctest::Approx(1.0 / (3.0 * (1.0 + rho))).epsilon(0.05));
    }
}

TEST_CASE("random coding exponent at rate 0 is the cutoff rate") {
    const Constellation c = build_psk(8);
    const ChannelModel ch(ChannelKind::awgn, snr_db_to_linear(5.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 50000, 32, 11});
    const GallagerFamily family{GallagerFamily::Kind::cm};
    const ExponentPoint p = random_coding_exponent(family, ch, c, nullptr, engine, 0.0);
    CHECK(p.rho_opt == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(p.er_nats == doctest::Approx(e0_cm(ch, c, engine, 1.0).mean).epsilon(1e-6));
}

TEST_CASE("exponent curve is nonincreasing and crosses zero at the gmi") {
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 60000, 32, 12});
    const BicmSumMetric sum_metric(c, l);
    const GallagerFamily family{GallagerFamily::Kind::q, &sum_metric, SMode::optimize, 1.0};
    const ExponentSolver solver(family, ch, c, &l, engine);

    double prev = 1e9;
    for (double rate = 0.25; rate <= 3.0; rate += 0.25) {
        const ExponentPoint p = solver.at(rate);
        CHECK(p.er_nats <= prev + 1e-9);
        CHECK(p.er_nats >= 0.0);
        prev = p.er_nats;
    }

    // Zero crossing: on shared samples the curve's zero matches the gmi
    // estimate computed from the same frozen set.
    const double gmi_bits = gmi(sum_metric, ch, engine).value;
    CHECK(solver.at(gmi_bits + 0.05).er_nats <= 1e-4);
    CHECK(solver.at(gmi_bits - 0.10).er_nats > 1e-4);
    // Beyond-capacity rates report a zero exponent with rho at the origin.
    const ExponentPoint beyond = solver.at(6.0);
    CHECK(beyond.er_nats <= 1e-6);
    CHECK(beyond.rho_opt <= 0.05);
}

TEST_CASE("mismatched sum family sits below cm across the rate grid") {
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(15.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 50000, 32, 13});
    const BicmSumMetric sum_metric(c, l);
    const ExponentSolver cm_solver({GallagerFamily::Kind::cm}, ch, c, &l, engine);
    const ExponentSolver q_solver({GallagerFamily::Kind::q, &sum_metric, SMode::optimize, 1.0},
                                  ch, c, &l, engine);
    for (double rate = 0.5; rate <= 3.5; rate += 0.5) {
        const ExponentPoint a = cm_solver.at(rate);
        const ExponentPoint b = q_solver.at(rate);
        CHECK(b.er_nats <= a.er_nats + 3.0 * (a.std_error + b.std_error));
    }
}

TEST_CASE("extrinsic metric with no side information equals the sum family") {
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 20000, 32, 14});
    const BicmSumMetric sum_metric(c, l);
    const ExtrinsicTxMetric tx_none(c, l, {ExtrinsicKind::none, 0.0});
    const ExtrinsicHypMetric hyp_none(c, l, {ExtrinsicKind::none, 0.0});
    for (double rho : {0.25, 1.0}) {
        const double s = 0.8;
        const Estimate ref = e0_q(sum_metric, ch, engine, rho, s);
        CHECK(e0_q(tx_none, ch, engine, rho, s).mean == doctest::Approx(ref.mean).epsilon(1e-10));
        CHECK(e0_q(hyp_none, ch, engine, rho, s).mean == doctest::Approx(ref.mean).epsilon(1e-10));
    }
}

TEST_CASE("perfect hypothesized-reference side information restores the cm exponent") {
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 50000, 32, 15});
    const ExtrinsicHypMetric hyp(c, l, {ExtrinsicKind::perfect, 0.0});
    const GallagerFamily family{GallagerFamily::Kind::q, &hyp, SMode::optimize, 1.0};
    const ExponentSolver solver(family, ch, c, &l, engine);
    for (double rho : {0.25, 0.5, 1.0}) {
        const Estimate cm = e0_cm(ch, c, engine, rho);
        double s_used = 0.0;
        const Estimate best = solver.e0(rho, &s_used);
        CHECK(std::abs(best.mean - cm.mean) <= 3.0 * combined_se(best, cm) + 1e-9);
        // Interior optimum at s = 1/(m(1+rho)), where q^s = p^(1/(1+rho)).
        CHECK(s_used == doctest::Approx(1.0 / (c.m * (1.0 + rho))).epsilon(0.08));
    }
}

TEST_CASE("hypothesized-reference extrinsic exponents respect data processing") {
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 20000, 32, 16});
    for (double sigma : {0.5, 2.0}) {
        const ExtrinsicHypMetric hyp(c, l, {ExtrinsicKind::gaussian_llr, sigma});
        const GallagerFamily family{GallagerFamily::Kind::q, &hyp, SMode::optimize, 1.0};
        const ExponentSolver solver(family, ch, c, &l, engine);
        for (double rho : {0.5, 1.0}) {
            const Estimate cm = e0_cm(ch, c, engine, rho);
            const Estimate best = solver.e0(rho);
            CHECK(best.mean <= cm.mean + 3.0 * combined_se(best, cm));
        }
    }
}

TEST_CASE("cutoff rates: orderings and the bpsk collapse") {
    Engine engine(EngineConfig{Backend::monte_carlo, 100000, 32, 17});
    const struct {
        Constellation c;
        ChannelKind kind;
        double snr_db;
    } configs[] = {
        {build_qam(16), ChannelKind::rayleigh, 5.0},
        {build_psk(8), ChannelKind::awgn, 5.0},
    };
    for (const auto& cfg : configs) {
        const ChannelModel ch(cfg.kind, snr_db_to_linear(cfg.snr_db));
        const Labeling l = brgc(cfg.c);
        const BicmSumMetric sum_metric(cfg.c, l);
        const CutoffRates r = cutoff_rates(ch, cfg.c, l, sum_metric, engine);
        CHECK(r.r0_av.mean <= r.r0_ind.mean + 3.0 * combined_se(r.r0_av, r.r0_ind));
        CHECK(r.r0_q.mean <= r.r0_cm.mean + 3.0 * combined_se(r.r0_q, r.r0_cm));
    }

    const Constellation bpsk = build_psk(2);
    const ChannelModel ch(ChannelKind::awgn, snr_db_to_linear(2.0));
    const Labeling l = brgc(bpsk);
    const BicmSumMetric sum_metric(bpsk, l);
    const CutoffRates r = cutoff_rates(ch, bpsk, l, sum_metric, engine);
    const double tol = 3.0 * (r.r0_cm.std_error + r.r0_q.std_error + r.r0_ind.std_error +
                              r.r0_av.std_error) + 1e-9;
    CHECK(std::abs(r.r0_q.mean - r.r0_cm.mean) <= tol);
    CHECK(std::abs(r.r0_ind.mean - r.r0_cm.mean) <= tol);
    CHECK(std::abs(r.r0_av.mean - r.r0_cm.mean) <= tol);
}

TEST_CASE("degenerate low snr yields zero-exponent rows, not failures") {
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, 1e-4);
    Engine engine(EngineConfig{Backend::monte_carlo, 10000, 32, 18});
    const BicmSumMetric sum_metric(c, l);
    const GallagerFamily family{GallagerFamily::Kind::q, &sum_metric, SMode::optimize, 1.0};
    const ExponentPoint p = random_coding_exponent(family, ch, c, &l, engine, 0.5);
    CHECK(p.er_nats <= 1e-6);
    CHECK(p.rho_opt <= 0.05);
}

TEST_CASE("gauss-hermite cross-validates the monte carlo exponents") {
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::awgn, snr_db_to_linear(5.0));
    Engine mc(EngineConfig{Backend::monte_carlo, 100000, 32, 23});
    Engine gh(EngineConfig{Backend::gauss_hermite, 100000, 32, 23});
    const BicmSumMetric sum_metric(c, l);
    for (double rho : {0.5, 1.0}) {
        const Estimate am = e0_cm(ch, c, mc, rho);
        CHECK(std::abs(am.mean - e0_cm(ch, c, gh, rho).mean) <= 3.0 * am.std_error);
        const Estimate qm = e0_q(sum_metric, ch, mc, rho, 0.6);
        CHECK(std::abs(qm.mean - e0_q(sum_metric, ch, gh, rho, 0.6).mean) <= 3.0 * qm.std_error);
        const Estimate im = e0_ind(ch, c, l, mc, rho);
        CHECK(std::abs(im.mean - e0_ind(ch, c, l, gh, rho).mean) <= 3.0 * im.std_error);
    }
    const CutoffRates rm = cutoff_rates(ch, c, l, sum_metric, mc);
    const CutoffRates rg = cutoff_rates(ch, c, l, sum_metric, gh);
    CHECK(std::abs(rm.r0_cm.mean - rg.r0_cm.mean) <= 3.0 * rm.r0_cm.std_error);
    CHECK(std::abs(rm.r0_q.mean - rg.r0_q.mean) <= 3.0 * rm.r0_q.std_error);
    CHECK(std::abs(rm.r0_ind.mean - rg.r0_ind.mean) <= 3.0 * rm.r0_ind.std_error);
    CHECK(std::abs(rm.r0_av.mean - rg.r0_av.mean) <= 3.0 * rm.r0_av.std_error);
}

TEST_CASE("coupled s-mode matches explicit evaluation") {
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine(EngineConfig{Backend::monte_carlo, 20000, 32, 19});
    const BicmMaxlogMetric ml(c, l);
    const GallagerFamily family{GallagerFamily::Kind::q, &ml, SMode::coupled, 1.0};
    const ExponentSolver solver(family, ch, c, &l, engine);
    for (double rho : {0.3, 0.8}) {
        double s_used = 0.0;
        const Estimate a = solver.e0(rho, &s_used);
        CHECK(s_used == 1.0 / (1.0 + rho));
        CHECK(a.mean == e0_q(ml, ch, engine, rho, 1.0 / (1.0 + rho)).mean);
    }
}
