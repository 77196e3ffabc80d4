// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. argv[1] optionally names the CLI binary (used by the CSV
// regeneration check); defaults to tools/bicm next to the build directory.
#include "exponents.hpp"
#include "simulate.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace bicm;

namespace {

constexpr double ln2 = 0.69314718055994530942;
constexpr std::uint64_t kSeed = 20;
constexpr long kSamples = 200000;

std::string g_cli_path = "tools/bicm";

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

struct Outcome {
    bool pass = true;
    std::string detail;
};

using CriterionFn = std::function<Outcome()>;

Engine make_engine() { return Engine(EngineConfig{Backend::monte_carlo, kSamples, 32, kSeed}); }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// --- criterion 1: gmi(sum) equals the bicm capacity with s_opt at 1 --------
Outcome criterion_gmi_identity() {
    Outcome out;
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const BicmSumMetric metric(c, l);
    Engine engine = make_engine();
    for (double snr_db : {5.0, 15.0}) {
        const auto t0 = std::chrono::steady_clock::now();
        const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(snr_db));
        const MeasureResult g = gmi(metric, ch, engine);
        const MeasureResult cap = bicm_capacity(ch, c, l, engine);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double tol = 3.0 * combined(g.std_error, cap.std_error);
        const bool close = std::abs(g.value - cap.value) <= tol;
        const bool s_ok = g.s_opt && *g.s_opt >= 0.95 && *g.s_opt <= 1.05;
        const bool fast = elapsed < 60.0;
        out.pass = out.pass && close && s_ok && fast;
        out.detail += " [" + fmt(snr_db) + " dB: gmi=" + fmt(g.value) + " cap=" + fmt(cap.value) +
                      " s_opt=" + fmt(g.s_opt.value_or(0.0)) + " " + fmt(elapsed) + "s]";
    }
    return out;
}

// --- criterion 2: data-processing inequality over the (rho, s) grid --------
Outcome criterion_data_processing() {
    Outcome out;
    Engine engine = make_engine();
    int violations = 0;
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
        const BicmSumMetric metric(cfg.c, l);
        for (int k = 1; k <= 10; ++k) {
            const double rho = 0.1 * k;
            const Estimate cm = e0_cm(ch, cfg.c, engine, rho);
            for (double s : {0.25, 0.5, 1.0, 2.0}) {
                const Estimate q = e0_q(metric, ch, engine, rho, s);
                if (q.mean > cm.mean + 3.0 * combined(cm.std_error, q.std_error)) ++violations;
            }
        }
    }
    out.pass = violations == 0;
    out.detail = " [" + std::to_string(violations) + " violations over 80 grid points]";
    return out;
}

// --- criterion 3: matched reduction, shared samples ------------------------
Outcome criterion_matched_reduction() {
    Outcome out;
    const Constellation c = build_qam(16);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine = make_engine();
    const MatchedMetric matched(c);
    double worst = 0.0;
    for (double rho : {0.1, 0.3, 0.5, 0.7, 1.0}) {
        const double a = e0_cm(ch, c, engine, rho).mean;
        const double b = e0_q(matched, ch, engine, rho, 1.0 / (1.0 + rho)).mean;
        worst = std::max(worst, std::abs(a - b));
    }
    out.pass = worst <= 1e-10;
    out.detail = " [max |difference| = " + fmt(worst) + "]";
    return out;
}

// --- criterion 4: parallel-channel exceedance ------------------------------
Outcome criterion_parallel_exceedance() {
    Outcome out;
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine = make_engine();
    const Estimate ind = e0_ind(ch, c, l, engine, 1.0);
    const Estimate cm = e0_cm(ch, c, engine, 1.0);
    const double margin = 3.0 * combined(ind.std_error, cm.std_error);
    out.pass = ind.mean - cm.mean > margin;
    out.detail = " [ind(1)=" + fmt(ind.mean) + " cm(1)=" + fmt(cm.mean) +
                 " gap=" + fmt(ind.mean - cm.mean) + " needed>" + fmt(margin) + "]";
    return out;
}

// --- criterion 5: the reversal case ----------------------------------------
Outcome criterion_reversal() {
    Outcome out;
    const Constellation c = build_psk(8);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::awgn, snr_db_to_linear(5.0));
    Engine engine = make_engine();
    const BicmSumMetric metric(c, l);
    const ExponentSolver sum_solver({GallagerFamily::Kind::q, &metric, SMode::optimize, 1.0},
                                    ch, c, &l, engine);
    const ExponentSolver ind_solver({GallagerFamily::Kind::ind}, ch, c, &l, engine);
    bool found = false;
    double best_gap = -1e9, best_rate = 0.0;
    for (double rate = 0.2; rate <= 1.81; rate += 0.2) {
        const ExponentPoint a = sum_solver.at(rate);
        const ExponentPoint b = ind_solver.at(rate);
        const double gap = a.er_nats - b.er_nats;
        const double margin = 3.0 * combined(a.std_error, b.std_error);
        if (gap > margin) found = true;
        if (gap > best_gap) {
            best_gap = gap;
            best_rate = rate;
        }
    }
    out.pass = found;
    out.detail = " [largest Er(sum)-Er(ind) = " + fmt(best_gap) + " nats at R=" + fmt(best_rate) + "]";
    return out;
}

// --- criterion 6: qpsk factorization with a quadrature oracle --------------
double bpsk_capacity_oracle(double snr) {
    const GaussHermiteRule rule = gauss_hermite(64);
    const double a = std::sqrt(snr);
    const double inv_sqrt_pi = 1.0 / std::sqrt(3.14159265358979323846);
    double capacity = 0.0;
    for (int sgn : {+1, -1})
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double u = sgn * a + rule.nodes[k];
            const double fp = std::exp(-(u - a) * (u - a));
            const double fm = std::exp(-(u + a) * (u + a));
            capacity += 0.5 * inv_sqrt_pi * rule.weights[k] *
                        std::log2(2.0 * (sgn > 0 ? fp : fm) / (fp + fm));
        }
    return capacity;
}

Outcome criterion_qpsk_factorization() {
    Outcome out;
    const double snr_db = 5.0;
    const Constellation c = build_qam(4);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::awgn, snr_db_to_linear(snr_db));
    Engine engine = make_engine();
    const MeasureResult a = cm_capacity(ch, c, engine);
    const MeasureResult b = bicm_capacity(ch, c, l, engine);
    const double oracle = 2.0 * bpsk_capacity_oracle(snr_db_to_linear(snr_db) / 2.0);
    const bool equal = std::abs(a.value - b.value) <= 3.0 * combined(a.std_error, b.std_error);
    const bool matches_oracle = std::abs(b.value - oracle) <= 3.0 * b.std_error &&
                                std::abs(a.value - oracle) <= 3.0 * a.std_error;
    out.pass = equal && matches_oracle;
    out.detail = " [cm=" + fmt(a.value) + " bicm=" + fmt(b.value) + " oracle=" + fmt(oracle) + "]";
    return out;
}

// --- criterion 7: perfect extrinsic side information ------------------------
Outcome criterion_perfect_extrinsic() {
    Outcome out;
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine = make_engine();
    const ExtrinsicHypMetric hyp(c, l, {ExtrinsicKind::perfect, 0.0});
    const ExponentSolver solver({GallagerFamily::Kind::q, &hyp, SMode::optimize, 1.0}, ch, c, &l,
                                engine);
    for (double rho : {0.25, 0.5, 1.0}) {
        const Estimate cm = e0_cm(ch, c, engine, rho);
        double s_used = 0.0;
        const Estimate best = solver.e0(rho, &s_used);
        const bool equal =
            std::abs(best.mean - cm.mean) <= 3.0 * combined(best.std_error, cm.std_error) + 1e-9;
        const double s_expect = 1.0 / (c.m * (1.0 + rho));
        const bool s_ok = std::abs(s_used / s_expect - 1.0) <= 0.1;
        out.pass = out.pass && equal && s_ok;
        out.detail += " [rho=" + fmt(rho) + ": e0=" + fmt(best.mean) + " cm=" + fmt(cm.mean) +
                      " s=" + fmt(s_used) + "]";
    }
    return out;
}

// --- criterion 8: Jensen ordering of the cutoff-rate variants ---------------
Outcome criterion_jensen() {
    Outcome out;
    Engine engine = make_engine();
    const struct {
        Constellation c;
        ChannelKind kind;
        double snr_db;
    } configs[] = {
        {build_qam(16), ChannelKind::rayleigh, 5.0},
        {build_qam(16), ChannelKind::rayleigh, 15.0},
        {build_qam(16), ChannelKind::rayleigh, -25.0},
        {build_psk(8), ChannelKind::awgn, 5.0},
    };
    for (const auto& cfg : configs) {
        const ChannelModel ch(cfg.kind, snr_db_to_linear(cfg.snr_db));
        const Labeling l = brgc(cfg.c);
        const BicmSumMetric metric(cfg.c, l);
        const CutoffRates r = cutoff_rates(ch, cfg.c, l, metric, engine);
        const bool ok =
            r.r0_av.mean <= r.r0_ind.mean + 3.0 * combined(r.r0_av.std_error, r.r0_ind.std_error);
        out.pass = out.pass && ok;
        out.detail += " [" + cfg.c.name + "/" + channel_kind_name(cfg.kind) + "/" +
                      fmt(cfg.snr_db) + ": av=" + fmt(r.r0_av.mean) + " ind=" +
                      fmt(r.r0_ind.mean) + "]";
    }
    return out;
}

// --- criterion 9: slope identity --------------------------------------------
Outcome criterion_slope_identity() {
    Outcome out;
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(5.0));
    Engine engine = make_engine();
    const BicmSumMetric sum_metric(c, l);
    const BicmMaxlogMetric ml(c, l);
    const double h = 1e-3;
    for (const SymbolMetric* metric : {static_cast<const SymbolMetric*>(&sum_metric),
                                       static_cast<const SymbolMetric*>(&ml)}) {
        const double slope = e0_q(*metric, ch, engine, h, 1.0).mean / h;
        const double rate_nats = gmi_at_s(*metric, ch, engine, 1.0).value * ln2;
        const bool ok = std::abs(slope / rate_nats - 1.0) <= 0.05;
        out.pass = out.pass && ok;
        out.detail += std::string(" [") + metric_kind_name(metric->kind()) + ": slope=" +
                      fmt(slope) + " gmi*ln2=" + fmt(rate_nats) + "]";
    }
    return out;
}

// --- criterion 10: random-coding bound ---------------------------------------
Outcome criterion_random_coding_bound() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    const Constellation c = build_qam(4);
    const ChannelModel ch(ChannelKind::awgn, snr_db_to_linear(10.0));
    Engine engine = make_engine();
    const MatchedMetric metric(c);
    RandomCodeExperiment exp;
    exp.block_length = 4;
    exp.rate_bits = 0.5;
    exp.trials = 100000;
    exp.metric = &metric;
    exp.seed = kSeed;
    const ValidationResult r = run_random_code_experiment(exp, ch, engine);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.pass = (r.pe_hat <= r.bound + r.ci_halfwidth) && elapsed < 300.0;
    out.detail = " [pe=" + fmt(r.pe_hat) + " bound=" + fmt(r.bound) + " ci=" +
                 fmt(r.ci_halfwidth) + " " + fmt(elapsed) + "s]";
    return out;
}

// --- criterion 11: low-snr max-log penalty ordering --------------------------
Outcome criterion_low_snr_maxlog() {
    Outcome out;
    const Constellation c = build_qam(16);
    const Labeling l = brgc(c);
    const ChannelModel ch(ChannelKind::rayleigh, snr_db_to_linear(-25.0));
    Engine engine = make_engine();
    const BicmSumMetric sum_metric(c, l);
    const BicmMaxlogMetric ml(c, l);
    const MeasureResult g_sum = gmi(sum_metric, ch, engine);
    const MeasureResult g_ml = gmi(ml, ch, engine);
    const MeasureResult g_ml1 = gmi_at_s(ml, ch, engine, 1.0);
    const bool penalty = g_ml.value <= g_sum.value + combined(g_ml.std_error, g_sum.std_error);
    const bool opt_helps = g_ml.value >= g_ml1.value - g_ml1.std_error;
    out.pass = penalty && opt_helps;
    out.detail = " [gmi(sum)=" + fmt(g_sum.value) + " gmi(maxlog)=" + fmt(g_ml.value) +
                 " gmi(maxlog,s=1)=" + fmt(g_ml1.value) + "]";
    return out;
}

// --- criterion 12: CSV regeneration is byte-identical -------------------------
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion_csv_determinism() {
    Outcome out;
    const std::string quiet = " 2>/dev/null";
    const struct {
        std::string name;
        std::string args;
    } runs[] = {
        {"capacity", "capacity --constellation qpsk --channel awgn --snr-db 5 --samples 20000"
                     " --seed 3"},
        {"exponent", "exponent --constellation psk8 --channel awgn --snr-db 5 --families"
                     " sum,ind --rates 0.5:0.5:1.5 --samples 20000 --seed 4"},
        {"validate", "validate --constellation qpsk --channel awgn --snr-db 10 --N 4 --rate 0.5"
                     " --trials 5000 --samples 20000 --seed 5"},
    };
    for (const auto& run : runs) {
        const std::string a = "acceptance_" + run.name + "_a.csv";
        const std::string b = "acceptance_" + run.name + "_b.csv";
        const std::string cmd1 = "\"" + g_cli_path + "\" " + run.args + " --out " + a + quiet;
        const std::string cmd2 =
            "\"" + g_cli_path + "\" " + run.name + " --config " + a + " --out " + b + quiet;
        const bool ok1 = std::system(cmd1.c_str()) == 0;
        const bool ok2 = std::system(cmd2.c_str()) == 0;
        const std::string ca = slurp(a), cb = slurp(b);
        const bool identical = ok1 && ok2 && !ca.empty() && ca == cb;
        out.pass = out.pass && identical;
        out.detail += " [" + run.name + ": " + (identical ? "byte-identical" : "MISMATCH") + "]";
        std::remove(a.c_str());
        std::remove(b.c_str());
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];
    const struct {
        int id;
        const char* title;
        CriterionFn fn;
    } criteria[] = {
        {1, "gmi(sum) = bicm capacity, s_opt in [0.95,1.05], <60s/point", criterion_gmi_identity},
        {2, "data-processing inequality holds on the (rho,s) grid", criterion_data_processing},
        {3, "matched metric at s=1/(1+rho) reduces to e0_cm (1e-10)", criterion_matched_reduction},
        {4, "parallel-channel exponent exceeds cm at rho=1 (3 SE)", criterion_parallel_exceedance},
        {5, "8psk awgn: Er(sum) beats Er(ind) somewhere on the grid", criterion_reversal},
        {6, "qpsk gray: bicm = cm = 2x bpsk quadrature oracle", criterion_qpsk_factorization},
        {7, "perfect extrinsic restores the cm exponent", criterion_perfect_extrinsic},
        {8, "jensen ordering r0_av <= r0_ind on all four configs", criterion_jensen},
        {9, "dE0/drho at 0 recovers gmi(s) ln2 within 5%", criterion_slope_identity},
        {10, "random-code decoder meets the exponent bound, <5min", criterion_random_coding_bound},
        {11, "low-snr max-log penalty and s-optimization ordering", criterion_low_snr_maxlog},
        {12, "CSV regenerates byte-identically from its own header", criterion_csv_determinism},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criterion.fn();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string(" [exception: ") + e.what() + "]";
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  criterion %2d: %s%s (%.1fs)\n", out.pass ? "PASS" : "FAIL", criterion.id,
                    criterion.title, out.detail.c_str(), elapsed);
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    std::printf("%d/12 acceptance criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 1;
}
