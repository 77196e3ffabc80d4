#include "simulate.hpp"

#include <cmath>

namespace bicm {

namespace {

// 95% Wilson score interval halfwidth for k errors in n trials.
double wilson_halfwidth(long k, long n) {
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    return z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
}

} // namespace

ValidationResult run_random_code_experiment(const RandomCodeExperiment& exp,
                                            const ChannelModel& ch, const Engine& engine) {
    if (exp.metric == nullptr) throw std::invalid_argument("experiment: metric required");
    if (exp.block_length < 1) throw std::invalid_argument("experiment: block length must be >= 1");
    if (exp.trials < 1) throw std::invalid_argument("experiment: need at least one trial");
    if (exp.rate_bits < 0.0) throw std::invalid_argument("experiment: rate must be nonnegative");

    const Constellation& c = exp.metric->constellation();
    const int N = exp.block_length;
    const int M_points = c.size();
    const long num_messages = std::max<long>(1, std::llround(std::pow(2.0, N * exp.rate_bits)));

    // Exhaustive decoder cost guard: 2^(NR) * N * 2^m per trial.
    if (static_cast<long>(N) * c.m > 24)
        throw std::invalid_argument("experiment: N*m exceeds the exhaustive-decoder guard (24)");
    if (static_cast<double>(num_messages) * N * M_points > 1e8)
        throw std::invalid_argument("experiment: per-trial decoding cost exceeds budget");

    // Bound from the matching exponent family on the engine's sample set.
    GallagerFamily family;
    if (exp.metric->kind() == MetricKind::matched) {
        family.kind = GallagerFamily::Kind::cm;
    } else {
        family.kind = GallagerFamily::Kind::q;
        family.metric = exp.metric;
        family.s_mode = SMode::optimize;
    }
    const ExponentSolver solver(family, ch, c, exp.metric->labeling(), engine);
    const ExponentPoint bound_point = solver.at(exp.rate_bits);

    std::uint64_t seed_state = exp.seed ^ 0x52434f4445ULL; // experiment stream tag
    Rng rng(splitmix64(seed_state));
    const bool needs_ext = exp.metric->uses_extrinsic();
    const ExtrinsicModel* model = exp.metric->extrinsic_model();

    std::vector<std::int32_t> codebook(static_cast<std::size_t>(num_messages) * N);
    std::vector<Observation> received(N);
    std::vector<double> rows(static_cast<std::size_t>(N) * M_points);
    std::vector<double> scores(num_messages);
    std::vector<ExtrinsicRealization> ext(N);

    long errors = 0;
    for (long trial = 0; trial < exp.trials; ++trial) {
        for (auto& s : codebook) s = static_cast<std::int32_t>(rng.uniform_int(M_points));
        const long msg = static_cast<long>(rng.uniform_int(static_cast<int>(num_messages)));
        const std::int32_t* tx = &codebook[static_cast<std::size_t>(msg) * N];
        for (int k = 0; k < N; ++k) received[k] = sample(ch, c.points[tx[k]], rng);
        // Extrinsic draws come after the channel draws so runs with non-
        // extrinsic metrics see identical codebooks and noise per seed.
        if (needs_ext)
            for (int k = 0; k < N; ++k) ext[k] = draw_extrinsic(*model, c.m, rng);

        for (int k = 0; k < N; ++k) {
            MetricContext ctx{tx[k], needs_ext ? &ext[k] : nullptr};
            exp.metric->log_metric_row(ch, received[k], ctx,
                                       {rows.data() + static_cast<std::size_t>(k) * M_points,
                                        static_cast<std::size_t>(M_points)});
        }
        for (long mprime = 0; mprime < num_messages; ++mprime) {
            const std::int32_t* cw = &codebook[static_cast<std::size_t>(mprime) * N];
            double acc = 0.0;
            for (int k = 0; k < N; ++k)
                acc += rows[static_cast<std::size_t>(k) * M_points + cw[k]];
            scores[mprime] = acc;
        }
        double best = scores[0];
        long best_idx = 0;
        bool tie = false;
        for (long mprime = 1; mprime < num_messages; ++mprime) {
            if (scores[mprime] > best) {
                best = scores[mprime];
                best_idx = mprime;
                tie = false;
            } else if (scores[mprime] == best) {
                tie = true; // ties decode as error
            }
        }
        if (best_idx != msg || tie) ++errors;
    }

    ValidationResult out;
    out.errors = errors;
    out.trials = exp.trials;
    out.num_messages = num_messages;
    out.pe_hat = static_cast<double>(errors) / static_cast<double>(exp.trials);
    out.ci_halfwidth = wilson_halfwidth(errors, exp.trials);
    out.bound = std::exp(-static_cast<double>(N) * bound_point.er_nats);
    out.rho_opt = bound_point.rho_opt;
    out.s_opt = bound_point.s_opt;
    return out;
}

} // namespace bicm
