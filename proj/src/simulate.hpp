// Desk-scale random-coding experiment: fresh i.i.d. codebook per trial,
// exhaustive maximum-metric decoding, empirical error rate against the
// random-coding exponent bound exp(-N (E0 - rho R)).
#pragma once

#include "exponents.hpp"

#include <cstdint>

namespace bicm {

struct RandomCodeExperiment {
    int block_length = 1;    // N, channel symbols per codeword
    double rate_bits = 1.0;  // R, bits per channel use
    long trials = 1000;
    const SymbolMetric* metric = nullptr;
    std::uint64_t seed = 1;
};

struct ValidationResult {
    double pe_hat = 0.0;
    double ci_halfwidth = 0.0; // Wilson 95%
    double bound = 0.0;        // exp(-N * E_r(R))
    double rho_opt = 0.0;
    double s_opt = 0.0;
    long errors = 0;
    long trials = 0;
    long num_messages = 0;
};

// Runs the experiment; the engine supplies the exponent bound. Throws
// invalid-argument when the exhaustive-decoder cost guard is violated.
ValidationResult run_random_code_experiment(const RandomCodeExperiment& exp,
                                            const ChannelModel& ch, const Engine& engine);

} // namespace bicm
