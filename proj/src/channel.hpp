// Memoryless channel densities and samplers: AWGN and fully interleaved
// Rayleigh fading with perfect receiver-side CSI. Output model
//   y = h * sqrt(snr) * x + z,  z ~ CN(0,1)
// so the transition density is (1/pi) exp(-|y - h sqrt(snr) x|^2).
#pragma once

#include "constellation.hpp"
#include "rng.hpp"

#include <stdexcept>

namespace bicm {

enum class ChannelKind { awgn, rayleigh };

struct ChannelModel {
    ChannelKind kind = ChannelKind::awgn;
    double snr = 1.0; // linear power ratio

    ChannelModel() = default;
    ChannelModel(ChannelKind k, double snr_linear) : kind(k), snr(snr_linear) {
        if (!(snr > 0.0)) throw std::invalid_argument("channel: snr must be positive");
    }
};

struct Observation {
    cplx y{0.0, 0.0};
    cplx h{1.0, 0.0}; // fading coefficient, fixed at 1 for AWGN
};

inline double log_transition_density(const ChannelModel& ch, const Observation& obs, cplx x) {
    constexpr double log_pi = 1.1447298858494001741; // log(pi)
    return -log_pi - std::norm(obs.y - obs.h * std::sqrt(ch.snr) * x);
}

inline double transition_density(const ChannelModel& ch, const Observation& obs, cplx x) {
    return std::exp(log_transition_density(ch, obs, x));
}

inline Observation sample(const ChannelModel& ch, cplx x, Rng& rng) {
    Observation obs;
    if (ch.kind == ChannelKind::rayleigh) obs.h = rng.cnormal();
    obs.y = obs.h * std::sqrt(ch.snr) * x + rng.cnormal();
    return obs;
}

inline double snr_db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_snr_db(double lin) { return 10.0 * std::log10(lin); }

const char* channel_kind_name(ChannelKind kind);
ChannelKind channel_kind_from_name(const std::string& name);

} // namespace bicm
