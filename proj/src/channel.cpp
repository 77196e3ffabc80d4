#include "channel.hpp"

namespace bicm {

const char* channel_kind_name(ChannelKind kind) {
    return kind == ChannelKind::awgn ? "awgn" : "rayleigh";
}

ChannelKind channel_kind_from_name(const std::string& name) {
    if (name == "awgn") return ChannelKind::awgn;
    if (name == "rayleigh") return ChannelKind::rayleigh;
    throw std::invalid_argument("unknown channel kind: " + name);
}

} // namespace bicm
