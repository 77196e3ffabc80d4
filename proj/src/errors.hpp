#pragma once

#include <stdexcept>

namespace bicm {

// Requested combination is outside what the implementation supports
// (as opposed to a malformed argument).
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bicm
