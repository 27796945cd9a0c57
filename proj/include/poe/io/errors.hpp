#pragma once

#include <stdexcept>

namespace poe::io {

// Exit codes used by the CLI. Core invariant violations surface as
// std::invalid_argument / std::runtime_error and map to kExitInvariant.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigParse = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitInsufficientData = 4;
inline constexpr int kExitIo = 5;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace poe::io
