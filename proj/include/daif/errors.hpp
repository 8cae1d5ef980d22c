#pragma once

#include <stdexcept>
#include <string>

namespace daif {

// Precondition or API-contract violation (bad shapes, reuse of a spent
// graph, stepping a finished environment, ...).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Non-finite values showed up where the numerics must stay finite
// (loss, gradients, parameter updates).
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem / serialization failure, with path context in the message.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user-facing configuration (unknown keys, unparsable values).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace daif
