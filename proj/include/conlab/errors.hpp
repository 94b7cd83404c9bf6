#pragma once

#include <stdexcept>
#include <string>

namespace conlab {

// Malformed or out-of-contract input: bad parameters, mismatched dimensions,
// incompatible protocol/monitor/criterion combinations.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace conlab
