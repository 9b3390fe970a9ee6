#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace primq {

// Thrown when an operation would exceed a configured capacity: a prime table
// too small for the requested tail tolerance, an enumeration cap, or the
// brute-force oracle limit.  `partial` carries how much work completed before
// the cap was hit (e.g. members already yielded); `required` is a hint for the
// capacity that would have been needed, when one can be estimated (0 if not).
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what,
                            std::uint64_t partial_count = 0,
                            std::uint64_t required_hint = 0)
        : std::runtime_error(what), partial(partial_count), required(required_hint) {}

    std::uint64_t partial;
    std::uint64_t required;
};

// Thrown when a numerical routine fails to converge to its requested
// tolerance (e.g. adaptive quadrature hitting its subdivision limit).
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace primq
