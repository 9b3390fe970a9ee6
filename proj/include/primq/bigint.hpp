#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace primq {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 U64_MAX = std::numeric_limits<u64>::max();

// Natural log of a positive big integer, accurate to ~1 ulp of double:
// write n = d * 2^e with d in [0.5, 1) and use log(n) = log(d) + e*log(2).
double log_mpz(const mpz_class& n);

// True iff 0 <= n <= 2^64 - 1.
bool fits_u64(const mpz_class& n);

// True iff 0 <= n <= 2^128 - 1.
bool fits_u128(const mpz_class& n);

u64 to_u64(const mpz_class& n);    // throws std::out_of_range unless fits_u64
u128 to_u128(const mpz_class& n);  // throws std::out_of_range unless fits_u128

mpz_class from_u128(u128 v);

// Parse a non-negative integer in one of three forms:
//   "123456"      plain decimal
//   "10^48"       power of ten
//   "3*10^45"     decimal multiplier times a power of ten
// Surrounding whitespace is allowed; anything else throws std::invalid_argument.
mpz_class parse_bigint(const std::string& text);

}  // namespace primq
