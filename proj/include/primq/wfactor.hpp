#pragma once

#include <cstdint>
#include <map>

#include "primq/bigint.hpp"
#include "primq/qcount.hpp"

namespace primq {

// Prime -> exponent map of a factored product; zero exponents are omitted.
using FactorExponents = std::map<u64, u64>;

// Exponents of the product of all members <= n, accumulated directly from the
// enumerated members: a member with primorial digits b_1..b_t contributes the
// suffix sum b_j + b_{j+1} + ... + b_t to the exponent of the j-th prime.
// `member_cap` guards the enumeration (capacity_error beyond it).
FactorExponents product_exponents_direct(const mpz_class& n, u64 member_cap = 1000000);

// The same exponents via counting alone: with E_k = sum_{s>=1} count(n / ell_k^s)
// over primorials ell_k <= n, the j-th prime's exponent is sum_{k>=j} E_k.
// This is the identity the direct route verifies member-by-member.
FactorExponents product_exponents_recurrence(const mpz_class& n, QCounter& counter);

struct FactorizationCheck {
    bool match = false;
    FactorExponents direct;
    FactorExponents recurrence;
    u64 first_mismatch_prime = 0;  // smallest differing prime; 0 when match
};

FactorizationCheck verify_product_factorization(const mpz_class& n, QCounter& counter,
                                                u64 member_cap = 1000000);

// Check the identity for every n in [1, max_n]; returns 0 on success or the
// smallest failing n.  The parallel version splits [1, max_n] into blocks,
// each verified incrementally with its own counter; the serial reference is a
// single block.
u64 verify_factorization_range(u64 max_n);
u64 verify_factorization_range_serial(u64 max_n);

// log of the product of members <= n, from the recurrence-side exponents.
double log_member_product(const mpz_class& n, QCounter& counter);

}  // namespace primq
