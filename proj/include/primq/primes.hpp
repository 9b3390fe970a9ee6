#pragma once

#include <cstddef>
#include <vector>

#include "primq/bigint.hpp"

namespace primq {

// Primes up to a limit, with a compensated running sum of their logs.
// theta_prefix[i] = sum_{j <= i} log(primes[j]) accumulated with Kahan
// summation, so theta_prefix[k-1] is both the Chebyshev theta value at the
// k-th prime and the log of the k-th primorial.
struct PrimeTable {
    u64 limit = 0;
    std::vector<u64> primes;
    std::vector<double> theta_prefix;

    std::size_t count() const { return primes.size(); }

    // log of the k-th primorial (product of the first k primes), k is 1-based.
    double theta_of_kth(std::size_t k) const;
};

// Segmented sieve of Eratosthenes, segments processed in parallel; the theta
// prefix is a serial compensated pass so its rounding is order-independent.
PrimeTable build_prime_table(u64 limit);

// Straightforward serial sieve kept as the reference implementation.
PrimeTable build_prime_table_serial(u64 limit);

// First `count` primes via trial division; independent of any PrimeTable so
// callers that only need a handful of small primes avoid building one.
std::vector<u64> first_primes(std::size_t count);

struct Primorial {
    std::size_t k = 0;    // number of prime factors (1-based index)
    mpz_class value;      // exact product of the first k primes
    double log_value = 0; // compensated log, matches theta_of_kth(k)
};

// Exact k-th primorial; k >= 1 and k <= table.count(), else std::out_of_range.
Primorial primorial(const PrimeTable& table, std::size_t k);

// Chebyshev theta(x) = sum of log p over primes p <= x.  Returns 0 for x < 2;
// requires x <= table.limit (std::out_of_range otherwise).
double chebyshev_theta(const PrimeTable& table, double x);

struct ThetaRatioBounds {
    double c1 = 0;   // min of theta(x)/x over integer x in [xmin, xmax]
    double c2 = 0;   // max of theta(x)/x over the same range
    u64 argmin = 0;  // smallest x attaining c1
    u64 argmax = 0;  // smallest x attaining c2
};

// Scan theta(x)/x over every integer x in [xmin, xmax].  Requires
// 2 <= xmin <= xmax <= table.limit.  The parallel version splits the range
// into chunks and merges chunk extrema in order, so ties resolve to the
// smallest x exactly as in the serial reference.
ThetaRatioBounds theta_ratio_bounds(const PrimeTable& table, u64 xmin, u64 xmax);
ThetaRatioBounds theta_ratio_bounds_serial(const PrimeTable& table, u64 xmin, u64 xmax);

struct PrimorialLogBounds {
    double alpha = 0;      // min over k <= kmax of theta_k / ceil(k*log(k+1))
    double beta = 0;       // max over the same range
    std::size_t argmin = 0;
    std::size_t argmax = 0;
};

// Bounds relating the log of the k-th primorial to ceil(k*log(k+1)), so that
// alpha*ceil(k*log(k+1)) <= log(primorial_k) <= beta*ceil(k*log(k+1)) for all
// k <= kmax.  Requires 1 <= kmax <= table.count().
PrimorialLogBounds primorial_log_bounds(const PrimeTable& table, std::size_t kmax);

}  // namespace primq
