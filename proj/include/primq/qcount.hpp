#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "primq/bigint.hpp"
#include "primq/flat_map.hpp"

namespace primq {

// The members of the counted family are the positive integers whose prime
// factorization uses consecutive primes starting at 2 with non-increasing
// exponents: 2^{a_1} 3^{a_2} ... p_t^{a_t}, a_1 >= a_2 >= ... >= a_t >= 1.
// Equivalently each member is a unique product of primorials
// ell_1^{b_1} * ell_2^{b_2} * ... with b_k >= 0, where ell_k is the k-th
// primorial; b_k is the number of times exponent level k appears.

// One member, carried as its exact value plus its primorial-basis digits
// (exponents[i] = b_{i+1}; trailing zeros trimmed, so value 1 has no digits).
struct MemberRep {
    mpz_class value;
    std::vector<std::uint32_t> exponents;
};

// Memo key of the counting recursion: the number of suffix-lattice members
// (products of ell_k, ell_{k+1}, ...) that are <= bound.
struct CountKey {
    mpz_class bound;
    std::size_t k = 1;
    bool operator<(const CountKey& o) const {
        if (k != o.k) return k < o.k;
        return bound < o.bound;
    }
};

// Membership test by factoring with consecutive small primes; cheap because
// non-members bail out at the first gap or exponent increase.
bool is_member(u64 m);
bool is_member(const mpz_class& m);

struct QCounterConfig {
    // Bounds at or below this are answered from per-level sorted value lists;
    // only larger bounds enter the memoized recursion.  Must be < 2^63.
    u64 list_limit = 1000000000000000ULL;  // 10^15

    // Cap on total memoized states across all tiers, a memory guard: roughly
    // 40 bytes per state, so the default stays around 4 GB.  Exceeding it
    // raises capacity_error instead of exhausting memory (n near 10^48 needs
    // about 10^7 states; each additional factor of 10^12 roughly decuples).
    std::size_t max_memo_states = 100000000;  // 10^8
};

// Exact membership counting by memoized recursion over primorial digits:
//   R(bound, k) = sum over s >= 0 with ell_k^s <= bound of R(bound / ell_k^s, k+1)
// with R(bound, k) = 1 once ell_k > bound >= 1, and count(n) = R(n, 1).
// Bounds are dispatched to u64 / u128 / big-integer tiers by magnitude, each
// tier with its own memo keyed per level.
//
// Not thread-safe: the memo tables are unsynchronized, so use one instance
// per thread.
class QCounter {
public:
    explicit QCounter(QCounterConfig cfg = {});

    // Number of members <= n; count(0) == 0, count(1) == 1.
    u64 count(const mpz_class& n);
    u64 count(u64 n);

    // Number of members <= n whose primorial digit b_k is >= s (resp. == s).
    // Computed by a constrained recursion that starts level k at exponent s,
    // NOT by rescaling n, so it provides an independent route to the pivot
    // identity count_with_bk_at_least(n, k, s) == count(n / ell_k^s).
    u64 count_with_bk_at_least(const mpz_class& n, std::size_t k, std::uint32_t s);
    u64 count_with_bk_exact(const mpz_class& n, std::size_t k, std::uint32_t s);

    struct Stats {
        std::size_t memo64_states = 0;
        std::size_t memo128_states = 0;
        std::size_t memo_mpz_states = 0;
        std::size_t list_values = 0;
    };
    Stats stats() const;

private:
    void note_memo_state();
    u64 count_bound_u64(u64 b, std::size_t k);
    u64 count_bound_u128(u128 b, std::size_t k);
    u64 count_bound_mpz(const mpz_class& b, std::size_t k);
    u64 list_count(u64 b, std::size_t k) const;
    const mpz_class& prim_mpz(std::size_t k);
    void ensure_prime(std::size_t idx);

    using LocalMemo = std::map<CountKey, u64>;
    u64 constrained_count(const mpz_class& b, std::size_t i, std::size_t k,
                          std::uint32_t s, LocalMemo& local);

    u64 list_limit_;
    std::size_t max_memo_states_;
    std::size_t memo_states_ = 0;
    std::vector<u64> primes_;
    std::vector<u64> prim_u64_;             // primorials that fit in 64 bits
    std::vector<u128> prim_u128_;           // primorials that fit in 128 bits
    std::vector<mpz_class> prim_mpz_;       // grown on demand
    std::vector<std::vector<u64>> lists_;   // lists_[k-1]: sorted suffix-lattice values <= list_limit
    std::vector<FlatMap<u64>> memo64_;      // memo64_[k-1]
    std::vector<FlatMap<u128>> memo128_;    // memo128_[k-1]
    std::map<CountKey, u64> memo_mpz_;
};

// Convenience wrapper: fresh QCounter per call.
u64 count_exact(const mpz_class& n);

// Brute-force oracle: scan every integer in [1, n] with the membership test.
// Guarded by `cap` since the scan is O(n); exceeding it raises capacity_error.
u64 count_brute(u64 n, u64 cap = 100000000ULL);          // parallel scan
u64 count_brute_serial(u64 n, u64 cap = 100000000ULL);   // reference scan

// Counts at several checkpoints in one parallel pass over [1, max(ns)].
// Returns counts aligned with the input order; duplicates allowed.
std::vector<u64> count_brute_many(const std::vector<u64>& ns, u64 cap = 100000000ULL);

// Ascending enumeration of members <= n.  The callback returns false to stop.
void enumerate_members_stream(const mpz_class& n,
                              const std::function<bool(const MemberRep&)>& fn);

// Sorted members <= n; throws capacity_error (partial = cap) if there are
// more than cap of them.
std::vector<MemberRep> enumerate_members(const mpz_class& n, u64 cap = 1000000);

}  // namespace primq
