#include "primq/wfactor.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "primq/errors.hpp"
#include "primq/primes.hpp"

namespace primq {

namespace {

// Add one member's prime exponents (suffix sums of its primorial digits)
// into `exps`, growing the prime list as needed.
void add_member_exponents(const MemberRep& m, std::vector<u64>& ps, FactorExponents& exps) {
    const std::size_t t = m.exponents.size();
    if (ps.size() < t) ps = first_primes(t);
    u64 running = 0;
    for (std::size_t j = t; j >= 1; --j) {
        running += m.exponents[j - 1];
        exps[ps[j - 1]] += running;
    }
}

// Smallest failing n in [lo, hi], or 0.  Walks n upward, keeping the
// direct-side exponents cumulative as new members enter.
u64 verify_block(u64 lo, u64 hi) {
    QCounter counter;
    std::vector<u64> ps = first_primes(8);
    FactorExponents direct;
    const std::vector<MemberRep> members =
        enumerate_members(mpz_class(static_cast<unsigned long>(hi)),
                          std::max<u64>(1000000, hi));
    std::size_t mi = 0;
    while (mi < members.size() && members[mi].value < static_cast<unsigned long>(lo)) {
        add_member_exponents(members[mi], ps, direct);
        ++mi;
    }
    mpz_class n_z;
    for (u64 n = lo; n <= hi; ++n) {
        while (mi < members.size() && members[mi].value <= static_cast<unsigned long>(n)) {
            add_member_exponents(members[mi], ps, direct);
            ++mi;
        }
        n_z = static_cast<unsigned long>(n);
        if (product_exponents_recurrence(n_z, counter) != direct) return n;
    }
    return 0;
}

}  // namespace

FactorExponents product_exponents_direct(const mpz_class& n, u64 member_cap) {
    if (sgn(n) < 0) throw std::invalid_argument("product_exponents_direct: n must be >= 0");
    FactorExponents exps;
    std::vector<u64> ps = first_primes(8);
    u64 seen = 0;
    bool exceeded = false;
    enumerate_members_stream(n, [&](const MemberRep& m) {
        if (seen >= member_cap) {
            exceeded = true;
            return false;
        }
        ++seen;
        add_member_exponents(m, ps, exps);
        return true;
    });
    if (exceeded) {
        throw capacity_error("product_exponents_direct: member count exceeds cap",
                             member_cap, 0);
    }
    return exps;
}

FactorExponents product_exponents_recurrence(const mpz_class& n, QCounter& counter) {
    if (sgn(n) < 0) {
        throw std::invalid_argument("product_exponents_recurrence: n must be >= 0");
    }
    FactorExponents exps;
    if (sgn(n) == 0) return exps;

    std::vector<u64> ps = first_primes(8);
    std::vector<u64> level_totals;  // E_k = sum_{s>=1} count(n / ell_k^s)
    mpz_class ell(1), pw, quotient;
    for (std::size_t k = 1;; ++k) {
        if (ps.size() < k) ps = first_primes(k);
        ell *= static_cast<unsigned long>(ps[k - 1]);
        if (ell > n) break;
        u64 ek = 0;
        pw = ell;
        while (pw <= n) {
            quotient = n / pw;
            ek += counter.count(quotient);
            pw *= ell;
        }
        level_totals.push_back(ek);
    }
    // The j-th prime's exponent is the suffix sum of the E_k.
    u64 running = 0;
    for (std::size_t j = level_totals.size(); j >= 1; --j) {
        running += level_totals[j - 1];
        exps[ps[j - 1]] = running;
    }
    return exps;
}

FactorizationCheck verify_product_factorization(const mpz_class& n, QCounter& counter,
                                                u64 member_cap) {
    FactorizationCheck out;
    out.direct = product_exponents_direct(n, member_cap);
    out.recurrence = product_exponents_recurrence(n, counter);
    out.match = out.direct == out.recurrence;
    if (!out.match) {
        auto di = out.direct.begin();
        auto ri = out.recurrence.begin();
        while (di != out.direct.end() && ri != out.recurrence.end() && *di == *ri) {
            ++di;
            ++ri;
        }
        if (di != out.direct.end() && ri != out.recurrence.end()) {
            out.first_mismatch_prime = std::min(di->first, ri->first);
        } else if (di != out.direct.end()) {
            out.first_mismatch_prime = di->first;
        } else {
            out.first_mismatch_prime = ri->first;
        }
    }
    return out;
}

u64 verify_factorization_range_serial(u64 max_n) {
    if (max_n < 1) throw std::invalid_argument("verify_factorization_range: max_n >= 1");
    return verify_block(1, max_n);
}

u64 verify_factorization_range(u64 max_n) {
    if (max_n < 1) throw std::invalid_argument("verify_factorization_range: max_n >= 1");
    const u64 block = std::max<u64>(1024, max_n / (4 * omp_get_max_threads()));
    const std::size_t nblocks = static_cast<std::size_t>((max_n - 1) / block) + 1;
    std::vector<u64> fails(nblocks, 0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t b = 0; b < nblocks; ++b) {
        const u64 lo = 1 + b * block;
        const u64 hi = std::min(max_n, lo + block - 1);
        fails[b] = verify_block(lo, hi);
    }
    for (u64 f : fails) {
        if (f != 0) return f;  // blocks ascend, so the first hit is smallest
    }
    return 0;
}

double log_member_product(const mpz_class& n, QCounter& counter) {
    const FactorExponents exps = product_exponents_recurrence(n, counter);
    double sum = 0.0, comp = 0.0;
    for (const auto& [p, e] : exps) {
        const double term =
            static_cast<double>(e) * std::log(static_cast<double>(p));
        const double y = term - comp;
        const double next = sum + y;
        comp = (next - sum) - y;
        sum = next;
    }
    return sum;
}

}  // namespace primq
