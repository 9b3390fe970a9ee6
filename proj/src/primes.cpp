#include "primq/primes.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "primq/errors.hpp"

namespace primq {

namespace {

u64 isqrt_u64(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<u64> simple_primes_upto(u64 n) {
    std::vector<u64> out;
    if (n < 2) return out;
    std::vector<char> composite(n + 1, 0);
    for (u64 i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u128 j = static_cast<u128>(i) * i; j <= n; j += i) {
            composite[static_cast<std::size_t>(j)] = 1;
        }
    }
    return out;
}

// Compensated prefix of log(p) over the primes, serial so the rounding is
// independent of how the sieve was parallelized.
void fill_theta_prefix(PrimeTable& t) {
    t.theta_prefix.resize(t.primes.size());
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < t.primes.size(); ++i) {
        double y = std::log(static_cast<double>(t.primes[i])) - comp;
        double next = sum + y;
        comp = (next - sum) - y;
        sum = next;
        t.theta_prefix[i] = sum;
    }
}

}  // namespace

double PrimeTable::theta_of_kth(std::size_t k) const {
    if (k < 1 || k > theta_prefix.size()) {
        throw std::out_of_range("theta_of_kth: k outside table");
    }
    return theta_prefix[k - 1];
}

PrimeTable build_prime_table_serial(u64 limit) {
    PrimeTable t;
    t.limit = limit;
    t.primes = simple_primes_upto(limit);
    fill_theta_prefix(t);
    return t;
}

PrimeTable build_prime_table(u64 limit) {
    PrimeTable t;
    t.limit = limit;
    if (limit < 2) return t;

    const std::vector<u64> base = simple_primes_upto(isqrt_u64(limit));
    const u64 seg_size = 1u << 22;
    const u64 nseg = limit / seg_size + 1;
    std::vector<std::vector<u64>> found(static_cast<std::size_t>(nseg));

#pragma omp parallel for schedule(dynamic)
    for (std::size_t seg = 0; seg < static_cast<std::size_t>(nseg); ++seg) {
        const u64 lo = std::max<u64>(seg * seg_size, 2);
        const u64 hi = std::min(limit, (seg + 1) * seg_size - 1);
        if (lo > hi) continue;
        std::vector<char> composite(static_cast<std::size_t>(hi - lo + 1), 0);
        for (u64 p : base) {
            u128 start = static_cast<u128>(p) * p;
            if (start > hi) break;
            if (start < lo) {
                start = ((lo + p - 1) / p) * static_cast<u128>(p);
            }
            for (u128 j = start; j <= hi; j += p) {
                composite[static_cast<std::size_t>(j - lo)] = 1;
            }
        }
        std::vector<u64>& out = found[seg];
        for (u64 x = lo; x <= hi; ++x) {
            if (!composite[static_cast<std::size_t>(x - lo)]) out.push_back(x);
        }
    }

    std::size_t total = 0;
    for (const auto& v : found) total += v.size();
    t.primes.reserve(total);
    for (const auto& v : found) {
        t.primes.insert(t.primes.end(), v.begin(), v.end());
    }
    fill_theta_prefix(t);
    return t;
}

std::vector<u64> first_primes(std::size_t count) {
    std::vector<u64> out;
    out.reserve(count);
    u64 candidate = 2;
    while (out.size() < count) {
        bool prime = true;
        for (u64 p : out) {
            if (p * p > candidate) break;
            if (candidate % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) out.push_back(candidate);
        candidate += (candidate == 2) ? 1 : 2;
    }
    return out;
}

Primorial primorial(const PrimeTable& table, std::size_t k) {
    if (k < 1 || k > table.count()) {
        throw std::out_of_range("primorial: k outside table");
    }
    Primorial result;
    result.k = k;
    mpz_primorial_ui(result.value.get_mpz_t(), table.primes[k - 1]);
    result.log_value = table.theta_prefix[k - 1];
    return result;
}

double chebyshev_theta(const PrimeTable& table, double x) {
    if (std::isnan(x)) throw std::invalid_argument("chebyshev_theta: x is NaN");
    if (x < 2.0) return 0.0;
    if (x > static_cast<double>(table.limit)) {
        throw std::out_of_range("chebyshev_theta: x exceeds table limit");
    }
    const u64 xi = static_cast<u64>(std::floor(x));
    const auto it = std::upper_bound(table.primes.begin(), table.primes.end(), xi);
    const std::size_t idx = static_cast<std::size_t>(it - table.primes.begin());
    return idx == 0 ? 0.0 : table.theta_prefix[idx - 1];
}

namespace {

// Extrema of theta(x)/x over integer x in [lo, hi]; assumes lo >= 2 and the
// table covers hi.  Ties resolve to the smallest x because updates use strict
// comparison while x ascends.
ThetaRatioBounds scan_theta_ratio(const PrimeTable& table, u64 lo, u64 hi) {
    ThetaRatioBounds b;
    b.c1 = std::numeric_limits<double>::infinity();
    b.c2 = -std::numeric_limits<double>::infinity();
    // idx = number of primes <= x, maintained incrementally.
    std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(table.primes.begin(), table.primes.end(), lo) -
        table.primes.begin());
    double theta = idx == 0 ? 0.0 : table.theta_prefix[idx - 1];
    for (u64 x = lo; x <= hi; ++x) {
        if (x != lo) {
            while (idx < table.primes.size() && table.primes[idx] <= x) ++idx;
            theta = table.theta_prefix[idx - 1];
        }
        const double ratio = theta / static_cast<double>(x);
        if (ratio < b.c1) {
            b.c1 = ratio;
            b.argmin = x;
        }
        if (ratio > b.c2) {
            b.c2 = ratio;
            b.argmax = x;
        }
    }
    return b;
}

void check_theta_ratio_args(const PrimeTable& table, u64 xmin, u64 xmax) {
    if (xmin < 2 || xmin > xmax) {
        throw std::invalid_argument("theta_ratio_bounds: need 2 <= xmin <= xmax");
    }
    if (xmax > table.limit) {
        throw std::out_of_range("theta_ratio_bounds: xmax exceeds table limit");
    }
}

}  // namespace

ThetaRatioBounds theta_ratio_bounds_serial(const PrimeTable& table, u64 xmin, u64 xmax) {
    check_theta_ratio_args(table, xmin, xmax);
    return scan_theta_ratio(table, xmin, xmax);
}

ThetaRatioBounds theta_ratio_bounds(const PrimeTable& table, u64 xmin, u64 xmax) {
    check_theta_ratio_args(table, xmin, xmax);
    const u64 chunk = 1u << 20;
    const u64 nchunks = (xmax - xmin) / chunk + 1;
    std::vector<ThetaRatioBounds> partial(static_cast<std::size_t>(nchunks));

#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < static_cast<std::size_t>(nchunks); ++c) {
        const u64 lo = xmin + c * chunk;
        const u64 hi = std::min(xmax, lo + chunk - 1);
        partial[c] = scan_theta_ratio(table, lo, hi);
    }

    ThetaRatioBounds b = partial[0];
    for (std::size_t c = 1; c < partial.size(); ++c) {
        if (partial[c].c1 < b.c1) {
            b.c1 = partial[c].c1;
            b.argmin = partial[c].argmin;
        }
        if (partial[c].c2 > b.c2) {
            b.c2 = partial[c].c2;
            b.argmax = partial[c].argmax;
        }
    }
    return b;
}

PrimorialLogBounds primorial_log_bounds(const PrimeTable& table, std::size_t kmax) {
    if (kmax < 1) throw std::invalid_argument("primorial_log_bounds: kmax must be >= 1");
    if (kmax > table.count()) {
        throw std::out_of_range("primorial_log_bounds: kmax exceeds table");
    }
    PrimorialLogBounds b;
    b.alpha = std::numeric_limits<double>::infinity();
    b.beta = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= kmax; ++k) {
        const double denom =
            std::ceil(static_cast<double>(k) * std::log(static_cast<double>(k + 1)));
        const double ratio = table.theta_prefix[k - 1] / denom;
        if (ratio < b.alpha) {
            b.alpha = ratio;
            b.argmin = k;
        }
        if (ratio > b.beta) {
            b.beta = ratio;
            b.argmax = k;
        }
    }
    return b;
}

}  // namespace primq
