#include "primq/qcount.hpp"

#include <omp.h>

#include <algorithm>
#include <cassert>
#include <climits>
#include <queue>
#include <stdexcept>
#include <utility>

#include "primq/errors.hpp"
#include "primq/primes.hpp"

namespace primq {

namespace {

constexpr u128 U128_MAX = ~u128(0);

u64 checked_add(u64 a, u64 b) {
    u64 out;
    if (__builtin_add_overflow(a, b, &out)) {
        throw capacity_error("membership count does not fit in 64 bits");
    }
    return out;
}

}  // namespace

bool is_member(u64 m) {
    if (m == 0) return false;
    // Enough consecutive primes for any 64-bit member (the product of the
    // first 16 primes already exceeds 2^64).
    static const std::vector<u64> ps = first_primes(16);
    u64 q = m;
    u64 prev = U64_MAX;
    for (u64 p : ps) {
        u64 e = 0;
        while (q % p == 0) {
            q /= p;
            ++e;
        }
        if (e == 0) break;        // factorization must use consecutive primes
        if (e > prev) return false;  // exponents must be non-increasing
        prev = e;
        if (q == 1) break;
    }
    return q == 1;
}

bool is_member(const mpz_class& m) {
    if (sgn(m) <= 0) return false;
    if (m == 1) return true;
    // t consecutive primes force the value above 2^t, so bit length bounds t.
    const std::vector<u64> ps = first_primes(mpz_sizeinbase(m.get_mpz_t(), 2) + 1);
    mpz_class q = m;
    unsigned long prev = ULONG_MAX;
    for (u64 p : ps) {
        mpz_class pz(static_cast<unsigned long>(p));
        const unsigned long e = mpz_remove(q.get_mpz_t(), q.get_mpz_t(), pz.get_mpz_t());
        if (e == 0) break;
        if (e > prev) return false;
        prev = e;
        if (q == 1) break;
    }
    return q == 1;
}

QCounter::QCounter(QCounterConfig cfg)
    : list_limit_(cfg.list_limit), max_memo_states_(cfg.max_memo_states) {
    if (list_limit_ >= (1ULL << 63)) {
        throw std::invalid_argument("QCounter: list_limit must be < 2^63");
    }
    primes_ = first_primes(64);

    u64 cur64 = 1;
    for (std::size_t i = 0;; ++i) {
        ensure_prime(i);
        const u64 p = primes_[i];
        if (cur64 > U64_MAX / p) break;
        cur64 *= p;
        prim_u64_.push_back(cur64);
    }
    u128 cur128 = 1;
    for (std::size_t i = 0;; ++i) {
        ensure_prime(i);
        const u128 p = primes_[i];
        if (cur128 > U128_MAX / p) break;
        cur128 *= p;
        prim_u128_.push_back(cur128);
    }
    memo64_.resize(prim_u64_.size());
    memo128_.resize(prim_u128_.size());
    prim_mpz_.emplace_back(2);

    // Per-level sorted value lists built top-down: the list for level k holds
    // every product of ell_k, ell_{k+1}, ... that stays <= list_limit.
    std::size_t nlevels = 0;
    while (nlevels < prim_u64_.size() && prim_u64_[nlevels] <= list_limit_) ++nlevels;
    lists_.resize(nlevels);
    std::vector<u64> upper{1};
    for (std::size_t k = nlevels; k >= 1; --k) {
        const u64 ell = prim_u64_[k - 1];
        std::vector<u64> values;
        for (u64 pow = 1;;) {
            const u64 cap = list_limit_ / pow;
            for (u64 m : upper) {
                if (m <= cap) values.push_back(pow * m);
            }
            if (pow > list_limit_ / ell) break;
            pow *= ell;
        }
        std::sort(values.begin(), values.end());
        lists_[k - 1] = std::move(values);
        upper = lists_[k - 1];
    }
}

void QCounter::ensure_prime(std::size_t idx) {
    while (primes_.size() <= idx) {
        for (u64 c = primes_.back() + 2;; c += 2) {
            bool prime = true;
            for (u64 p : primes_) {
                if (p * p > c) break;
                if (c % p == 0) {
                    prime = false;
                    break;
                }
            }
            if (prime) {
                primes_.push_back(c);
                break;
            }
        }
    }
}

const mpz_class& QCounter::prim_mpz(std::size_t k) {
    while (prim_mpz_.size() < k) {
        const std::size_t i = prim_mpz_.size();  // need ell_{i+1} = ell_i * p_{i+1}
        ensure_prime(i);
        mpz_class next = prim_mpz_.back() * mpz_class(static_cast<unsigned long>(primes_[i]));
        prim_mpz_.push_back(std::move(next));
    }
    return prim_mpz_[k - 1];
}

void QCounter::note_memo_state() {
    if (++memo_states_ > max_memo_states_) {
        throw capacity_error(
            "QCounter: memo state count exceeds the configured budget "
            "(raise QCounterConfig::max_memo_states and memory accordingly)",
            memo_states_, 0);
    }
}

u64 QCounter::list_count(u64 b, std::size_t k) const {
    if (k > lists_.size()) return 1;  // only the empty product fits
    const std::vector<u64>& v = lists_[k - 1];
    return static_cast<u64>(std::upper_bound(v.begin(), v.end(), b) - v.begin());
}

u64 QCounter::count_bound_u64(u64 b, std::size_t k) {
    if (b <= list_limit_) return list_count(b, k);
    if (k > prim_u64_.size() || prim_u64_[k - 1] > b) return 1;
    FlatMap<u64>& memo = memo64_[k - 1];
    if (const u64* hit = memo.find(b)) return *hit;
    const u64 ell = prim_u64_[k - 1];
    u64 total = 0;
    for (u64 pow = 1;;) {
        total = checked_add(total, count_bound_u64(b / pow, k + 1));
        if (pow > b / ell) break;
        pow *= ell;
    }
    note_memo_state();
    memo.insert(b, total);
    return total;
}

u64 QCounter::count_bound_u128(u128 b, std::size_t k) {
    if (b <= static_cast<u128>(U64_MAX)) return count_bound_u64(static_cast<u64>(b), k);
    if (k > prim_u128_.size() || prim_u128_[k - 1] > b) return 1;
    FlatMap<u128>& memo = memo128_[k - 1];
    if (const u64* hit = memo.find(b)) return *hit;
    const u128 ell = prim_u128_[k - 1];
    u64 total = 0;
    for (u128 pow = 1;;) {
        total = checked_add(total, count_bound_u128(b / pow, k + 1));
        if (pow > b / ell) break;
        pow *= ell;
    }
    note_memo_state();
    memo.insert(b, total);
    return total;
}

u64 QCounter::count_bound_mpz(const mpz_class& b, std::size_t k) {
    if (fits_u128(b)) return count_bound_u128(to_u128(b), k);
    // By value: the recursion below can grow prim_mpz_ and invalidate references.
    const mpz_class ell = prim_mpz(k);
    if (ell > b) return 1;
    CountKey key{b, k};
    const auto it = memo_mpz_.find(key);
    if (it != memo_mpz_.end()) return it->second;
    u64 total = 0;
    mpz_class pow(1), child;
    while (pow <= b) {
        child = b / pow;
        total = checked_add(total, count_bound_mpz(child, k + 1));
        pow *= ell;
    }
    note_memo_state();
    memo_mpz_.emplace(std::move(key), total);
    return total;
}

u64 QCounter::count(const mpz_class& n) {
    if (sgn(n) < 0) throw std::invalid_argument("count: n must be >= 0");
    if (sgn(n) == 0) return 0;
    return count_bound_mpz(n, 1);
}

u64 QCounter::count(u64 n) {
    if (n == 0) return 0;
    return count_bound_u64(n, 1);
}

u64 QCounter::constrained_count(const mpz_class& b, std::size_t i, std::size_t k,
                                std::uint32_t s, LocalMemo& local) {
    CountKey key{b, i};
    const auto it = local.find(key);
    if (it != local.end()) return it->second;

    // By value: recursive calls can grow prim_mpz_ and invalidate references.
    const mpz_class ell = prim_mpz(i);
    u64 total = 0;
    if (i == k) {
        // Constrained level: the digit b_k starts at s instead of 0.
        if (s <= mpz_sizeinbase(b.get_mpz_t(), 2)) {  // else ell^s >= 2^s > b
            mpz_class pow, child;
            mpz_pow_ui(pow.get_mpz_t(), ell.get_mpz_t(), s);
            while (pow <= b) {
                child = b / pow;
                total = checked_add(total, count_bound_mpz(child, i + 1));
                pow *= ell;
            }
        }
    } else {
        mpz_class pow(1), child;
        while (pow <= b) {
            child = b / pow;
            total = checked_add(total, constrained_count(child, i + 1, k, s, local));
            pow *= ell;
        }
    }
    local.emplace(std::move(key), total);
    return total;
}

u64 QCounter::count_with_bk_at_least(const mpz_class& n, std::size_t k, std::uint32_t s) {
    if (k < 1) throw std::invalid_argument("count_with_bk_at_least: k is 1-based");
    if (sgn(n) < 0) throw std::invalid_argument("count_with_bk_at_least: n must be >= 0");
    if (sgn(n) == 0) return 0;
    LocalMemo local;
    return constrained_count(n, 1, k, s, local);
}

u64 QCounter::count_with_bk_exact(const mpz_class& n, std::size_t k, std::uint32_t s) {
    if (s == UINT32_MAX) throw std::invalid_argument("count_with_bk_exact: s too large");
    const u64 at_least = count_with_bk_at_least(n, k, s);
    const u64 above = count_with_bk_at_least(n, k, s + 1);
    assert(at_least >= above);
    return at_least - above;
}

QCounter::Stats QCounter::stats() const {
    Stats st;
    for (const auto& m : memo64_) st.memo64_states += m.size();
    for (const auto& m : memo128_) st.memo128_states += m.size();
    st.memo_mpz_states = memo_mpz_.size();
    for (const auto& v : lists_) st.list_values += v.size();
    return st;
}

u64 count_exact(const mpz_class& n) {
    QCounter counter;
    return counter.count(n);
}

u64 count_brute_serial(u64 n, u64 cap) {
    if (n > cap) {
        throw capacity_error("count_brute_serial: n exceeds the scan cap", 0, n);
    }
    u64 c = 0;
    for (u64 m = 1; m <= n; ++m) {
        if (is_member(m)) ++c;
    }
    return c;
}

u64 count_brute(u64 n, u64 cap) {
    if (n > cap) {
        throw capacity_error("count_brute: n exceeds the scan cap", 0, n);
    }
    u64 c = 0;
#pragma omp parallel for schedule(static) reduction(+ : c)
    for (u64 m = 1; m <= n; ++m) {
        if (is_member(m)) ++c;
    }
    return c;
}

std::vector<u64> count_brute_many(const std::vector<u64>& ns, u64 cap) {
    if (ns.empty()) return {};
    std::vector<u64> cps;
    cps.reserve(ns.size());
    u64 maxn = 0;
    for (u64 n : ns) {
        maxn = std::max(maxn, n);
        if (n > 0) cps.push_back(n);
    }
    if (maxn > cap) {
        throw capacity_error("count_brute_many: max(ns) exceeds the scan cap", 0, maxn);
    }
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());

    const u64 B = 1u << 16;  // chunk width
    const std::size_t nchunks = static_cast<std::size_t>(maxn / B) + 1;
    std::vector<u64> chunk_total(nchunks, 0);
    std::vector<u64> at_checkpoint(cps.size(), 0);  // members in the checkpoint's chunk, up to it

#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < nchunks; ++c) {
        const u64 lo = c * B + 1;
        const u64 hi = std::min(maxn, (c + 1) * B);
        if (lo > hi) continue;
        std::size_t ci = static_cast<std::size_t>(
            std::lower_bound(cps.begin(), cps.end(), lo) - cps.begin());
        const std::size_t ce = static_cast<std::size_t>(
            std::upper_bound(cps.begin(), cps.end(), hi) - cps.begin());
        u64 cnt = 0;
        for (u64 m = lo; m <= hi; ++m) {
            if (is_member(m)) ++cnt;
            if (ci < ce && cps[ci] == m) {
                at_checkpoint[ci] = cnt;
                ++ci;
            }
        }
        chunk_total[c] = cnt;
    }

    std::vector<u64> chunk_prefix(nchunks + 1, 0);
    for (std::size_t c = 0; c < nchunks; ++c) {
        chunk_prefix[c + 1] = chunk_prefix[c] + chunk_total[c];
    }

    std::map<u64, u64> by_checkpoint;
    by_checkpoint[0] = 0;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const std::size_t c = static_cast<std::size_t>((cps[i] - 1) / B);
        by_checkpoint[cps[i]] = chunk_prefix[c] + at_checkpoint[i];
    }

    std::vector<u64> out;
    out.reserve(ns.size());
    for (u64 n : ns) out.push_back(by_checkpoint.at(n));
    return out;
}

void enumerate_members_stream(const mpz_class& n,
                              const std::function<bool(const MemberRep&)>& fn) {
    if (sgn(n) <= 0) return;

    std::vector<u64> primes = first_primes(4);
    std::vector<mpz_class> prims{mpz_class(2)};
    auto ell = [&](std::size_t k) -> const mpz_class& {
        while (prims.size() < k) {
            const std::size_t i = prims.size();
            if (primes.size() <= i) primes = first_primes(i + 1);
            mpz_class next = prims.back() * mpz_class(static_cast<unsigned long>(primes[i]));
            prims.push_back(std::move(next));
        }
        return prims[k - 1];
    };

    struct Node {
        mpz_class v;
        std::vector<std::uint32_t> exps;
    };
    const auto cmp = [](const Node& a, const Node& b) { return a.v > b.v; };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
    heap.push(Node{mpz_class(1), {}});

    while (!heap.empty()) {
        const Node cur = heap.top();
        heap.pop();
        if (!fn(MemberRep{cur.v, cur.exps})) return;
        // Children multiply by ell_j for j >= the current top digit, which
        // generates each member exactly once (its parent divides out the
        // highest primorial).
        const std::size_t t = cur.exps.size();
        for (std::size_t j = std::max<std::size_t>(t, 1);; ++j) {
            mpz_class child = cur.v * ell(j);
            if (child > n) break;  // primorials increase with j
            Node nxt;
            nxt.v = std::move(child);
            nxt.exps = cur.exps;
            nxt.exps.resize(j, 0);
            nxt.exps[j - 1] += 1;
            heap.push(std::move(nxt));
        }
    }
}

std::vector<MemberRep> enumerate_members(const mpz_class& n, u64 cap) {
    std::vector<MemberRep> out;
    bool exceeded = false;
    enumerate_members_stream(n, [&](const MemberRep& m) {
        if (out.size() >= cap) {
            exceeded = true;
            return false;
        }
        out.push_back(m);
        return true;
    });
    if (exceeded) {
        throw capacity_error("enumerate_members: member count exceeds cap", cap, 0);
    }
    return out;
}

}  // namespace primq
