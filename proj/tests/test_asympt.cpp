#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "primq/asympt.hpp"
#include "primq/bigint.hpp"
#include "primq/errors.hpp"
#include "primq/primes.hpp"
#include "primq/qcount.hpp"

using namespace primq;

namespace {

mpz_class pow10z(unsigned e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

const PrimeTable& shared_table() {
    static const PrimeTable table = build_prime_table(2'000'000);
    return table;
}

const PrimorialLogBounds& shared_log_bounds() {
    static const PrimorialLogBounds plb =
        primorial_log_bounds(shared_table(), 5000);
    return plb;
}

}  // namespace

TEST_CASE("main term closed forms and domain") {
    // Direct transcription of the formula at the smallest admissible n.
    const double ln16 = std::log(16.0);
    CHECK(main_term(16) ==
          doctest::Approx(kMainConstant * std::sqrt(ln16 / std::log(ln16)))
              .epsilon(1e-15));

    // At n = round(e^{e^2}) = 1618, log n is within 2e-5 of e^2, so the value
    // sits within a tenth of a percent of the closed form c * e / sqrt(2).
    const double closed = kMainConstant * std::exp(1.0) / std::sqrt(2.0);
    CHECK(main_term(1618) == doctest::Approx(closed).epsilon(1e-3));

    CHECK(main_term(pow10z(6)) ==
          doctest::Approx(8.3209431949654444).epsilon(1e-14));

    CHECK(kMainConstant == doctest::Approx(3.6275987284684357).epsilon(1e-16));

    CHECK_THROWS_AS(main_term(15), std::domain_error);
    CHECK_THROWS_AS(main_term(1), std::domain_error);
    CHECK_THROWS_AS(main_term(0), std::domain_error);
}

TEST_CASE("comparison rows match frozen counts and ratios") {
    QCounter counter;
    const std::vector<mpz_class> ns = {16, pow10z(6), pow10z(8), pow10z(12),
                                       pow10z(16)};
    const auto rows = compare_table(ns, counter);
    REQUIRE(rows.size() == ns.size());

    const u64 expect_q[] = {7, 289, 803, 4357, 17563};
    const double expect_ratio[] = {0.32532269987262097, 0.68098370044646894,
                                   0.73325121491095135, 0.80057506816833357,
                                   0.84297658680584797};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CAPTURE(i);
        CHECK(rows[i].n == ns[i]);  // input order preserved
        CHECK(rows[i].q == expect_q[i]);
        CHECK(rows[i].ratio == doctest::Approx(expect_ratio[i]).epsilon(1e-12));
        CHECK(rows[i].main_term > 0.0);
        CHECK(rows[i].ratio > 0.0);
        // log_q is consistent with the exact count through the big-integer
        // log conversion.
        const double via_mpz = log_mpz(mpz_class(rows[i].q));
        CHECK(rows[i].log_q ==
              doctest::Approx(via_mpz).epsilon(1e-12));
        CHECK(rows[i].ratio ==
              doctest::Approx(rows[i].log_q / rows[i].main_term).epsilon(1e-15));
    }
}

TEST_CASE("ratio drifts toward one as n doubles in exponent") {
    QCounter counter;
    const std::vector<mpz_class> ns = {pow10z(8), pow10z(16), pow10z(32)};
    const auto rows = compare_table(ns, counter);
    REQUIRE(rows.size() == 3);
    CHECK(rows[2].q == 1130847);
    double prev_gap = 10.0;
    for (const auto& row : rows) {
        CAPTURE(row.n.get_str());
        CHECK(row.ratio > 0.4);
        CHECK(row.ratio < 1.3);
        const double gap = std::fabs(1.0 - row.ratio);
        CHECK(gap <= prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("capacity failures flag completed rows") {
    QCounterConfig cfg;
    cfg.max_memo_states = 2000;
    QCounter counter(cfg);
    const std::vector<mpz_class> ns = {16, 100, pow10z(30)};
    try {
        compare_table(ns, counter);
        FAIL("expected a capacity error");
    } catch (const capacity_error& e) {
        CHECK(e.partial == 2);  // two rows had completed
    }

    // Invalid inputs are rejected before any row is computed.
    QCounter fresh;
    CHECK_THROWS_AS(compare_table({mpz_class(100), mpz_class(5)}, fresh),
                    std::domain_error);
}

TEST_CASE("crude two-sided constant fit") {
    QCounter counter;
    std::vector<mpz_class> span;
    for (unsigned e = 2; e <= 36; e += 2) span.push_back(pow10z(e));
    const auto cb = crude_bounds_fit(span, counter);
    CHECK(cb.c_lower == doctest::Approx(1.5966424471888676).epsilon(1e-12));
    CHECK(cb.c_upper == doctest::Approx(1.0454843819332775).epsilon(1e-12));
    CHECK(cb.c_lower > 0.0);
    CHECK(cb.c_upper > 0.0);
    CHECK(cb.c_upper < cb.c_lower);

    // Per-row sanity: the upper-normalized quotient never exceeds the
    // lower-normalized one, because sqrt(a/b) <= sqrt(a*b) once b >= 1.
    for (const auto& row : compare_table(span, counter)) {
        const double log_n = log_mpz(row.n);
        const double llog = std::log(log_n);
        CHECK(row.log_q / std::sqrt(log_n * llog) <=
              row.log_q / std::sqrt(log_n / llog));
    }

    const auto single = crude_bounds_fit({pow10z(6)}, counter);
    CHECK(single.c_lower == doctest::Approx(2.4703356058473407).epsilon(1e-12));
    CHECK(single.c_upper == doctest::Approx(0.94079640973390233).epsilon(1e-12));

    CHECK_THROWS_AS(crude_bounds_fit(std::vector<mpz_class>{}, counter),
                    std::invalid_argument);
}

TEST_CASE("geometric closed forms agree with partial summation") {
    for (double t : {0.1, 0.5, 0.9}) {
        CAPTURE(t);
        long double sum1 = 0, sum3 = 0;
        long double power = 1;
        for (int k = 1; k < 2000; ++k) {
            power *= t;
            sum1 += k * power;
            sum3 += static_cast<long double>(k) * k * k * power;
        }
        CHECK(geometric_weighted_sum(t) ==
              doctest::Approx(static_cast<double>(sum1)).epsilon(1e-10));
        CHECK(geometric_cubed_sum(t) ==
              doctest::Approx(static_cast<double>(sum3)).epsilon(1e-10));
        // The cubic sum obeys the standard majorant 6t/(1-t)^4.
        const double om = 1.0 - t;
        CHECK(geometric_cubed_sum(t) <= 6.0 * t / (om * om * om * om));

        for (u64 m : {u64(1), u64(2), u64(5), u64(17)}) {
            CAPTURE(m);
            long double tail = 0;
            long double pw = std::pow(static_cast<long double>(t),
                                      static_cast<long double>(m));
            for (u64 k = m; k < m + 2000; ++k) {
                tail += static_cast<long double>(k) * pw;
                pw *= t;
            }
            CHECK(geometric_weighted_tail(t, m) ==
                  doctest::Approx(static_cast<double>(tail)).epsilon(1e-10));
        }
        CHECK(geometric_weighted_tail(t, 1) ==
              doctest::Approx(geometric_weighted_sum(t)).epsilon(1e-15));
    }

    // The exact tail is strictly larger than t^m/(1-t)^2 for m >= 2; that
    // simpler expression is not an upper bound, which is why the closed form
    // is used everywhere.
    CHECK(geometric_weighted_tail(0.5, 3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(geometric_weighted_tail(0.5, 3) > std::pow(0.5, 3) / (0.5 * 0.5));

    CHECK_THROWS_AS(geometric_weighted_sum(0.0), std::domain_error);
    CHECK_THROWS_AS(geometric_weighted_sum(1.0), std::domain_error);
    CHECK_THROWS_AS(geometric_cubed_sum(-0.5), std::domain_error);
    CHECK_THROWS_AS(geometric_weighted_tail(1.5, 3), std::domain_error);
    CHECK_THROWS_AS(geometric_weighted_tail(0.5, 0), std::invalid_argument);
}

TEST_CASE("primorial log bounds feeding the induction sums") {
    const auto& plb = shared_log_bounds();
    CHECK(plb.alpha == doctest::Approx(0.59725315640935162).epsilon(1e-14));
    CHECK(plb.beta == doctest::Approx(1.1340484487718734).epsilon(1e-13));
    CHECK(plb.argmin == 2);
    CHECK(plb.argmax == 4371);
}

TEST_CASE("induction report upper regression at n = 1e6") {
    const auto& plb = shared_log_bounds();
    const auto r = induction_terms(pow10z(6), 0.25, InductionDirection::upper,
                                   plb.alpha, plb.beta, shared_table());
    // Frozen against an independent 40-digit evaluation of the same sums
    // (agreement ~1e-12, the inner-sum truncation tolerance).
    CHECK(r.m == doctest::Approx(23.815555956863491).epsilon(1e-14));
    CHECK(r.s1 == doctest::Approx(22.635318264196741).epsilon(1e-10));
    CHECK(r.s2 == doctest::Approx(291.09484548436274).epsilon(1e-10));
    CHECK(r.s3 == 0.0);
    CHECK(r.double_sum == doctest::Approx(25.95123516195159).epsilon(1e-10));
    CHECK(r.log_w == doctest::Approx(2993.3403685283438).epsilon(1e-12));
    CHECK(r.rhs_bound == doctest::Approx(3018946.6165640834).epsilon(1e-12));

    CHECK(r.s1 >= 0.0);
    CHECK(r.s2 >= 0.0);
    CHECK(r.double_sum <= r.s1 + r.s2);
    CHECK(r.double_sum >= r.s1);  // the full sum extends s1 by positive terms
    CHECK(r.epsilon == 0.25);
    CHECK(r.n == pow10z(6));
}

TEST_CASE("induction report lower regression at n = 1e6") {
    const auto& plb = shared_log_bounds();
    const auto r = induction_terms(pow10z(6), 0.25, InductionDirection::lower,
                                   plb.alpha, plb.beta, shared_table());
    CHECK(r.m == doctest::Approx(1013.8155105579642).epsilon(1e-14));
    CHECK(r.s1 == doctest::Approx(1080.8430332499604).epsilon(1e-10));
    CHECK(r.s2 == doctest::Approx(152335.94149570938).epsilon(1e-10));
    CHECK(r.s3 == doctest::Approx(-2531039.9431234966).epsilon(1e-10));
    CHECK(r.double_sum == doctest::Approx(68.332761478161984).epsilon(1e-12));
    CHECK(r.log_w == doctest::Approx(2993.3403685283438).epsilon(1e-12));
    CHECK(r.rhs_bound == doctest::Approx(8.2450927837822726e24).epsilon(1e-12));

    CHECK(r.s3 <= 0.0);
    CHECK(r.double_sum >= r.s1 - r.s2 + r.s3);
}

TEST_CASE("induction split inequalities across n and epsilon") {
    const auto& plb = shared_log_bounds();
    for (unsigned e : {9u, 15u}) {
        for (double eps : {0.05, 0.4}) {
            CAPTURE(e);
            CAPTURE(eps);
            const auto up = induction_terms(pow10z(e), eps,
                                            InductionDirection::upper,
                                            plb.alpha, plb.beta, shared_table());
            CHECK(up.s1 >= 0.0);
            CHECK(up.s2 >= 0.0);
            CHECK(up.s3 == 0.0);
            CHECK(up.double_sum <= up.s1 + up.s2);
            CHECK(up.double_sum >= up.s1);
            CHECK(std::isfinite(up.rhs_bound));
            CHECK(std::isfinite(up.log_w));

            const auto lo = induction_terms(pow10z(e), eps,
                                            InductionDirection::lower,
                                            plb.alpha, plb.beta, shared_table());
            CHECK(lo.s1 >= 0.0);
            CHECK(lo.s2 >= 0.0);
            CHECK(lo.s3 <= 0.0);
            CHECK(lo.double_sum >= lo.s1 - lo.s2 + lo.s3);
            CHECK(std::isfinite(lo.double_sum));
            CHECK(lo.log_w == up.log_w);  // same n, same exact product
        }
    }
}

TEST_CASE("induction argument validation") {
    const auto& plb = shared_log_bounds();
    const auto& table = shared_table();
    CHECK_THROWS_AS(induction_terms(15, 0.25, InductionDirection::upper,
                                    plb.alpha, plb.beta, table),
                    std::domain_error);
    for (double eps : {0.0, 0.5, -0.1}) {
        CAPTURE(eps);
        CHECK_THROWS_AS(induction_terms(pow10z(6), eps,
                                        InductionDirection::upper, plb.alpha,
                                        plb.beta, table),
                        std::domain_error);
    }
    CHECK_THROWS_AS(induction_terms(pow10z(6), 0.25, InductionDirection::upper,
                                    0.0, plb.beta, table),
                    std::invalid_argument);
    CHECK_THROWS_AS(induction_terms(pow10z(6), 0.25, InductionDirection::upper,
                                    plb.beta, plb.alpha, table),
                    std::invalid_argument);

    // A table with only {2, 3} cannot cover the truncated sums.
    const PrimeTable tiny = build_prime_table(4);
    REQUIRE(tiny.count() == 2);
    for (auto dir : {InductionDirection::upper, InductionDirection::lower}) {
        try {
            induction_terms(pow10z(6), 0.25, dir, plb.alpha, plb.beta, tiny);
            FAIL("expected a capacity error");
        } catch (const capacity_error& e) {
            CHECK(e.required > 2);
        }
    }
}
