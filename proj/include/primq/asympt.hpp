#pragma once

// Asymptotic comparison toolkit.
//
// The counting function Q(n) satisfies log Q(n) ~ c * sqrt(log n / log log n)
// with c = 2*pi/sqrt(3).  This module evaluates that main term, builds tables
// comparing it against exact counts, fits the cruder two-sided constants, and
// evaluates -- by direct summation, with the same truncation indices the
// inductive argument uses -- the double sums S1/S2/S3 that drive the upper
// and lower bound recursions.  It also exposes the exact geometric closed
// forms those tail estimates rely on.

#include <cmath>
#include <numbers>
#include <vector>

#include <gmpxx.h>

#include "primq/primes.hpp"
#include "primq/qcount.hpp"

namespace primq {

// c = 2*pi/sqrt(3), the constant in the main term.
inline const double kMainConstant = 2.0 * std::numbers::pi / std::sqrt(3.0);

// c * sqrt(log n / log log n).  Requires n >= 16 so that log log n >= 1;
// smaller n are rejected (domain error) rather than producing complex or
// misleading values.
double main_term(const mpz_class& n);

struct AsymptoteRow {
    mpz_class n;
    u64 q = 0;            // exact count of members <= n
    double log_q = 0;     // log of q
    double main_term = 0; // c * sqrt(log n / log log n)
    double ratio = 0;     // log_q / main_term
};

// One comparison row; the count goes through `counter` so a caller can share
// one memo cache across many rows.
AsymptoteRow compare_row(const mpz_class& n, QCounter& counter);

// Rows in input order.  Each n must be >= 16.  If row i exhausts the counting
// capacity, the capacity_error is rethrown with `partial` = i, the number of
// rows that had already completed.
std::vector<AsymptoteRow> compare_table(const std::vector<mpz_class>& ns,
                                        QCounter& counter);
std::vector<AsymptoteRow> compare_table(const std::vector<mpz_class>& ns);

// Crude two-sided constants: fit over the given n the largest C1 and smallest
// C2 consistent with
//     C1 * sqrt(log n / log log n) <= log Q(n) <= C2 * sqrt(log n * log log n).
struct CrudeBounds {
    double c_lower = 0;  // min over rows of log_q / sqrt(log n / log log n)
    double c_upper = 0;  // max over rows of log_q / sqrt(log n * log log n)
};
CrudeBounds crude_bounds_fit(const std::vector<mpz_class>& ns, QCounter& counter);
CrudeBounds crude_bounds_fit(const std::vector<mpz_class>& ns);

// Exact geometric closed forms (all require 0 < t < 1):
//   geometric_weighted_sum(t)      = sum_{a>=1} a t^a        = t / (1-t)^2
//   geometric_weighted_tail(t, m)  = sum_{k>=m} k t^k        = t^m (m(1-t)+t) / (1-t)^2
//   geometric_cubed_sum(t)         = sum_{k>=1} k^3 t^k      = t (1+4t+t^2) / (1-t)^4
// Note the tail is the exact form: the simpler t^m/(1-t)^2 understates the
// tail for every m >= 2, so it is not usable as an upper bound.
double geometric_weighted_sum(double t);
double geometric_weighted_tail(double t, u64 m);
double geometric_cubed_sum(double t);

enum class InductionDirection { upper, lower };

// Raw ingredients of one step of the inductive bound at a concrete n.
//
// Upper direction (shift constant C = e^10 + 1, m = log(Cn)):
//   double_sum = sum_{s>=1} sum_k theta_k * exp(-(1+eps) c s f'(m) theta_k)
//   s1 = the s <= floor((log log n)^2) part of that sum
//   s2 = sum_{s >= ceil((log log n)^2)} beta * x_s / (1-x_s)^2,
//        x_s = exp(-alpha s f'(m)); s3 = 0
// Lower direction (C = e^1000 + 1, m = log(Cn), s' = log log n,
// k' = log^{3/4} n):
//   double_sum = sum_{s<=floor(s')} sum_{k<=floor(k')}
//                theta_k * exp(-(1-eps/2) c s f'(m) theta_k)
//                        * (1 + 2 c (s theta_k)^2 f''(m))
//   s1 = same s range, full k sum without the second-order factor
//   s2 = sum_{s<=floor(s')} beta * geometric_weighted_tail(x_s, ceil(k'))
//   s3 = 2 beta^3 c f''(m) * sum_{s<=floor(s')} s^2 * geometric_cubed_sum(x_s)
//        (f''(m) < 0, so s3 <= 0)
//
// log_w is the exact log of the product of members <= n, and rhs_bound is
// (1 - eps/2) * log n * exp((1+eps) * c * f(m)) with the non-constructive
// prefactor normalized to 1 -- reported for slack studies, never asserted.
struct InductionReport {
    mpz_class n;
    double epsilon = 0;
    double m = 0;          // log(Cn)
    double s1 = 0;
    double s2 = 0;
    double s3 = 0;
    double double_sum = 0;
    double log_w = 0;
    double rhs_bound = 0;
};

// alpha and beta are the two-sided constants with
// alpha * ceil(k log(k+1)) <= theta_k <= beta * ceil(k log(k+1)); fit them
// with primorial_log_bounds.  Requires n >= 16, 0 < epsilon < 1/2, and
// 0 < alpha <= beta.  The prime table must cover the truncated sums' tails
// (capacity error otherwise).
InductionReport induction_terms(const mpz_class& n, double epsilon,
                                InductionDirection direction,
                                double alpha, double beta,
                                const PrimeTable& table);

}  // namespace primq
