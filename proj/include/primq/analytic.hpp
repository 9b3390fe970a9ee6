#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "primq/primes.hpp"

namespace primq {

// ---------- truncated sums over primes ----------

struct TruncatedSum {
    double delta = 0;
    double value = 0;        // sum of the computed terms
    double tail_bound = 0;   // rigorous bound on the omitted remainder
    std::size_t terms = 0;   // number of primes summed
};

// phi_weighted(delta) = sum_k theta_k exp(-delta theta_k), theta_k the log of
// the k-th primorial; phi_plain drops the theta_k factor.  Requires
// 0 < delta < 1.  Terms are summed until a geometric tail bound (gaps of at
// least log p_{K+1}, and for the weighted sum the decreasing-term condition
// delta*theta_K >= 2) falls below rel_tol * value; the true sum then lies in
// [value, value + tail_bound].  A table too small for that raises
// capacity_error carrying a suggested limit.
TruncatedSum phi_weighted(const PrimeTable& table, double delta, double rel_tol = 1e-10);
TruncatedSum phi_plain(const PrimeTable& table, double delta, double rel_tol = 1e-10);

// Suggested prime-table limit for the sums above.
u64 phi_limit_hint(double delta, double rel_tol = 1e-10);

// ---------- telescoped identity ----------

// With c_k = (k-th primorial)^{-delta} and d_k = 1/(p_k^delta - 1), Abel
// summation gives, exactly for every finite K:
//   sum_{k<=K} c_k = d_1 - sum_{k<=K} c_k (d_k - d_{k+1}) - c_K d_{K+1}.
// Both sides are evaluated in extended precision from the primes alone and
// the residual reported.
struct IdentityCheck {
    double delta = 0;
    std::size_t terms = 0;
    double lhs = 0;
    double rhs = 0;
    double residual_abs = 0;
    double residual_rel = 0;  // residual_abs / |lhs|
};

// Requires 0 < delta < 1 and 1 <= terms <= table.count() - 1 (the right-hand
// side needs prime number terms+1).
IdentityCheck telescoped_identity_check(const PrimeTable& table, double delta,
                                        std::size_t terms);

// ---------- integral checks ----------

struct IntegralCheck {
    double integral = 0;
    double predicted = 0;
    double rel_gap = 0;  // |integral - predicted| relative to the comparison scale
};

// integral over [2, inf) of (delta*c*x + 1) e^{-delta*c*x} / (delta^2 x log^2 x),
// compared against 1/(log(2) delta^2) + 1/(delta^2 log(1/delta)); rel_gap is
// the difference scaled by delta^2 log(1/delta) (the secondary term's size).
// Note the comparison value keeps the + sign on the secondary term for
// reference purposes, but integration by parts gives the integral as
// (2dc+1)e^{-2dc}/(log(2) delta^2) MINUS c^2 * integral of x e^{-dcx}/log x,
// so the true secondary term is negative and rel_gap settles near 2 (from
// below) rather than near 0 as delta shrinks.  Adaptive quadrature on [2, A]
// with A = 50/(delta*c), then an exponential change of variable for the tail.
// Requires c > 0, 0 < delta < 0.1.
IntegralCheck weighted_exp_integral(double c, double delta);

// integral over [1, inf) of e^{-delta x log x}, compared against
// 1/(delta log(1/delta)); rel_gap = |integral - predicted| / predicted.
// Requires 0 < delta < 0.1.
IntegralCheck exp_xlogx_integral(double delta);

// ---------- f(x) = sqrt(x / log x) and inequality reports ----------

double f_val(double x);  // requires x > 1
double f_d1(double x);   // first derivative
double f_d2(double x);   // second derivative

struct InequalityReport {
    const char* family = "";
    double arg1 = 0;   // z, or m for the Taylor families
    double arg2 = 0;   // unused for the z families; x for Taylor
    double lhs = 0;
    double rhs = 0;
    double margin = 0;  // rhs - lhs, computed without catastrophic cancellation
    bool holds = false;     // margin >= 0, with ties counted as holding
    bool marginal = false;  // |margin| within the tie threshold of zero
};

// f(m - x) <= f(m) - x f'(m); requires m >= 10 and 0 <= x <= m - 10.
InequalityReport check_taylor_upper(double m, double x);

// f(m - x) >= f(m) - x f'(m) + x^2 f''(m); requires m >= 1000, 0 <= x <= m/10.
InequalityReport check_taylor_lower(double m, double x);

// The exponential-ratio inequalities, all with z > 0:
//   eq1_lower/upper:  1/z^2 - 1/12 <= e^z/(e^z-1)^2 <= 1/z^2
//   eq2_lower/upper:  1/z^2 - 1/12 <= e^z((e^z+1)z - e^z + 1)/(e^z-1)^3 <= 1/z^2 + 1
//   eq3 (only z < 1): e^{3z}/(e^z-1)^4 <= 3/z^4
//   eq4_lower/upper:  1 <= ratio of the eq2 to eq1 middles <= 1 + z^2
// Margins for z < 10^-3 come from order-6 series so they are cancellation-free.
std::vector<InequalityReport> check_exp_inequalities(double z);

struct GridSummary {
    std::size_t points = 0;      // inequality evaluations performed
    std::size_t violations = 0;  // reports with holds == false
    double min_margin = 0;
    double min_margin_arg1 = 0;
    double min_margin_arg2 = 0;
};

// Scan a z-family ("eq1", "eq2", "eq3", "eq4", or "all") over the grid
// z = zmin + i*step up to zmax.  Requires zmin > 0, step > 0, zmax >= zmin;
// eq3 additionally requires zmax < 1.  Parallel over index chunks with
// in-order merging, so ties resolve identically to the serial reference.
GridSummary exp_inequality_grid(const std::string& family, double zmin, double zmax,
                                double step);
GridSummary exp_inequality_grid_serial(const std::string& family, double zmin,
                                       double zmax, double step);

// Scan a Taylor family over m values; for each m the offset x runs through
// j * xmax / xsteps, j = 0..xsteps, with xmax = m - 10 (upper) or m/10 (lower).
GridSummary taylor_grid(const std::string& direction, const std::vector<double>& ms,
                        std::size_t xsteps);

}  // namespace primq
