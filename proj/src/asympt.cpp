#include "primq/asympt.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "primq/analytic.hpp"
#include "primq/bigint.hpp"
#include "primq/errors.hpp"
#include "primq/wfactor.hpp"

namespace primq {

namespace {

void require_asymptotic_n(const mpz_class& n) {
    if (n < 16) {
        throw std::domain_error(
            "asymptotic operations need n >= 16 (so log log n >= 1); got " +
            n.get_str());
    }
}

void require_unit_interval(double t) {
    if (!(t > 0.0) || !(t < 1.0)) {
        throw std::domain_error("geometric ratio must lie in (0, 1)");
    }
}

// sum_k theta_k * exp(-delta * theta_k) over the primorial logs theta_k, with
// the same rigorous geometric tail control as the public truncated sums but
// no upper cap on delta: the induction scales (1 +- eps) * c * s * f'(m)
// routinely exceed 1 for moderate n.
double weighted_primorial_sum(const PrimeTable& table, double delta,
                              double rel_tol) {
    if (table.count() < 2) {
        throw capacity_error("prime table too small for a tail bound", 0,
                             phi_limit_hint(std::min(delta, 0.999), rel_tol));
    }
    double sum = 0.0, comp = 0.0;  // Kahan
    const std::size_t count = table.count();
    for (std::size_t k = 1; k < count; ++k) {
        const double theta = table.theta_prefix[k - 1];
        const double term = theta * std::exp(-delta * theta);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;

        // Later thetas exceed theta by at least j * L with L = log p_{k+1};
        // the summand is decreasing once delta * theta >= 2 > 1.
        if (delta * theta >= 2.0) {
            const double L = std::log(static_cast<double>(table.primes[k]));
            const double r = std::exp(-delta * L);
            const double lead = std::exp(-delta * theta);
            const double tail = theta * lead * r / (1.0 - r) +
                                L * lead * r / ((1.0 - r) * (1.0 - r));
            if (tail <= rel_tol * sum) return sum;
        }
    }
    throw capacity_error("prime table exhausted before the tail bound converged",
                         count, phi_limit_hint(std::min(delta, 0.999), rel_tol));
}

constexpr double kInnerRelTol = 1e-12;
constexpr double kSeriesStopRel = 1e-13;

}  // namespace

double main_term(const mpz_class& n) {
    require_asymptotic_n(n);
    const double log_n = log_mpz(n);
    return kMainConstant * std::sqrt(log_n / std::log(log_n));
}

AsymptoteRow compare_row(const mpz_class& n, QCounter& counter) {
    AsymptoteRow row;
    row.n = n;
    row.main_term = main_term(n);
    row.q = counter.count(n);
    row.log_q = std::log(static_cast<double>(row.q));
    row.ratio = row.log_q / row.main_term;
    return row;
}

std::vector<AsymptoteRow> compare_table(const std::vector<mpz_class>& ns,
                                        QCounter& counter) {
    for (const auto& n : ns) require_asymptotic_n(n);
    std::vector<AsymptoteRow> rows;
    rows.reserve(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        try {
            rows.push_back(compare_row(ns[i], counter));
        } catch (const capacity_error& e) {
            throw capacity_error(std::string(e.what()) + " (row " +
                                     std::to_string(i) + " of the table; " +
                                     std::to_string(i) + " rows completed)",
                                 i, e.required);
        }
    }
    return rows;
}

std::vector<AsymptoteRow> compare_table(const std::vector<mpz_class>& ns) {
    QCounter counter;
    return compare_table(ns, counter);
}

CrudeBounds crude_bounds_fit(const std::vector<mpz_class>& ns,
                             QCounter& counter) {
    if (ns.empty()) {
        throw std::invalid_argument("crude_bounds_fit needs at least one n");
    }
    const auto rows = compare_table(ns, counter);
    CrudeBounds out;
    bool first = true;
    for (const auto& row : rows) {
        const double log_n = log_mpz(row.n);
        const double llog = std::log(log_n);
        const double lo = row.log_q / std::sqrt(log_n / llog);
        const double hi = row.log_q / std::sqrt(log_n * llog);
        if (first) {
            out.c_lower = lo;
            out.c_upper = hi;
            first = false;
        } else {
            out.c_lower = std::min(out.c_lower, lo);
            out.c_upper = std::max(out.c_upper, hi);
        }
    }
    return out;
}

CrudeBounds crude_bounds_fit(const std::vector<mpz_class>& ns) {
    QCounter counter;
    return crude_bounds_fit(ns, counter);
}

double geometric_weighted_sum(double t) {
    require_unit_interval(t);
    const double om = 1.0 - t;
    return t / (om * om);
}

double geometric_weighted_tail(double t, u64 m) {
    require_unit_interval(t);
    if (m == 0) throw std::invalid_argument("tail start index must be >= 1");
    const double om = 1.0 - t;
    const double md = static_cast<double>(m);
    return std::pow(t, md) * (md * om + t) / (om * om);
}

double geometric_cubed_sum(double t) {
    require_unit_interval(t);
    const double om = 1.0 - t;
    const double om2 = om * om;
    return t * (1.0 + 4.0 * t + t * t) / (om2 * om2);
}

InductionReport induction_terms(const mpz_class& n, double epsilon,
                                InductionDirection direction,
                                double alpha, double beta,
                                const PrimeTable& table) {
    require_asymptotic_n(n);
    if (!(epsilon > 0.0) || !(epsilon < 0.5)) {
        throw std::domain_error("epsilon must lie in (0, 1/2)");
    }
    if (!(alpha > 0.0) || !(alpha <= beta)) {
        throw std::invalid_argument("need 0 < alpha <= beta");
    }

    const double c = kMainConstant;
    const double log_n = log_mpz(n);
    const double llog = std::log(log_n);

    InductionReport rep;
    rep.n = n;
    rep.epsilon = epsilon;

    if (direction == InductionDirection::upper) {
        // Shift constant C = e^10 + 1, so log C = 10 + log(1 + e^-10).
        rep.m = 10.0 + std::log1p(std::exp(-10.0)) + log_n;
        const double fp = f_d1(rep.m);
        const double delta_scale = (1.0 + epsilon) * c * fp;

        // Split of the s range at (log log n)^2: the leading block keeps the
        // exact weighted sums, the tail block switches to the geometric
        // majorant.  A non-integer split point partitions the integers
        // exactly; an integer split point lands in both blocks, which only
        // makes the s1 + s2 majorant more generous.
        const double T = llog * llog;
        const u64 s1_max = static_cast<u64>(std::floor(T));
        const u64 s2_start = static_cast<u64>(std::ceil(T));

        // double_sum = sum over all s >= 1 of the exact inner weighted sum;
        // its s <= s1_max prefix is s1.  Consecutive inner sums shrink by at
        // least exp(-delta_scale * log 2), which gives the stopping rule a
        // rigorous geometric tail.
        const double ratio = std::exp(-delta_scale * std::numbers::ln2);
        double acc = 0.0;
        for (u64 s = 1;; ++s) {
            if (s > 1000000) {
                throw numeric_error("upper double sum failed to converge");
            }
            const double inner =
                weighted_primorial_sum(table, delta_scale * static_cast<double>(s),
                                       kInnerRelTol);
            acc += inner;
            if (s == s1_max) rep.s1 = acc;
            const double tail = inner * ratio / (1.0 - ratio);
            if (s >= s1_max && tail <= kSeriesStopRel * acc) break;
        }
        rep.double_sum = acc;

        // s2: geometric majorant for the s >= s2_start block.  Terms decrease
        // with ratio at most exp(-alpha * f'(m)).
        const double r2 = std::exp(-alpha * fp);
        double s2 = 0.0;
        for (u64 s = s2_start;; ++s) {
            if (s > s2_start + 100000000) {
                throw numeric_error("upper s2 majorant failed to converge");
            }
            const double x = std::exp(-alpha * fp * static_cast<double>(s));
            const double term = beta * geometric_weighted_sum(x);
            s2 += term;
            if (term * r2 / (1.0 - r2) <= kSeriesStopRel * s2) break;
        }
        rep.s2 = s2;
        rep.s3 = 0.0;
    } else {
        // Shift constant C = e^1000 + 1; log(1 + e^-1000) vanishes in double.
        rep.m = 1000.0 + log_n;
        const double fp = f_d1(rep.m);
        const double fpp = f_d2(rep.m);
        const double delta_scale = (1.0 - 0.5 * epsilon) * c * fp;

        // Truncation indices: s runs to s' = log log n, k to k' = log^{3/4} n.
        // The double sum keeps integer indices inside both cutoffs; the s2
        // correction starts at the first integer >= k'.
        const u64 s_max = static_cast<u64>(std::floor(llog));
        const double k_prime = std::pow(log_n, 0.75);
        const u64 k_floor = static_cast<u64>(std::floor(k_prime));
        const u64 k_start = static_cast<u64>(std::ceil(k_prime));
        if (k_floor + 1 > table.count()) {
            throw capacity_error("prime table smaller than the k cutoff",
                                 table.count(), k_floor + 1);
        }

        double s1 = 0.0, s2 = 0.0, s3_sum = 0.0, dsum = 0.0;
        for (u64 s = 1; s <= s_max; ++s) {
            const double sd = static_cast<double>(s);
            const double delta = delta_scale * sd;
            s1 += weighted_primorial_sum(table, delta, kInnerRelTol);

            const double x = std::exp(-alpha * fp * sd);
            s2 += beta * geometric_weighted_tail(x, k_start);
            s3_sum += sd * sd * geometric_cubed_sum(x);

            for (u64 k = 1; k <= k_floor; ++k) {
                const double theta = table.theta_prefix[k - 1];
                const double st = sd * theta;
                dsum += theta * std::exp(-delta * theta) *
                        (1.0 + 2.0 * c * st * st * fpp);
            }
        }
        rep.s1 = s1;
        rep.s2 = s2;
        rep.s3 = 2.0 * beta * beta * beta * c * fpp * s3_sum;  // fpp < 0
        rep.double_sum = dsum;
    }

    QCounter counter;
    rep.log_w = log_member_product(n, counter);
    // Reference value for slack studies in both directions: the recursion
    // target (1 - eps/2) log(n) exp((1+eps) c f(m)) with the non-constructive
    // prefactor normalized to 1.  Reported, never asserted.
    rep.rhs_bound = (1.0 - 0.5 * epsilon) * log_n *
                    std::exp((1.0 + epsilon) * c * f_val(rep.m));
    return rep;
}

}  // namespace primq
