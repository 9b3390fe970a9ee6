#include "primq/analytic.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "primq/errors.hpp"

namespace primq {

namespace {

void require_delta(double delta) {
    if (!(delta > 0.0) || !(delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0, 1)");
    }
}

// Tail of sum_{j>=1} exp(-delta (theta + j L)) given r = exp(-delta L).
double geometric_tail(double lead, double r) { return lead * r / (1.0 - r); }

}  // namespace

// ---------- truncated sums over primes ----------

u64 phi_limit_hint(double delta, double rel_tol) {
    require_delta(delta);
    if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
    // The stopping point sits near theta with exp(-delta theta) ~ rel_tol
    // relative to a sum of size >= 1/delta; a generous envelope suffices.
    double theta_star = (std::log(1.0 / rel_tol) + 2.0 * std::log(1.0 / delta) + 30.0) / delta;
    theta_star = std::min(theta_star, 4.0e18);
    u64 hint = static_cast<u64>(theta_star) + 100;
    return std::max<u64>(hint, 10000);
}

namespace {

TruncatedSum phi_sum_impl(const PrimeTable& table, double delta, double rel_tol,
                          bool weighted) {
    require_delta(delta);
    if (!(rel_tol > 0.0) || !(rel_tol < 1.0)) {
        throw std::invalid_argument("rel_tol must lie in (0, 1)");
    }
    if (table.count() < 2) {
        throw capacity_error("prime table too small for a tail bound", 0,
                             phi_limit_hint(delta, rel_tol));
    }

    TruncatedSum out;
    out.delta = delta;

    double sum = 0.0, comp = 0.0;  // Kahan
    const std::size_t count = table.count();
    for (std::size_t k = 1; k < count; ++k) {
        const double theta = table.theta_prefix[k - 1];
        const double term = weighted ? theta * std::exp(-delta * theta)
                                     : std::exp(-delta * theta);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;

        // Tail bound after k terms: every later theta exceeds theta by at
        // least j * L with L = log p_{k+1}, and for the weighted sum the
        // summand is decreasing once delta * theta >= 2 > 1.
        if (!weighted || delta * theta >= 2.0) {
            const double L = std::log(static_cast<double>(table.primes[k]));
            const double r = std::exp(-delta * L);
            const double lead = std::exp(-delta * theta);
            double tail = geometric_tail(lead, r);
            if (weighted) {
                tail = theta * tail + L * lead * r / ((1.0 - r) * (1.0 - r));
            }
            if (tail <= rel_tol * sum) {
                out.value = sum;
                out.tail_bound = tail;
                out.terms = k;
                return out;
            }
        }
    }
    throw capacity_error("prime table exhausted before the tail bound converged",
                         count, phi_limit_hint(delta, rel_tol));
}

}  // namespace

TruncatedSum phi_weighted(const PrimeTable& table, double delta, double rel_tol) {
    return phi_sum_impl(table, delta, rel_tol, true);
}

TruncatedSum phi_plain(const PrimeTable& table, double delta, double rel_tol) {
    return phi_sum_impl(table, delta, rel_tol, false);
}

// ---------- telescoped identity ----------

IdentityCheck telescoped_identity_check(const PrimeTable& table, double delta,
                                        std::size_t terms) {
    require_delta(delta);
    if (terms < 1) throw std::invalid_argument("terms must be at least 1");
    if (terms + 1 > table.count()) {
        throw capacity_error("identity needs one prime beyond the last term",
                             table.count(), terms + 1);
    }

    const long double d = static_cast<long double>(delta);
    // c_k built multiplicatively so consecutive ratios match p_{k+1}^{-delta}
    // to extended precision; the telescoping then cancels to rounding noise.
    auto dk = [&](std::size_t k) {  // 1/(p_k^delta - 1), k 1-based
        const long double lp = std::log(static_cast<long double>(table.primes[k - 1]));
        return 1.0L / std::expm1(d * lp);
    };

    long double lhs = 0.0L, lhs_c = 0.0L;   // Kahan
    long double rhs_sum = 0.0L, rhs_c = 0.0L;
    long double c = 1.0L;
    long double d_next = dk(1);
    for (std::size_t k = 1; k <= terms; ++k) {
        const long double lp = std::log(static_cast<long double>(table.primes[k - 1]));
        c *= std::exp(-d * lp);
        const long double d_k = d_next;
        d_next = dk(k + 1);

        long double y = c - lhs_c;
        long double t = lhs + y;
        lhs_c = (t - lhs) - y;
        lhs = t;

        const long double term = c * (d_k - d_next);
        y = term - rhs_c;
        t = rhs_sum + y;
        rhs_c = (t - rhs_sum) - y;
        rhs_sum = t;
    }
    const long double rhs = dk(1) - rhs_sum - c * d_next;

    IdentityCheck out;
    out.delta = delta;
    out.terms = terms;
    out.lhs = static_cast<double>(lhs);
    out.rhs = static_cast<double>(rhs);
    out.residual_abs = static_cast<double>(std::fabs(lhs - rhs));
    out.residual_rel = out.residual_abs / std::fabs(out.lhs);
    return out;
}

// ---------- adaptive Gauss-Kronrod quadrature ----------

namespace {

// 15-point Kronrod extension of 7-point Gauss on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
double gk15(const F& f, double a, double b, double* err) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kron = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double fsum = f(center - dx) + f(center + dx);
        kron += kWgk[j] * fsum;
        if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
    }
    kron *= half;
    gauss *= half;
    *err = std::fabs(kron - gauss);
    return kron;
}

template <typename F>
double adaptive_segment(const F& f, double a, double b, double tol, int depth) {
    double err = 0.0;
    const double v = gk15(f, a, b, &err);
    if (err <= tol || b - a <= 1e-14 * (std::fabs(a) + std::fabs(b))) return v;
    if (depth >= 60) {
        throw numeric_error("adaptive quadrature failed to converge");
    }
    const double m = 0.5 * (a + b);
    return adaptive_segment(f, a, m, 0.5 * tol, depth + 1) +
           adaptive_segment(f, m, b, 0.5 * tol, depth + 1);
}

// Integrate f over [a, b] with absolute tolerance abs_tol.
template <typename F>
double integrate(const F& f, double a, double b, double abs_tol) {
    if (!(b > a)) return 0.0;
    return adaptive_segment(f, a, b, abs_tol, 0);
}

// Two-pass driver: a non-adaptive composite scan fixes the scale (so the
// absolute tolerances below are meaningful at any magnitude), a crude
// adaptive pass refines it, and the final pass hits rel_tol.
template <typename F>
double integrate_rel(const F& f, double a, double b, double rel_tol) {
    double composite = 0.0;
    const int panels = 32;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + (b - a) * i / panels;
        const double hi = a + (b - a) * (i + 1) / panels;
        double ignored = 0.0;
        composite += gk15(f, lo, hi, &ignored);
    }
    double scale = std::max(std::fabs(composite), 1e-300);
    const double rough = integrate(f, a, b, 1e-4 * scale);
    scale = std::max(std::fabs(rough), 1e-300);
    return integrate(f, a, b, rel_tol * scale);
}

}  // namespace

namespace {

// The integral comparisons target the small-delta regime only.
void require_small_delta(double delta) {
    if (!(delta > 0.0) || !(delta < 0.1)) {
        throw std::invalid_argument("delta must lie in (0, 0.1)");
    }
}

}  // namespace

IntegralCheck weighted_exp_integral(double c, double delta) {
    require_small_delta(delta);
    if (!(c > 0.0)) throw std::invalid_argument("c must be positive");

    const double dc = delta * c;
    auto integrand = [&](double x) {
        const double lx = std::log(x);
        return (dc * x + 1.0) * std::exp(-dc * x) / (delta * delta * x * lx * lx);
    };

    const double split = std::max(2.0, 50.0 / dc);
    double total = integrate_rel(integrand, 2.0, split, 1e-10);

    // Tail: substitute x = split + u/(dc); the weight e^{-u} makes [0, 60]
    // capture everything above double rounding (remainder < e^{-60} of the
    // lead).  The factor e^{-dc*split} is pulled out explicitly.
    const double lead = std::exp(-dc * split) / dc;
    if (lead > 0.0) {
        auto tail_integrand = [&](double u) {
            const double x = split + u / dc;
            const double lx = std::log(x);
            return (dc * x + 1.0) * std::exp(-u) / (delta * delta * x * lx * lx);
        };
        total += lead * integrate_rel(tail_integrand, 0.0, 60.0, 1e-10);
    }

    IntegralCheck out;
    out.integral = total;
    const double log_inv = std::log(1.0 / delta);
    out.predicted = 1.0 / (std::log(2.0) * delta * delta) + 1.0 / (delta * delta * log_inv);
    out.rel_gap = std::fabs(out.integral - out.predicted) * delta * delta * log_inv;
    return out;
}

IntegralCheck exp_xlogx_integral(double delta) {
    require_small_delta(delta);
    auto integrand = [&](double x) { return std::exp(-delta * x * std::log(x)); };

    // Find X with delta * X log X = 45 (monotone for x >= 1); beyond it the
    // remainder is under e^{-45}/(delta log X), far below the answer's scale.
    double lo = 1.0, hi = std::max(std::exp(1.0), 45.0 / delta) + 10.0;
    for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (delta * mid * std::log(mid) < 45.0 ? lo : hi) = mid;
    }
    const double split = hi;

    IntegralCheck out;
    out.integral = integrate_rel(integrand, 1.0, split, 1e-10);
    out.predicted = 1.0 / (delta * std::log(1.0 / delta));
    out.rel_gap = std::fabs(out.integral - out.predicted) / out.predicted;
    return out;
}

// ---------- f(x) = sqrt(x / log x) ----------

namespace {

void require_f_domain(double x) {
    if (!(x > 1.0)) throw std::domain_error("f(x) requires x > 1");
}

long double fl_val(long double x) { return std::sqrt(x / std::log(x)); }

long double fl_d1(long double x) {
    const long double L = std::log(x);
    return (1.0L - 1.0L / L) / (2.0L * std::sqrt(x * L));
}

long double fl_d2(long double x) {
    const long double L = std::log(x);
    return (3.0L / (L * L) - 1.0L) / (4.0L * x * std::sqrt(x * L));
}

constexpr double kTieScale = 1e-13;

InequalityReport make_report(const char* family, double arg1, double arg2,
                             long double lhs, long double rhs, long double margin) {
    InequalityReport r;
    r.family = family;
    r.arg1 = arg1;
    r.arg2 = arg2;
    r.lhs = static_cast<double>(lhs);
    r.rhs = static_cast<double>(rhs);
    r.margin = static_cast<double>(margin);
    const double scale =
        std::max({std::fabs(r.lhs), std::fabs(r.rhs), 1.0}) * kTieScale;
    r.marginal = std::fabs(r.margin) <= scale;
    r.holds = r.margin >= 0.0 || r.marginal;
    return r;
}

}  // namespace

double f_val(double x) {
    require_f_domain(x);
    return static_cast<double>(fl_val(x));
}

double f_d1(double x) {
    require_f_domain(x);
    return static_cast<double>(fl_d1(x));
}

double f_d2(double x) {
    require_f_domain(x);
    return static_cast<double>(fl_d2(x));
}

InequalityReport check_taylor_upper(double m, double x) {
    if (!(m >= 10.0)) throw std::domain_error("taylor upper requires m >= 10");
    if (!(x >= 0.0) || !(x <= m - 10.0)) {
        throw std::domain_error("taylor upper requires 0 <= x <= m - 10");
    }
    const long double lm = m, lx = x;
    const long double lhs = fl_val(lm - lx);
    const long double rhs = fl_val(lm) - lx * fl_d1(lm);
    return make_report("taylor_upper", m, x, lhs, rhs, rhs - lhs);
}

InequalityReport check_taylor_lower(double m, double x) {
    if (!(m >= 1000.0)) throw std::domain_error("taylor lower requires m >= 1000");
    if (!(x >= 0.0) || !(x <= m / 10.0)) {
        throw std::domain_error("taylor lower requires 0 <= x <= m / 10");
    }
    const long double lm = m, lx = x;
    // Lower bound, so lhs/rhs swap roles: margin = f(m-x) - expansion.
    const long double expansion = fl_val(lm) - lx * fl_d1(lm) + lx * lx * fl_d2(lm);
    const long double fmx = fl_val(lm - lx);
    return make_report("taylor_lower", m, x, expansion, fmx, fmx - expansion);
}

// ---------- exponential-ratio inequalities ----------

std::vector<InequalityReport> check_exp_inequalities(double z) {
    if (!(z > 0.0)) throw std::domain_error("z must be positive");

    const long double lz = z;
    const long double E = std::expm1(lz);  // e^z - 1
    const long double ez = E + 1.0L;
    const long double z2 = lz * lz;
    const long double inv_z2 = 1.0L / z2;
    const long double g1 = ez / (E * E);
    const long double num2 = lz * (ez + 1.0L) - E;
    const long double g2 = ez * num2 / (E * E * E);
    const long double h = num2 / E;  // g2 / g1

    // Margins; below z = 1e-3 the direct differences lose all their digits,
    // so order-6 series (error far below the tie threshold there) take over.
    long double m1, m2, m3, m4, m6, m7;
    if (z < 1e-3) {
        const long double z4 = z2 * z2, z6 = z4 * z2;
        m1 = z2 / 240.0L - z4 / 6048.0L + z6 / 172800.0L;
        m2 = 1.0L / 12.0L - m1;
        const long double g2_dev = z2 / 80.0L - 5.0L * z4 / 6048.0L + 7.0L * z6 / 172800.0L;
        m3 = 1.0L / 6.0L - g2_dev;
        m4 = 11.0L / 12.0L + g2_dev;
        m6 = z2 / 6.0L - z4 / 360.0L + z6 / 15120.0L;
        m7 = z2 - m6;
    } else {
        m1 = g1 - (inv_z2 - 1.0L / 12.0L);
        m2 = inv_z2 - g1;
        m3 = g2 - (inv_z2 - 1.0L / 12.0L);
        m4 = (inv_z2 + 1.0L) - g2;
        m6 = h - 1.0L;
        m7 = (1.0L + z2) - h;
    }

    std::vector<InequalityReport> out;
    out.reserve(7);
    out.push_back(make_report("eq1_lower", z, 0, inv_z2 - 1.0L / 12.0L, g1, m1));
    out.push_back(make_report("eq1_upper", z, 0, g1, inv_z2, m2));
    out.push_back(make_report("eq2_lower", z, 0, inv_z2 - 1.0L / 12.0L, g2, m3));
    out.push_back(make_report("eq2_upper", z, 0, g2, inv_z2 + 1.0L, m4));
    if (z < 1.0) {
        // No cancellation here: the margin is itself of order 1/z^4.
        const long double lhs3 = ez * ez * ez / (E * E * E * E);
        const long double rhs3 = 3.0L / (z2 * z2);
        out.push_back(make_report("eq3", z, 0, lhs3, rhs3, rhs3 - lhs3));
    }
    out.push_back(make_report("eq4_lower", z, 0, 1.0L, h, m6));
    out.push_back(make_report("eq4_upper", z, 0, h, 1.0L + z2, m7));
    return out;
}

// ---------- grid scans ----------

namespace {

bool family_matches(const std::string& family, const char* report_family) {
    if (family == "all") return true;
    const std::string rf(report_family);
    return rf.compare(0, family.size(), family) == 0 &&
           (rf.size() == family.size() || rf[family.size()] == '_');
}

void validate_family(const std::string& family, double zmin, double zmax, double step) {
    if (family != "eq1" && family != "eq2" && family != "eq3" && family != "eq4" &&
        family != "all") {
        throw std::invalid_argument("unknown inequality family: " + family);
    }
    if (!(zmin > 0.0) || !(step > 0.0) || !(zmax >= zmin)) {
        throw std::invalid_argument("grid requires zmin > 0, step > 0, zmax >= zmin");
    }
    // "all" simply skips eq3 at z >= 1; asking for eq3 alone there is an error.
    if (family == "eq3" && !(zmax < 1.0)) {
        throw std::invalid_argument("eq3 is only defined for z < 1");
    }
}

struct GridAccum {
    std::size_t points = 0;
    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    double arg1 = 0;
    double arg2 = 0;

    void take(const InequalityReport& r) {
        ++points;
        if (!r.holds) ++violations;
        if (r.margin < min_margin) {  // strict: first (smallest-z) winner kept
            min_margin = r.margin;
            arg1 = r.arg1;
            arg2 = r.arg2;
        }
    }
    // Merge a later chunk into an earlier one; strict compare keeps the
    // earlier argmin on ties, matching the serial scan.
    void merge(const GridAccum& later) {
        points += later.points;
        violations += later.violations;
        if (later.min_margin < min_margin) {
            min_margin = later.min_margin;
            arg1 = later.arg1;
            arg2 = later.arg2;
        }
    }
    GridSummary summary() const {
        GridSummary s;
        s.points = points;
        s.violations = violations;
        s.min_margin = points ? min_margin : 0.0;
        s.min_margin_arg1 = arg1;
        s.min_margin_arg2 = arg2;
        return s;
    }
};

void scan_point(const std::string& family, double z, GridAccum& acc) {
    for (const auto& r : check_exp_inequalities(z)) {
        if (family_matches(family, r.family)) acc.take(r);
    }
}

std::size_t grid_count(double zmin, double zmax, double step) {
    return static_cast<std::size_t>(std::llround((zmax - zmin) / step)) + 1;
}

}  // namespace

GridSummary exp_inequality_grid_serial(const std::string& family, double zmin,
                                       double zmax, double step) {
    validate_family(family, zmin, zmax, step);
    const std::size_t n = grid_count(zmin, zmax, step);
    GridAccum acc;
    for (std::size_t i = 0; i < n; ++i) {
        scan_point(family, zmin + static_cast<double>(i) * step, acc);
    }
    return acc.summary();
}

GridSummary exp_inequality_grid(const std::string& family, double zmin, double zmax,
                                double step) {
    validate_family(family, zmin, zmax, step);
    const std::size_t n = grid_count(zmin, zmax, step);
    const std::size_t chunk = 4096;
    const std::size_t nchunks = (n + chunk - 1) / chunk;
    std::vector<GridAccum> per_chunk(nchunks);

#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < nchunks; ++c) {
        const std::size_t end = std::min(n, (c + 1) * chunk);
        GridAccum acc;
        for (std::size_t i = c * chunk; i < end; ++i) {
            scan_point(family, zmin + static_cast<double>(i) * step, acc);
        }
        per_chunk[c] = acc;
    }

    GridAccum total;
    for (const auto& acc : per_chunk) total.merge(acc);
    return total.summary();
}

GridSummary taylor_grid(const std::string& direction, const std::vector<double>& ms,
                        std::size_t xsteps) {
    const bool upper = direction == "taylor_upper";
    if (!upper && direction != "taylor_lower") {
        throw std::invalid_argument("unknown taylor direction: " + direction);
    }
    if (xsteps == 0) throw std::invalid_argument("xsteps must be positive");
    if (ms.empty()) throw std::invalid_argument("taylor grid needs at least one m");

    GridAccum acc;
    for (double m : ms) {
        const double xmax = upper ? m - 10.0 : m / 10.0;
        for (std::size_t j = 0; j <= xsteps; ++j) {
            const double x = xmax * static_cast<double>(j) / static_cast<double>(xsteps);
            acc.take(upper ? check_taylor_upper(m, x) : check_taylor_lower(m, x));
        }
    }
    return acc.summary();
}

}  // namespace primq
