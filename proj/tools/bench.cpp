// Benchmark comparing the OpenMP-parallel kernels against their serial
// reference implementations.  Each pair is timed and its results are checked
// for exact agreement; a mismatch makes the run fail with exit code 1.

#include <cstdio>
#include <string>

#include <omp.h>

#include "primq/analytic.hpp"
#include "primq/primes.hpp"
#include "primq/qcount.hpp"
#include "primq/wfactor.hpp"

using namespace primq;

namespace {

int failures = 0;

void report(const char* name, double serial_s, double parallel_s, bool match) {
    std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n",
                name, serial_s, parallel_s,
                parallel_s > 0 ? serial_s / parallel_s : 0.0,
                match ? "match" : "MISMATCH");
    if (!match) ++failures;
}

template <typename F>
double timed(F&& f) {
    const double t0 = omp_get_wtime();
    f();
    return omp_get_wtime() - t0;
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());

    // Sieve + theta prefix.
    PrimeTable ts, tp;
    const double sieve_serial = timed([&] { ts = build_prime_table_serial(50000000); });
    const double sieve_parallel = timed([&] { tp = build_prime_table(50000000); });
    report("prime table 5e7", sieve_serial, sieve_parallel,
           ts.primes == tp.primes && ts.theta_prefix == tp.theta_prefix);

    // Brute-force membership scan.
    u64 bs = 0, bp = 0;
    const double brute_serial = timed([&] { bs = count_brute_serial(10000000); });
    const double brute_parallel = timed([&] { bp = count_brute(10000000); });
    report("brute count 1e7", brute_serial, brute_parallel, bs == bp);

    // Theta ratio scan.
    ThetaRatioBounds rs{}, rp{};
    const double theta_serial =
        timed([&] { rs = theta_ratio_bounds_serial(tp, 2, 2000000); });
    const double theta_parallel =
        timed([&] { rp = theta_ratio_bounds(tp, 2, 2000000); });
    report("theta ratio scan 2e6", theta_serial, theta_parallel,
           rs.c1 == rp.c1 && rs.c2 == rp.c2);

    // Factorization identity verification.
    u64 vs = 1, vp = 1;
    const double verify_serial =
        timed([&] { vs = verify_factorization_range_serial(2000); });
    const double verify_parallel =
        timed([&] { vp = verify_factorization_range(2000); });
    report("factorization verify 2e3", verify_serial, verify_parallel,
           vs == 0 && vp == 0);

    // Inequality grid.
    GridSummary gs{}, gp{};
    const double grid_serial = timed(
        [&] { gs = exp_inequality_grid_serial("all", 0.001, 50.0, 0.001); });
    const double grid_parallel =
        timed([&] { gp = exp_inequality_grid("all", 0.001, 50.0, 0.001); });
    report("inequality grid 3e5", grid_serial, grid_parallel,
           gs.points == gp.points && gs.violations == gp.violations &&
               gs.min_margin == gp.min_margin &&
               gs.min_margin_arg1 == gp.min_margin_arg1 &&
               gs.min_margin_arg2 == gp.min_margin_arg2);

    if (failures) {
        std::printf("\n%d kernel(s) disagree with their serial reference\n",
                    failures);
        return 1;
    }
    std::printf("\nall parallel kernels agree with their serial references\n");
    return 0;
}
