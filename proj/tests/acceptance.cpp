// Acceptance gate: ten end-to-end criteria, one pass/fail line each.
//
// Every tolerance and grid below is pinned; the exit code is the number of
// failed criteria, so a zero exit means the whole gate is green.  Details of
// any failure go to stderr; stdout carries exactly one line per criterion.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "primq/analytic.hpp"
#include "primq/asympt.hpp"
#include "primq/bigint.hpp"
#include "primq/errors.hpp"
#include "primq/primes.hpp"
#include "primq/qcount.hpp"
#include "primq/wfactor.hpp"

using namespace primq;

namespace {

int g_failures = 0;

void run_criterion(int index, const char* label, const std::function<bool(std::ostream&)>& body) {
    std::ostringstream detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail << "exception: " << e.what() << "\n";
        ok = false;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %2d/10  %s  [%.1fs]\n", ok ? "PASS" : "FAIL", index, label, secs);
    std::fflush(stdout);
    if (!ok) {
        ++g_failures;
        std::fprintf(stderr, "criterion %d detail:\n%s", index, detail.str().c_str());
    }
}

mpz_class pow10z(unsigned e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

// Runs the CLI with stderr discarded and returns {exit code, stdout bytes}.
std::pair<int, std::string> run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + PRIMQ_CLI_PATH + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

bool close_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::fabs(b);
}

}  // namespace

int main() {
    // 1. The exponent map of the product of all members <= n, obtained by
    //    enumerating members, equals the one obtained from counts alone, as
    //    exact big-integer exponent maps, for every n in [1, 20000].
    run_criterion(1, "exponent-map identity, direct vs counting, n in [1,20000]",
                  [](std::ostream& err) {
                      const u64 first_bad = verify_factorization_range(20000);
                      if (first_bad != 0) {
                          err << "first mismatching n: " << first_bad << "\n";
                          return false;
                      }
                      return true;
                  });

    // 2. Memoized counting agrees with the brute-force membership scan:
    //    exhaustively for n <= 1e5 and for 1000 fixed-seed random n <= 1e7.
    //    Budget: under 2 minutes.
    run_criterion(2, "memoized count vs brute scan, n<=1e5 exhaustive + 1000 random n<=1e7",
                  [](std::ostream& err) {
                      const auto t0 = std::chrono::steady_clock::now();
                      QCounter counter;

                      std::vector<u64> ns(100000);
                      for (u64 i = 0; i < ns.size(); ++i) ns[i] = i + 1;
                      const std::vector<u64> brute = count_brute_many(ns);
                      u64 mismatches = 0;
                      for (std::size_t i = 0; i < ns.size(); ++i) {
                          if (counter.count(ns[i]) != brute[i]) {
                              if (mismatches++ == 0)
                                  err << "first mismatch at n=" << ns[i] << " exact "
                                      << counter.count(ns[i]) << " brute " << brute[i] << "\n";
                          }
                      }

                      std::mt19937 gen(20260819u);
                      std::uniform_int_distribution<u64> dist(1, 10000000ull);
                      std::vector<u64> rs(1000);
                      for (u64& r : rs) r = dist(gen);
                      const std::vector<u64> rb = count_brute_many(rs);
                      for (std::size_t i = 0; i < rs.size(); ++i) {
                          if (counter.count(rs[i]) != rb[i]) {
                              if (mismatches++ == 0)
                                  err << "first mismatch at random n=" << rs[i] << "\n";
                          }
                      }

                      const double secs = std::chrono::duration<double>(
                                              std::chrono::steady_clock::now() - t0)
                                              .count();
                      if (mismatches != 0) {
                          err << mismatches << " mismatches total\n";
                          return false;
                      }
                      if (secs >= 120.0) {
                          err << "took " << secs << "s, budget 120s\n";
                          return false;
                      }
                      return true;
                  });

    // 3. Pivot identity: the count of members <= n whose k-th primorial digit
    //    is >= s, computed by a constrained recursion, equals Q(n / ell_k^s);
    //    and the digit stratification sums back to Q(n).  Full grid n <= 5000,
    //    k <= 5, s <= 12.
    run_criterion(3, "pivot identity + digit stratification, n<=5000, k<=5, s<=12",
                  [](std::ostream& err) {
                      QCounter counter;
                      const std::array<u64, 5> prims = {2, 6, 30, 210, 2310};
                      u64 bad_pivot = 0, bad_strat = 0;
                      for (u64 ni = 1; ni <= 5000; ++ni) {
                          const mpz_class n(ni);
                          const u64 q_n = counter.count(n);
                          for (std::size_t k = 1; k <= 5; ++k) {
                              mpz_class power(1);
                              for (std::uint32_t s = 1; s <= 12; ++s) {
                                  power *= prims[k - 1];
                                  const u64 lhs = counter.count_with_bk_at_least(n, k, s);
                                  const u64 rhs = counter.count(mpz_class(n / power));
                                  if (lhs != rhs && bad_pivot++ == 0)
                                      err << "pivot mismatch n=" << ni << " k=" << k
                                          << " s=" << s << ": " << lhs << " vs " << rhs << "\n";
                              }
                              u64 strat = 0;
                              for (std::uint32_t s = 0; s <= 12; ++s)
                                  strat += counter.count_with_bk_exact(n, k, s);
                              if (strat != q_n && bad_strat++ == 0)
                                  err << "stratification mismatch n=" << ni << " k=" << k
                                      << ": " << strat << " vs " << q_n << "\n";
                          }
                      }
                      if (bad_pivot + bad_strat != 0) {
                          err << bad_pivot << " pivot and " << bad_strat
                              << " stratification mismatches\n";
                          return false;
                      }
                      return true;
                  });

    // 4. Inequality suite: the four exponential-ratio families on their pinned
    //    z grids and both Taylor families on their (m, x) grids, all evaluated
    //    in extended precision, with zero violations.
    run_criterion(4, "inequality families eq1-eq4 + Taylor grids, zero violations",
                  [](std::ostream& err) {
                      struct Scan {
                          const char* family;
                          double zmax;
                          std::size_t points;
                      };
                      const std::array<Scan, 4> scans = {{{"eq1", 50.0, 100000},
                                                          {"eq2", 50.0, 100000},
                                                          {"eq4", 50.0, 100000},
                                                          {"eq3", 0.999, 999}}};
                      bool ok = true;
                      for (const Scan& s : scans) {
                          const GridSummary g =
                              exp_inequality_grid(s.family, 1e-3, s.zmax, 1e-3);
                          if (g.violations != 0 || g.points != s.points) {
                              err << s.family << ": " << g.violations << " violations over "
                                  << g.points << " points (expected " << s.points
                                  << "), worst margin " << g.min_margin << " at z="
                                  << g.min_margin_arg1 << "\n";
                              ok = false;
                          }
                      }
                      const GridSummary up = taylor_grid("taylor_upper", {10.0, 100.0, 1e4, 1e6}, 4);
                      if (up.violations != 0 || up.points != 20) {
                          err << "taylor upper: " << up.violations << " violations over "
                              << up.points << " points\n";
                          ok = false;
                      }
                      const GridSummary lo = taylor_grid("taylor_lower", {1e3, 1e4, 1e6}, 2);
                      if (lo.violations != 0 || lo.points != 9) {
                          err << "taylor lower: " << lo.violations << " violations over "
                              << lo.points << " points\n";
                          ok = false;
                      }
                      return ok;
                  });

    // 5. Telescoped identity: residual at most 1e-12 of the left-hand side for
    //    delta in {0.3, 0.5, 0.9} and K in {10, 1e3, 1e4}.
    run_criterion(5, "telescoped identity residual <= 1e-12*|lhs|, 9 (delta,K) pairs",
                  [](std::ostream& err) {
                      const PrimeTable table = build_prime_table(130000);
                      bool ok = true;
                      for (double delta : {0.3, 0.5, 0.9}) {
                          for (std::size_t terms : {std::size_t{10}, std::size_t{1000},
                                                    std::size_t{10000}}) {
                              const IdentityCheck c =
                                  telescoped_identity_check(table, delta, terms);
                              if (!(c.residual_rel <= 1e-12)) {
                                  err << "delta=" << delta << " K=" << terms
                                      << " residual_rel=" << c.residual_rel << "\n";
                                  ok = false;
                              }
                          }
                      }
                      return ok;
                  });

    // Shared table sized for the weighted sum at the smallest delta below.
    const PrimeTable big = build_prime_table(phi_limit_hint(1e-6, 1e-10));

    // 6. Weighted-sum trend: Phi(delta)*delta^2*log(1/delta) stays in (0.5, 2)
    //    on delta = 1e-2..1e-6 and is closer to 1 at 1e-6 than at 1e-2.
    run_criterion(6, "weighted sum: Phi*delta^2*log(1/delta) in (0.5,2), tightening",
                  [&big](std::ostream& err) {
                      const std::array<double, 5> deltas = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
                      std::array<double, 5> ratio{};
                      bool ok = true;
                      for (std::size_t i = 0; i < deltas.size(); ++i) {
                          const double d = deltas[i];
                          ratio[i] = phi_weighted(big, d).value * d * d * std::log(1.0 / d);
                          if (!(ratio[i] > 0.5 && ratio[i] < 2.0)) {
                              err << "ratio(" << d << ") = " << ratio[i] << " outside (0.5,2)\n";
                              ok = false;
                          }
                      }
                      if (!(std::fabs(ratio[4] - 1.0) < std::fabs(ratio[0] - 1.0))) {
                          err << "no tightening: |" << ratio[4] << "-1| vs |" << ratio[0]
                              << "-1|\n";
                          ok = false;
                      }
                      return ok;
                  });

    // 7. Plain-sum and integral-estimate trends on the same delta grid, with
    //    the quadrature ratio of the x*log(x) integral estimate in (0.5, 2)
    //    and both families closer to 1 at 1e-5 than at 1e-2.
    run_criterion(7, "plain sum and integral estimate in (0.5,2), tightening",
                  [&big](std::ostream& err) {
                      const std::array<double, 5> deltas = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
                      std::array<double, 5> rphi{}, rint{};
                      bool ok = true;
                      for (std::size_t i = 0; i < deltas.size(); ++i) {
                          const double d = deltas[i];
                          rphi[i] = phi_plain(big, d).value * d * std::log(1.0 / d);
                          const IntegralCheck c = exp_xlogx_integral(d);
                          rint[i] = c.integral / c.predicted;
                          for (double r : {rphi[i], rint[i]}) {
                              if (!(r > 0.5 && r < 2.0)) {
                                  err << "ratio at delta=" << d << " is " << r
                                      << ", outside (0.5,2)\n";
                                  ok = false;
                              }
                          }
                      }
                      if (!(std::fabs(rphi[3] - 1.0) < std::fabs(rphi[0] - 1.0))) {
                          err << "plain sum not tightening: " << rphi[3] << " vs " << rphi[0]
                              << "\n";
                          ok = false;
                      }
                      if (!(std::fabs(rint[3] - 1.0) < std::fabs(rint[0] - 1.0))) {
                          err << "integral estimate not tightening: " << rint[3] << " vs "
                              << rint[0] << "\n";
                          ok = false;
                      }
                      return ok;
                  });

    // 8. Main-term comparison at n = 1e6, 1e12, 1e24, 1e48 with exact counts:
    //    each ratio log Q(n) / main term lies in (0.4, 1.3) and the distance
    //    to 1 never grows along the sequence.  Budget: under 5 minutes.
    run_criterion(8, "main-term ratio in (0.4,1.3), gap non-increasing, n=1e6..1e48",
                  [](std::ostream& err) {
                      const auto t0 = std::chrono::steady_clock::now();
                      const std::vector<mpz_class> ns = {pow10z(6), pow10z(12), pow10z(24),
                                                         pow10z(48)};
                      const std::vector<AsymptoteRow> rows = compare_table(ns);
                      bool ok = true;
                      double prev_gap = 1e9;
                      for (const AsymptoteRow& r : rows) {
                          if (!(r.ratio > 0.4 && r.ratio < 1.3)) {
                              err << "ratio(" << r.n << ") = " << r.ratio
                                  << " outside (0.4,1.3)\n";
                              ok = false;
                          }
                          const double gap = std::fabs(r.ratio - 1.0);
                          if (!(gap <= prev_gap)) {
                              err << "gap grew to " << gap << " at n=" << r.n << "\n";
                              ok = false;
                          }
                          prev_gap = gap;
                      }
                      const double secs = std::chrono::duration<double>(
                                              std::chrono::steady_clock::now() - t0)
                                              .count();
                      if (secs >= 300.0) {
                          err << "took " << secs << "s, budget 300s\n";
                          ok = false;
                      }
                      return ok;
                  });

    // 9. Derivative consistency: closed-form f' and f'' against central
    //    differences (1e-6 relative), and the weighted sum against the
    //    differenced plain sum (1e-4 relative).
    run_criterion(9, "f', f'' vs central differences; weighted sum = -d(plain)/d(delta)",
                  [&big](std::ostream& err) {
                      bool ok = true;
                      for (double x : {10.0, 100.0, 1e4, 1e6}) {
                          const double h = 3e-4 * x;
                          const double cd1 = (f_val(x + h) - f_val(x - h)) / (2 * h);
                          const double cd2 = (f_d1(x + h) - f_d1(x - h)) / (2 * h);
                          if (!close_rel(cd1, f_d1(x), 1e-6)) {
                              err << "f' mismatch at x=" << x << ": " << cd1 << " vs "
                                  << f_d1(x) << "\n";
                              ok = false;
                          }
                          if (!close_rel(cd2, f_d2(x), 1e-6)) {
                              err << "f'' mismatch at x=" << x << ": " << cd2 << " vs "
                                  << f_d2(x) << "\n";
                              ok = false;
                          }
                      }
                      for (double d : {0.1, 0.5, 0.9}) {
                          const double h = 1e-3 * d;
                          const double lo = phi_plain(big, d - h, 1e-13).value;
                          const double hi = phi_plain(big, d + h, 1e-13).value;
                          const double diffed = -(hi - lo) / (2 * h);
                          const double direct = phi_weighted(big, d, 1e-13).value;
                          if (!close_rel(diffed, direct, 1e-4)) {
                              err << "weighted/differenced mismatch at delta=" << d << ": "
                                  << diffed << " vs " << direct << "\n";
                              ok = false;
                          }
                      }
                      return ok;
                  });

    // 10. CLI determinism: three commands, each run twice, byte-identical
    //     stdout and exit code 0 both times.
    run_criterion(10, "CLI byte-determinism across repeated runs",
                  [](std::ostream& err) {
                      const std::array<const char*, 3> cmds = {
                          "wverify --max-n 500",
                          "table --pow10 6,12",
                          "phi --delta 0.5 --which capital",
                      };
                      bool ok = true;
                      for (const char* c : cmds) {
                          const auto a = run_cli(c);
                          const auto b = run_cli(c);
                          if (a.first != 0 || b.first != 0) {
                              err << "`" << c << "` exit codes " << a.first << ", " << b.first
                                  << "\n";
                              ok = false;
                          }
                          if (a.second != b.second) {
                              err << "`" << c << "` output differs between runs\n";
                              ok = false;
                          }
                          if (a.second.empty()) {
                              err << "`" << c << "` produced no output\n";
                              ok = false;
                          }
                      }
                      return ok;
                  });

    return g_failures;
}
