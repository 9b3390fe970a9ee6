// Command-line front end for the primorial-product counting toolkit.
//
// Subcommands cover exact counts, member enumeration, product-factorization
// verification, truncated prime sums with tail bounds, the telescoped
// identity, inequality grid scans, main-term comparison tables, and
// induction-term reports.  Output is deterministic CSV (default) or JSON;
// run metadata goes to stderr only under --verbose.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 capacity
// exceeded, 4 numerical failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "primq/analytic.hpp"
#include "primq/asympt.hpp"
#include "primq/bigint.hpp"
#include "primq/errors.hpp"
#include "primq/primes.hpp"
#include "primq/qcount.hpp"
#include "primq/wfactor.hpp"

namespace {

using json = nlohmann::ordered_json;
using primq::u64;

constexpr int kSchemaVersion = 1;

// Hard ceiling for automatically chosen prime-table limits; beyond this the
// command reports a capacity error instead of silently sieving for minutes.
// PRIMQ_PRIME_LIMIT overrides the automatic choice entirely.
constexpr u64 kMaxAutoTableLimit = 300000000ULL;

// The identity holds exactly; residuals above this relative level indicate a
// numerical problem and flip the exit code to "verification failure".
constexpr double kIdentityRelTol = 1e-12;

struct OutputConfig {
    std::string format = "csv";
    std::string out_path;
    int precision = 12;
    bool verbose = false;
};

void add_output_options(CLI::App* sub, OutputConfig& cfg) {
    sub->add_option("--format", cfg.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out_path,
                    "write data to this file instead of stdout");
    sub->add_option("--precision", cfg.precision,
                    "significant digits for real-valued CSV columns")
        ->check(CLI::Range(4, 17));
    sub->add_flag("--verbose", cfg.verbose, "run metadata on stderr");
}

std::string fmt_real(double v, int prec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

struct Sink {
    explicit Sink(const OutputConfig& cfg) {
        if (!cfg.out_path.empty()) {
            file.open(cfg.out_path, std::ios::binary);
            if (!file) {
                throw std::invalid_argument("cannot open --out path: " +
                                            cfg.out_path);
            }
        }
    }
    std::ostream& os() { return file.is_open() ? file : std::cout; }
    std::ofstream file;
};

mpz_class pow10z(unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

// Accepts plain decimal, "10^k", and "a*10^k".
mpz_class parse_bigint(const std::string& s) {
    static const std::regex form(
        R"(^(?:([0-9]+)(?:\*10\^([0-9]+))?|10\^([0-9]+))$)");
    std::smatch m;
    if (!std::regex_match(s, m, form)) {
        throw std::invalid_argument("cannot parse '" + s +
                                    "': use decimal digits, 10^k, or a*10^k");
    }
    const auto parse_exp = [](const std::string& t) -> unsigned long {
        const unsigned long e = std::stoul(t);
        if (e > 1000000) {
            throw std::invalid_argument("exponent too large: 10^" + t);
        }
        return e;
    };
    if (m[3].matched) return pow10z(parse_exp(m[3].str()));
    mpz_class a(m[1].str());
    if (m[2].matched) a *= pow10z(parse_exp(m[2].str()));
    return a;
}

u64 table_limit_or_env(u64 computed) {
    if (const char* env = std::getenv("PRIMQ_PRIME_LIMIT")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (env[0] == '\0' || (end != nullptr && *end != '\0') || v < 10) {
            throw std::invalid_argument(
                "PRIMQ_PRIME_LIMIT must be an integer >= 10");
        }
        return v;
    }
    return computed;
}

primq::PrimeTable build_table(u64 limit, const OutputConfig& cfg) {
    const auto table = primq::build_prime_table(limit);
    if (cfg.verbose) {
        std::cerr << "prime table: limit " << limit << ", " << table.count()
                  << " primes\n";
    }
    return table;
}

void emit_json(Sink& sink, const json& j) { sink.os() << j.dump(2) << "\n"; }

// ---------- subcommand implementations ----------

struct QArgs {
    std::string n;
    OutputConfig out;
};

int cmd_q(const QArgs& a) {
    const mpz_class n = parse_bigint(a.n);
    primq::QCounter counter;
    const u64 q = counter.count(n);
    Sink sink(a.out);
    if (a.out.format == "csv") {
        sink.os() << q << "\n";
    } else {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "q";
        j["n"] = n.get_str();
        j["q"] = q;
        emit_json(sink, j);
    }
    return 0;
}

struct MembersArgs {
    std::string n;
    u64 limit = 1000000;
    OutputConfig out;
};

std::string exponents_text(const std::vector<std::uint32_t>& exps) {
    std::string s = "[";
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(exps[i]);
    }
    s += ']';
    return s;
}

int cmd_members(const MembersArgs& a) {
    const mpz_class n = parse_bigint(a.n);
    if (a.limit == 0) throw std::invalid_argument("--limit must be >= 1");
    Sink sink(a.out);
    bool truncated = false;
    u64 emitted = 0;
    if (a.out.format == "csv") {
        sink.os() << "value,exponents\n";
        primq::enumerate_members_stream(n, [&](const primq::MemberRep& m) {
            if (emitted == a.limit) {
                truncated = true;  // one more member exists beyond the cap
                return false;
            }
            sink.os() << m.value.get_str() << ","
                      << csv_field(exponents_text(m.exponents)) << "\n";
            ++emitted;
            return true;
        });
    } else {
        json rows = json::array();
        primq::enumerate_members_stream(n, [&](const primq::MemberRep& m) {
            if (emitted == a.limit) {
                truncated = true;
                return false;
            }
            json row;
            row["value"] = m.value.get_str();
            row["exponents"] = m.exponents;
            rows.push_back(std::move(row));
            ++emitted;
            return true;
        });
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "members";
        j["n"] = n.get_str();
        j["truncated"] = truncated;
        j["rows"] = std::move(rows);
        emit_json(sink, j);
    }
    if (truncated) {
        std::cerr << "members: stopped at " << a.limit
                  << " rows; more members exist below the bound\n";
        return 3;
    }
    return 0;
}

struct WverifyArgs {
    u64 max_n = 0;
    OutputConfig out;
};

int cmd_wverify(const WverifyArgs& a) {
    if (a.max_n == 0) throw std::invalid_argument("--max-n must be >= 1");
    const u64 first_fail = primq::verify_factorization_range(a.max_n);
    Sink sink(a.out);
    if (a.out.format == "csv") {
        if (first_fail == 0) {
            sink.os() << "OK " << a.max_n << "\n";
        } else {
            sink.os() << "FAIL " << first_fail << "\n";
        }
    } else {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "wverify";
        j["max_n"] = a.max_n;
        j["status"] = first_fail == 0 ? "ok" : "fail";
        j["first_failure"] = first_fail;
        emit_json(sink, j);
    }
    return first_fail == 0 ? 0 : 1;
}

struct PhiArgs {
    double delta = 0;
    double tol = 1e-10;
    std::string which = "capital";
    OutputConfig out;
};

int cmd_phi(const PhiArgs& a) {
    if (!(a.delta > 0.0) || !(a.delta < 1.0)) {
        throw std::domain_error("--delta must lie in (0, 1)");
    }
    const u64 hint = primq::phi_limit_hint(a.delta, a.tol);
    const u64 limit = table_limit_or_env(std::min(hint, kMaxAutoTableLimit));
    const auto table = build_table(limit, a.out);
    const auto ts = a.which == "capital"
                        ? primq::phi_weighted(table, a.delta, a.tol)
                        : primq::phi_plain(table, a.delta, a.tol);
    // Ratio against the leading-order size: delta^-2 / log(1/delta) for the
    // weighted sum, delta^-1 / log(1/delta) for the plain one.
    const double lg = std::log(1.0 / a.delta);
    const double ratio = a.which == "capital"
                             ? ts.value * a.delta * a.delta * lg
                             : ts.value * a.delta * lg;
    Sink sink(a.out);
    if (a.out.format == "csv") {
        const int p = a.out.precision;
        sink.os() << "delta,which,value,tail_bound,terms,ratio\n"
                  << fmt_real(ts.delta, p) << "," << a.which << ","
                  << fmt_real(ts.value, p) << "," << fmt_real(ts.tail_bound, p)
                  << "," << ts.terms << "," << fmt_real(ratio, p) << "\n";
    } else {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "phi";
        j["delta"] = ts.delta;
        j["which"] = a.which;
        j["value"] = ts.value;
        j["tail_bound"] = ts.tail_bound;
        j["terms"] = ts.terms;
        j["ratio"] = ratio;
        emit_json(sink, j);
    }
    return 0;
}

struct IdentityArgs {
    double delta = 0;
    u64 terms = 1000;
    OutputConfig out;
};

int cmd_identity(const IdentityArgs& a) {
    // Prime table sized from an upper bound on the (terms+1)-th prime.
    const double k = static_cast<double>(a.terms) + 1.0;
    double bound = 100.0;
    if (k >= 6.0) {
        bound = 1.2 * k * (std::log(k) + std::log(std::log(k))) + 100.0;
    }
    if (bound > static_cast<double>(kMaxAutoTableLimit)) {
        throw primq::capacity_error(
            "identity: requested terms exceed the automatic prime-table cap "
            "(set PRIMQ_PRIME_LIMIT to override)",
            0, static_cast<u64>(bound));
    }
    const u64 limit = table_limit_or_env(static_cast<u64>(bound));
    const auto table = build_table(limit, a.out);
    const auto chk = primq::telescoped_identity_check(
        table, a.delta, static_cast<std::size_t>(a.terms));
    Sink sink(a.out);
    if (a.out.format == "csv") {
        const int p = a.out.precision;
        sink.os() << "delta,terms,lhs,rhs,residual_abs,residual_rel\n"
                  << fmt_real(chk.delta, p) << "," << chk.terms << ","
                  << fmt_real(chk.lhs, p) << "," << fmt_real(chk.rhs, p) << ","
                  << fmt_real(chk.residual_abs, p) << ","
                  << fmt_real(chk.residual_rel, p) << "\n";
    } else {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "identity";
        j["delta"] = chk.delta;
        j["terms"] = chk.terms;
        j["lhs"] = chk.lhs;
        j["rhs"] = chk.rhs;
        j["residual_abs"] = chk.residual_abs;
        j["residual_rel"] = chk.residual_rel;
        emit_json(sink, j);
    }
    return chk.residual_rel <= kIdentityRelTol ? 0 : 1;
}

struct IneqArgs {
    std::string family = "all";
    double zmin = 0;
    double zmax = 0;
    double step = 0;
    OutputConfig out;
};

int cmd_ineq(const IneqArgs& a) {
    const auto g = primq::exp_inequality_grid(a.family, a.zmin, a.zmax, a.step);
    Sink sink(a.out);
    if (a.out.format == "csv") {
        const int p = a.out.precision;
        sink.os() << "family,zmin,zmax,step,points,violations,min_margin,"
                     "min_margin_arg1,min_margin_arg2\n"
                  << a.family << "," << fmt_real(a.zmin, p) << ","
                  << fmt_real(a.zmax, p) << "," << fmt_real(a.step, p) << ","
                  << g.points << "," << g.violations << ","
                  << fmt_real(g.min_margin, p) << ","
                  << fmt_real(g.min_margin_arg1, p) << ","
                  << fmt_real(g.min_margin_arg2, p) << "\n";
    } else {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "ineq";
        j["family"] = a.family;
        j["zmin"] = a.zmin;
        j["zmax"] = a.zmax;
        j["step"] = a.step;
        j["points"] = g.points;
        j["violations"] = g.violations;
        j["min_margin"] = g.min_margin;
        j["min_margin_arg1"] = g.min_margin_arg1;
        j["min_margin_arg2"] = g.min_margin_arg2;
        emit_json(sink, j);
    }
    if (a.out.verbose) {
        std::cerr << "ineq: " << g.points << " points, " << g.violations
                  << " violations\n";
    }
    return g.violations == 0 ? 0 : 1;
}

struct TableArgs {
    std::vector<unsigned long> pow10;
    OutputConfig out;
};

int cmd_table(const TableArgs& a) {
    if (a.pow10.empty()) throw std::invalid_argument("--pow10 needs exponents");
    std::vector<unsigned long> exps = a.pow10;
    std::sort(exps.begin(), exps.end());  // ascending primary key
    std::vector<mpz_class> ns;
    ns.reserve(exps.size());
    for (unsigned long e : exps) {
        if (e > 1000000) {
            throw std::invalid_argument("exponent too large: 10^" +
                                        std::to_string(e));
        }
        ns.push_back(pow10z(e));
    }
    primq::QCounter counter;
    const auto rows = primq::compare_table(ns, counter);
    Sink sink(a.out);
    if (a.out.format == "csv") {
        const int p = a.out.precision;
        sink.os() << "n,q,log_q,main_term,ratio\n";
        for (const auto& r : rows) {
            sink.os() << r.n.get_str() << "," << r.q << ","
                      << fmt_real(r.log_q, p) << "," << fmt_real(r.main_term, p)
                      << "," << fmt_real(r.ratio, p) << "\n";
        }
    } else {
        json jrows = json::array();
        for (const auto& r : rows) {
            json row;
            row["n"] = r.n.get_str();
            row["q"] = r.q;
            row["log_q"] = r.log_q;
            row["main_term"] = r.main_term;
            row["ratio"] = r.ratio;
            jrows.push_back(std::move(row));
        }
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "table";
        j["rows"] = std::move(jrows);
        emit_json(sink, j);
    }
    return 0;
}

struct InductionArgs {
    std::string n;
    double eps = 0;
    std::string direction;
    OutputConfig out;
};

int cmd_induction(const InductionArgs& a) {
    const mpz_class n = parse_bigint(a.n);
    const u64 limit = table_limit_or_env(1000000);
    const auto table = build_table(limit, a.out);
    const auto plb = primq::primorial_log_bounds(table, 5000);
    const auto dir = a.direction == "upper" ? primq::InductionDirection::upper
                                            : primq::InductionDirection::lower;
    const auto r =
        primq::induction_terms(n, a.eps, dir, plb.alpha, plb.beta, table);
    Sink sink(a.out);
    if (a.out.format == "csv") {
        const int p = a.out.precision;
        sink.os() << "direction,n,epsilon,m,s1,s2,s3,double_sum,log_w,"
                     "rhs_bound\n"
                  << a.direction << "," << r.n.get_str() << ","
                  << fmt_real(r.epsilon, p) << "," << fmt_real(r.m, p) << ","
                  << fmt_real(r.s1, p) << "," << fmt_real(r.s2, p) << ","
                  << fmt_real(r.s3, p) << "," << fmt_real(r.double_sum, p)
                  << "," << fmt_real(r.log_w, p) << ","
                  << fmt_real(r.rhs_bound, p) << "\n";
    } else {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "induction";
        j["direction"] = a.direction;
        j["n"] = r.n.get_str();
        j["epsilon"] = r.epsilon;
        j["m"] = r.m;
        j["s1"] = r.s1;
        j["s2"] = r.s2;
        j["s3"] = r.s3;
        j["double_sum"] = r.double_sum;
        j["log_w"] = r.log_w;
        j["rhs_bound"] = r.rhs_bound;
        emit_json(sink, j);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "primorial-product counting toolkit: exact counts, factorization "
        "verification, truncated prime sums, inequality grids, and "
        "induction-term reports"};
    app.require_subcommand(1);

    QArgs qa;
    auto* sub_q = app.add_subcommand("q", "print the exact member count Q(n)");
    sub_q->add_option("--n", qa.n, "bound (decimal, 10^k, or a*10^k)")
        ->required();
    add_output_options(sub_q, qa.out);

    MembersArgs ma;
    auto* sub_members = app.add_subcommand(
        "members", "stream members <= n with primorial-basis exponents");
    sub_members->add_option("--n", ma.n, "bound (decimal, 10^k, or a*10^k)")
        ->required();
    sub_members->add_option("--limit", ma.limit,
                            "maximum rows; exceeding it exits with code 3");
    add_output_options(sub_members, ma.out);

    WverifyArgs wa;
    auto* sub_wverify = app.add_subcommand(
        "wverify",
        "verify the product-factorization identity for every n in [1, max-n]");
    sub_wverify->add_option("--max-n", wa.max_n, "inclusive upper bound")
        ->required();
    add_output_options(sub_wverify, wa.out);

    PhiArgs pa;
    auto* sub_phi = app.add_subcommand(
        "phi", "truncated prime sum with tail bound and asymptote ratio");
    sub_phi->add_option("--delta", pa.delta, "decay parameter in (0, 1)")
        ->required();
    sub_phi->add_option("--tol", pa.tol, "relative tail tolerance");
    sub_phi
        ->add_option("--which", pa.which,
                     "capital = theta-weighted sum, small = plain sum")
        ->check(CLI::IsMember({"capital", "small"}));
    add_output_options(sub_phi, pa.out);

    IdentityArgs ia;
    auto* sub_identity = app.add_subcommand(
        "identity", "telescoped partial-sum identity residual");
    sub_identity->add_option("--delta", ia.delta, "exponent in (0, 1)")
        ->required();
    sub_identity->add_option("--terms", ia.terms, "number of leading terms");
    add_output_options(sub_identity, ia.out);

    IneqArgs ga;
    auto* sub_ineq = app.add_subcommand(
        "ineq", "scan the exponential inequality families over a z grid");
    sub_ineq
        ->add_option("--family", ga.family,
                     "eq1, eq2, eq3, eq4, or all (eq3 needs zmax < 1)")
        ->check(CLI::IsMember({"eq1", "eq2", "eq3", "eq4", "all"}));
    sub_ineq->add_option("--zmin", ga.zmin, "grid start (> 0)")->required();
    sub_ineq->add_option("--zmax", ga.zmax, "grid end")->required();
    sub_ineq->add_option("--step", ga.step, "grid step (> 0)")->required();
    add_output_options(sub_ineq, ga.out);

    TableArgs ta;
    auto* sub_table = app.add_subcommand(
        "table", "main-term comparison rows for n = 10^e");
    sub_table
        ->add_option("--pow10", ta.pow10,
                     "comma-separated exponents e (each >= 2), n = 10^e")
        ->required()
        ->delimiter(',');
    add_output_options(sub_table, ta.out);

    InductionArgs na;
    auto* sub_induction = app.add_subcommand(
        "induction", "raw S1/S2/S3 and double-sum terms of the induction step");
    sub_induction->add_option("--n", na.n, "bound (decimal, 10^k, or a*10^k)")
        ->required();
    sub_induction->add_option("--eps", na.eps, "epsilon in (0, 1/2)")
        ->required();
    sub_induction->add_option("--direction", na.direction, "upper or lower")
        ->required()
        ->check(CLI::IsMember({"upper", "lower"}));
    add_output_options(sub_induction, na.out);

    int rc = 0;
    sub_q->callback([&] { rc = cmd_q(qa); });
    sub_members->callback([&] { rc = cmd_members(ma); });
    sub_wverify->callback([&] { rc = cmd_wverify(wa); });
    sub_phi->callback([&] { rc = cmd_phi(pa); });
    sub_identity->callback([&] { rc = cmd_identity(ia); });
    sub_ineq->callback([&] { rc = cmd_ineq(ga); });
    sub_table->callback([&] { rc = cmd_table(ta); });
    sub_induction->callback([&] { rc = cmd_induction(na); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const primq::capacity_error& e) {
        std::cerr << "capacity: " << e.what() << "\n";
        return 3;
    } catch (const primq::numeric_error& e) {
        std::cerr << "numeric: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
