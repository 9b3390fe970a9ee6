#include "primq/bigint.hpp"

#include <cctype>
#include <cmath>

namespace primq {

double log_mpz(const mpz_class& n) {
    if (sgn(n) <= 0) {
        throw std::domain_error("log_mpz: argument must be positive");
    }
    signed long exp2 = 0;
    double d = mpz_get_d_2exp(&exp2, n.get_mpz_t());
    return std::log(d) + static_cast<double>(exp2) * std::log(2.0);
}

bool fits_u64(const mpz_class& n) {
    return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

bool fits_u128(const mpz_class& n) {
    return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 128;
}

u64 to_u64(const mpz_class& n) {
    if (!fits_u64(n)) {
        throw std::out_of_range("to_u64: value does not fit in 64 bits");
    }
    return mpz_get_ui(n.get_mpz_t());
}

u128 to_u128(const mpz_class& n) {
    if (!fits_u128(n)) {
        throw std::out_of_range("to_u128: value does not fit in 128 bits");
    }
    mpz_class high = n >> 64;
    mpz_class low = n - (high << 64);
    return (static_cast<u128>(mpz_get_ui(high.get_mpz_t())) << 64) |
           static_cast<u128>(mpz_get_ui(low.get_mpz_t()));
}

mpz_class from_u128(u128 v) {
    mpz_class out = static_cast<unsigned long>(v >> 64);
    out <<= 64;
    out |= mpz_class(static_cast<unsigned long>(v & 0xFFFFFFFFFFFFFFFFULL));
    return out;
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

[[noreturn]] void bad(const std::string& text) {
    throw std::invalid_argument("parse_bigint: cannot parse '" + text +
                                "' (expected N, 10^k, or a*10^k)");
}

}  // namespace

mpz_class parse_bigint(const std::string& text) {
    std::size_t begin = 0, end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    std::string s = text.substr(begin, end - begin);
    if (s.empty()) bad(text);

    std::string mult = "1";
    std::string rest = s;
    std::size_t star = s.find('*');
    if (star != std::string::npos) {
        mult = s.substr(0, star);
        rest = s.substr(star + 1);
        if (!all_digits(mult)) bad(text);
    }

    mpz_class value;
    std::size_t caret = rest.find('^');
    if (caret != std::string::npos) {
        std::string base = rest.substr(0, caret);
        std::string expo = rest.substr(caret + 1);
        if (base != "10" || !all_digits(expo) || expo.size() > 5) bad(text);
        unsigned long e = std::stoul(expo);
        if (e > 100000) bad(text);
        mpz_ui_pow_ui(value.get_mpz_t(), 10, e);
    } else {
        if (star != std::string::npos) bad(text);  // a*b only with a power of ten
        if (!all_digits(rest)) bad(text);
        value = mpz_class(rest, 10);
    }

    if (mult != "1") {
        value *= mpz_class(mult, 10);
    }
    return value;
}

}  // namespace primq
