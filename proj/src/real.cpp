#include "cubature/real.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace cubature {

mpfr_prec_t Real::bits_for_digits(int decimal_digits) {
    if (decimal_digits < 1) decimal_digits = 1;
    // log2(10) = 3.3219...; add guard bits so digit-level contracts survive rounding.
    return static_cast<mpfr_prec_t>(std::ceil(decimal_digits * 3.3219280948873626)) + 32;
}

int Real::digits_for_bits(mpfr_prec_t bits) {
    return static_cast<int>(std::floor((bits - 32) / 3.3219280948873626));
}

Real Real::from_mpq(const mpq_class& q, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
    return r;
}

Real Real::from_mpz(const mpz_class& z, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_z(r.v_, z.get_mpz_t(), MPFR_RNDN);
    return r;
}

Real Real::from_string(const std::string& s, mpfr_prec_t prec) {
    Real r(prec);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
        throw std::invalid_argument("Real::from_string: cannot parse '" + s + "'");
    return r;
}

Real Real::pi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

Real Real::pow10(long k, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_si(r.v_, 10, MPFR_RNDN);
    mpfr_pow_si(r.v_, r.v_, k, MPFR_RNDN);
    return r;
}

std::string Real::to_string(int digits) const {
    if (!is_finite()) return mpfr_nan_p(v_) ? "nan" : (sign() < 0 ? "-inf" : "inf");
    if (is_zero()) return "0";
    mpfr_exp_t exp = 0;
    char* s = mpfr_get_str(nullptr, &exp, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
    std::string m(s);
    mpfr_free_str(s);
    bool neg = !m.empty() && m[0] == '-';
    std::string digits_only = neg ? m.substr(1) : m;
    // mpfr exponent convention: value = 0.digits * 10^exp
    std::string out = (neg ? "-" : "");
    out += digits_only.substr(0, 1);
    if (digits_only.size() > 1) out += "." + digits_only.substr(1);
    out += "e" + std::to_string(static_cast<long>(exp) - 1);
    return out;
}

mpz_class Real::floor_mpz() const {
    mpfr_t t;
    mpfr_init2(t, prec());
    mpfr_floor(t, v_);
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDZ);
    mpfr_clear(t);
    return z;
}

mpz_class Real::round_mpz() const {
    mpfr_t t;
    mpfr_init2(t, prec());
    mpfr_round(t, v_);
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDZ);
    mpfr_clear(t);
    return z;
}

} // namespace cubature
