#ifndef ASIANLAG_BIG_REAL_HPP
#define ASIANLAG_BIG_REAL_HPP

#include <mpfr.h>

#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace asianlag {

class BigReal;

/// Working precision threaded explicitly through every numeric operation.
///
/// `digits` is the number of significant decimal digits; `term_stop_exp10`
/// is the power of ten of the relative threshold at which infinite-series
/// summation halts (must not exceed -digits).
struct PrecisionContext {
    int digits;
    int term_stop_exp10;

    explicit PrecisionContext(int digits_ = 160, int term_stop_exp10_ = 0)
        : digits(digits_),
          term_stop_exp10(term_stop_exp10_ == 0 ? -digits_ : term_stop_exp10_) {
        if (digits < 50)
            throw std::invalid_argument("PrecisionContext: digits must be >= 50");
        if (term_stop_exp10 > -digits)
            throw std::invalid_argument("PrecisionContext: term_stop must be <= 10^(-digits)");
    }

    mpfr_prec_t prec_bits() const {
        return static_cast<mpfr_prec_t>(static_cast<double>(digits) * 3.3219280948873623 + 16.0);
    }

    PrecisionContext with_guard(int extra_digits) const {
        PrecisionContext c(*this);
        c.digits = digits + extra_digits;
        // keep the original stop threshold; the guard digits only widen the mantissa
        return c;
    }

    inline BigReal real(long v) const;
    inline BigReal real(int v) const;
    inline BigReal real(const char* decimal) const;
    inline BigReal real(const std::string& decimal) const;
    inline BigReal pi() const;
    inline BigReal term_stop() const;
};

/// Arbitrary-precision real number backed by MPFR.
///
/// Every value carries its own mantissa width; arithmetic rounds to the wider
/// of the operands with round-to-nearest, so results are deterministic digit
/// strings for a fixed PrecisionContext.
class BigReal {
  public:
    BigReal() { mpfr_init2(v_, 64); mpfr_set_zero(v_, 1); }

    explicit BigReal(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }

    BigReal(const BigReal& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }

    BigReal(BigReal&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }

    BigReal& operator=(const BigReal& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }

    BigReal& operator=(BigReal&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }

    ~BigReal() { mpfr_clear(v_); }

    static BigReal from_long(long x, mpfr_prec_t prec) {
        BigReal r(prec);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }

    static BigReal from_string(const std::string& s, mpfr_prec_t prec) {
        BigReal r(prec);
        if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
            throw std::invalid_argument("BigReal: cannot parse '" + s + "'");
        return r;
    }

    static BigReal from_double(double x, mpfr_prec_t prec) {
        BigReal r(prec);
        mpfr_set_d(r.v_, x, MPFR_RNDN);
        return r;
    }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_negative() const { return mpfr_sgn(v_) < 0; }
    int sign() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

    /// Scientific representation with `sig` significant digits.
    std::string str(int sig) const {
        if (sig < 2) sig = 2;
        std::vector<char> buf(static_cast<size_t>(sig) + 32);
        mpfr_snprintf(buf.data(), buf.size(), "%.*Re", sig - 1, v_);
        return std::string(buf.data());
    }

    /// Fixed-point representation with `dec` digits after the point.
    std::string fixed(int dec) const {
        mpfr_exp_t mag = is_zero() ? 1 : mpfr_get_exp(v_);
        std::vector<char> buf(static_cast<size_t>(dec) + static_cast<size_t>(mag > 0 ? mag : 0) / 3 + 64);
        mpfr_snprintf(buf.data(), buf.size(), "%.*Rf", dec, v_);
        return std::string(buf.data());
    }

    friend BigReal operator+(const BigReal& a, const BigReal& b) {
        BigReal r(std::max(a.prec(), b.prec()));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator-(const BigReal& a, const BigReal& b) {
        BigReal r(std::max(a.prec(), b.prec()));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator*(const BigReal& a, const BigReal& b) {
        BigReal r(std::max(a.prec(), b.prec()));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator/(const BigReal& a, const BigReal& b) {
        BigReal r(std::max(a.prec(), b.prec()));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator+(const BigReal& a, long b) {
        BigReal r(a.prec()); mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN); return r;
    }
    friend BigReal operator+(long a, const BigReal& b) { return b + a; }
    friend BigReal operator-(const BigReal& a, long b) {
        BigReal r(a.prec()); mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN); return r;
    }
    friend BigReal operator-(long a, const BigReal& b) {
        BigReal r(b.prec()); mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN); return r;
    }
    friend BigReal operator*(const BigReal& a, long b) {
        BigReal r(a.prec()); mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN); return r;
    }
    friend BigReal operator*(long a, const BigReal& b) { return b * a; }
    friend BigReal operator/(const BigReal& a, long b) {
        BigReal r(a.prec()); mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN); return r;
    }
    friend BigReal operator/(long a, const BigReal& b) {
        BigReal r(b.prec()); mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN); return r;
    }
    BigReal operator-() const {
        BigReal r(prec()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r;
    }
    BigReal& operator+=(const BigReal& o) {
        if (o.prec() > prec()) { BigReal t = *this + o; mpfr_swap(v_, t.v_); return *this; }
        mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this;
    }
    BigReal& operator-=(const BigReal& o) {
        if (o.prec() > prec()) { BigReal t = *this - o; mpfr_swap(v_, t.v_); return *this; }
        mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this;
    }
    BigReal& operator*=(const BigReal& o) {
        if (o.prec() > prec()) { BigReal t = *this * o; mpfr_swap(v_, t.v_); return *this; }
        mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this;
    }
    BigReal& operator/=(const BigReal& o) {
        if (o.prec() > prec()) { BigReal t = *this / o; mpfr_swap(v_, t.v_); return *this; }
        mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this;
    }

    friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const BigReal& a, const BigReal& b) { return !(a == b); }
    friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
    friend bool operator<(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
    friend bool operator>(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
    friend bool operator<=(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
    friend bool operator>=(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }

  private:
    mpfr_t v_;
};

#define ASIANLAG_UNARY(name, mpfr_fn)                       \
    inline BigReal name(const BigReal& x) {                 \
        BigReal r(x.prec());                                \
        mpfr_fn(r.raw(), x.raw(), MPFR_RNDN);               \
        return r;                                           \
    }

ASIANLAG_UNARY(abs, mpfr_abs)
ASIANLAG_UNARY(sqrt, mpfr_sqrt)
ASIANLAG_UNARY(exp, mpfr_exp)
ASIANLAG_UNARY(expm1, mpfr_expm1)
ASIANLAG_UNARY(log, mpfr_log)
ASIANLAG_UNARY(sin, mpfr_sin)
ASIANLAG_UNARY(cos, mpfr_cos)
ASIANLAG_UNARY(sinh, mpfr_sinh)
ASIANLAG_UNARY(cosh, mpfr_cosh)
ASIANLAG_UNARY(tanh, mpfr_tanh)
ASIANLAG_UNARY(gamma, mpfr_gamma)
ASIANLAG_UNARY(log_gamma, mpfr_lngamma)

#undef ASIANLAG_UNARY

inline BigReal floor(const BigReal& x) {
    BigReal r(x.prec());
    mpfr_rint(r.raw(), x.raw(), MPFR_RNDD);
    return r;
}
inline BigReal ceil(const BigReal& x) {
    BigReal r(x.prec());
    mpfr_rint(r.raw(), x.raw(), MPFR_RNDU);
    return r;
}
inline BigReal round_nearest(const BigReal& x) {
    BigReal r(x.prec());
    mpfr_rint(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

inline BigReal pow(const BigReal& x, long n) {
    BigReal r(x.prec());
    mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
    return r;
}

inline BigReal pow(const BigReal& x, const BigReal& y) {
    BigReal r(std::max(x.prec(), y.prec()));
    mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}

inline BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }
inline BigReal min(const BigReal& a, const BigReal& b) { return a < b ? a : b; }

/// Same value re-carried at a different mantissa width (exact when widening).
inline BigReal with_prec(const BigReal& x, mpfr_prec_t prec) {
    BigReal r(prec);
    mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

/// 10^e at the given precision.
inline BigReal pow10(long e, mpfr_prec_t prec) {
    BigReal r(prec);
    mpfr_ui_pow_ui(r.raw(), 10u, static_cast<unsigned long>(e < 0 ? -e : e), MPFR_RNDN);
    if (e < 0) {
        BigReal one = BigReal::from_long(1, prec);
        r = one / r;
    }
    return r;
}

inline BigReal PrecisionContext::real(long v) const { return BigReal::from_long(v, prec_bits()); }
inline BigReal PrecisionContext::real(int v) const { return BigReal::from_long(v, prec_bits()); }
inline BigReal PrecisionContext::real(const char* s) const { return BigReal::from_string(s, prec_bits()); }
inline BigReal PrecisionContext::real(const std::string& s) const { return BigReal::from_string(s, prec_bits()); }
inline BigReal PrecisionContext::pi() const {
    BigReal r(prec_bits());
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    return r;
}
inline BigReal PrecisionContext::term_stop() const { return pow10(term_stop_exp10, prec_bits()); }

/// Exact n! as BigReal.
inline BigReal factorial(unsigned long n, mpfr_prec_t prec) {
    BigReal r(prec);
    mpfr_fac_ui(r.raw(), n, MPFR_RNDN);
    return r;
}

/// Exact binomial coefficient as BigReal.
inline BigReal binomial(unsigned long n, unsigned long k, mpfr_prec_t prec) {
    if (k > n) return BigReal::from_long(0, prec);
    if (k > n - k) k = n - k;
    BigReal num = BigReal::from_long(1, prec);
    for (unsigned long i = 0; i < k; ++i) {
        num = num * static_cast<long>(n - i);
        num = num / static_cast<long>(i + 1);
    }
    return round_nearest(num);
}

}  // namespace asianlag

#endif
