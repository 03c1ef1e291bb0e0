#ifndef ASIANLAG_SPECIAL_FUNCTIONS_HPP
#define ASIANLAG_SPECIAL_FUNCTIONS_HPP

#include <stdexcept>

#include "asianlag/big_real.hpp"

namespace asianlag {

/// Generalized Laguerre polynomial L_n^alpha(z) by the three-term recurrence
///   L_{n+1} = ((2n+1+alpha-z) L_n - (n+alpha) L_{n-1}) / (n+1).
inline BigReal laguerre(long n, const BigReal& alpha, const BigReal& z) {
    if (n < 0) throw std::domain_error("laguerre: n must be non-negative");
    if (alpha <= -1L) throw std::domain_error("laguerre: alpha must be > -1");
    mpfr_prec_t p = std::max(alpha.prec(), z.prec());
    BigReal lm = BigReal::from_long(1, p);
    if (n == 0) return lm;
    BigReal l = 1 + alpha - z;
    for (long j = 1; j < n; ++j) {
        BigReal next = ((2 * j + 1 + alpha - z) * l - (j + alpha) * lm) / (j + 1);
        lm = std::move(l);
        l = std::move(next);
    }
    return l;
}

/// Falling-factorial product lambda (lambda-1) ... (lambda-k+1).
///
/// This is the recurrence (lambda)_0 = 1, (lambda)_{k+1} = (lambda-k)(lambda)_k
/// as printed in the source formulas; the series that consume a Pochhammer
/// symbol actually need rising_factorial (see theta.hpp).
inline BigReal pochhammer(const BigReal& lambda, long k) {
    if (k < 0) throw std::domain_error("pochhammer: k must be non-negative");
    BigReal r = BigReal::from_long(1, lambda.prec());
    for (long i = 0; i < k; ++i) r *= (lambda - i);
    return r;
}

/// Rising factorial lambda (lambda+1) ... (lambda+k-1).
inline BigReal rising_factorial(const BigReal& lambda, long k) {
    if (k < 0) throw std::domain_error("rising_factorial: k must be non-negative");
    BigReal r = BigReal::from_long(1, lambda.prec());
    for (long i = 0; i < k; ++i) r *= (lambda + i);
    return r;
}

namespace detail {

/// erf(z) Taylor series, z expected in [0, ~4]; cancellation is bounded by
/// ~0.9 z^2 decimal digits, absorbed by guard precision at the call site.
inline BigReal erf_taylor(const BigReal& z, const PrecisionContext& ctx) {
    mpfr_prec_t p = ctx.prec_bits();
    BigReal z2 = z * z;
    BigReal term = BigReal::from_long(1, p);  // z^(2n)/n! running factor
    BigReal sum = BigReal::from_long(1, p);   // sum over n of (-1)^n z^(2n)/(n!(2n+1))
    BigReal stop = ctx.term_stop();
    long n = 1;
    while (true) {
        term = term * z2 / n;
        BigReal contrib = term / (2 * n + 1);
        if (n % 2 == 1)
            sum -= contrib;
        else
            sum += contrib;
        if (contrib < stop * abs(sum) && n > 4) break;
        if (n > 100000) throw std::runtime_error("erf_taylor: no convergence");
        ++n;
    }
    return 2 * z * sum / sqrt(ctx.pi());
}

/// Scaled complementary error function by the classical continued fraction
///   exp(z^2) erfc(z) = (z/sqrt(pi)) / (z^2 + 1/2/(1 + 1/(z^2 + 3/2/(1 + ...))))
/// evaluated by the modified Lentz algorithm; stable for z > ~2.
inline BigReal erfc_scaled_cf(const BigReal& z, const PrecisionContext& ctx) {
    mpfr_prec_t p = ctx.prec_bits();
    BigReal z2 = z * z;
    BigReal tiny = pow10(-2 * ctx.digits - 40, p);
    BigReal one = BigReal::from_long(1, p);
    BigReal f = z2;
    if (f.is_zero()) f = tiny;
    BigReal C = f, D = BigReal::from_long(0, p);
    BigReal stop = ctx.term_stop();
    long m = 1;
    while (true) {
        // partial numerator a_m, partial denominator b_m
        // a_{2j} = j - 1/2 over b = 1 ; a_{2j+1} = j over b = z^2
        BigReal a(p), b(p);
        if (m % 2 == 1) {
            a = BigReal::from_long(2 * ((m + 1) / 2) - 1, p) / 2;  // j - 1/2
            b = one;
        } else {
            a = BigReal::from_long(m / 2, p);
            b = z2;
        }
        D = b + a * D;
        if (D.is_zero()) D = tiny;
        C = b + a / C;
        if (C.is_zero()) C = tiny;
        D = 1 / D;
        BigReal delta = C * D;
        f = f * delta;
        if (abs(delta - 1) < stop) break;
        if (m > 2000000) throw std::runtime_error("erfc_scaled_cf: no convergence");
        ++m;
    }
    return z / (sqrt(ctx.pi()) * f);
}

}  // namespace detail

/// W(z) = exp(z^2) erfc(z) for z >= 0, overflow-safe (the product is never
/// formed through exp(z^2) alone).  Taylor branch below the z = 2 switchover,
/// continued fraction above it.
inline BigReal erfc_scaled(const BigReal& z, const PrecisionContext& ctx) {
    if (z < 0L) throw std::domain_error("erfc_scaled: z must be >= 0");
    if (z <= 2L) {
        double zd = z.to_double();
        int guard = static_cast<int>(zd * zd * 0.9) + 15;
        PrecisionContext cg = ctx.with_guard(guard);
        BigReal zg = with_prec(z, cg.prec_bits());
        BigReal erfv = detail::erf_taylor(zg, cg);
        BigReal w = exp(zg * zg) * (1 - erfv);
        return with_prec(w, ctx.prec_bits());
    }
    return detail::erfc_scaled_cf(z, ctx);
}

/// Signed extension used by the general-case moment corrections:
/// W(-a) = 2 exp(a^2) - W(a).
inline BigReal erfc_scaled_signed(const BigReal& z, const PrecisionContext& ctx) {
    if (z >= 0L) return erfc_scaled(z, ctx);
    BigReal a = -z;
    return 2 * exp(a * a) - erfc_scaled(a, ctx);
}

/// Complementary error function (any real argument).
inline BigReal erfc(const BigReal& z, const PrecisionContext& ctx) {
    BigReal a = abs(z);
    BigReal w = erfc_scaled(a, ctx) * exp(-(a * a));
    if (z.is_negative()) return 2 - w;
    return w;
}

/// W_l(x) = exp(x^2) Gamma((l+1)/2, x^2) for x >= 0, via
/// W_0 = sqrt(pi) W, W_1 = 1, W_{l+2}(x) = ((l+1)/2) W_l(x) + x^{l+1}.
inline BigReal upper_gamma_scaled(long ell, const BigReal& x, const PrecisionContext& ctx) {
    if (ell < 0) throw std::domain_error("upper_gamma_scaled: ell must be >= 0");
    if (x < 0L) throw std::domain_error("upper_gamma_scaled: x must be >= 0");
    mpfr_prec_t p = std::max(x.prec(), ctx.prec_bits());
    BigReal w0 = sqrt(ctx.pi()) * erfc_scaled(x, ctx);
    BigReal w1 = BigReal::from_long(1, p);
    if (ell == 0) return w0;
    if (ell == 1) return w1;
    BigReal weven = std::move(w0), wodd = std::move(w1);
    for (long l = 2; l <= ell; ++l) {
        BigReal& prev = (l % 2 == 0) ? weven : wodd;
        prev = ((l - 1) * prev) / 2 + pow(x, l - 1);
    }
    return (ell % 2 == 0) ? weven : wodd;
}

/// Signed variant, W_l(x) = 2 exp(x^2) int_x^inf t^l exp(-t^2) dt for any real
/// x; same recurrence with signed powers, W_0 through the signed erfc.
inline BigReal upper_gamma_scaled_signed(long ell, const BigReal& x, const PrecisionContext& ctx) {
    if (ell < 0) throw std::domain_error("upper_gamma_scaled_signed: ell must be >= 0");
    mpfr_prec_t p = std::max(x.prec(), ctx.prec_bits());
    BigReal w0 = sqrt(ctx.pi()) * erfc_scaled_signed(x, ctx);
    BigReal w1 = BigReal::from_long(1, p);
    if (ell == 0) return w0;
    if (ell == 1) return w1;
    BigReal weven = std::move(w0), wodd = std::move(w1);
    for (long l = 2; l <= ell; ++l) {
        BigReal& prev = (l % 2 == 0) ? weven : wodd;
        prev = ((l - 1) * prev) / 2 + pow(x, l - 1);
    }
    return (ell % 2 == 0) ? weven : wodd;
}

/// Lower incomplete gamma gamma(s, a) = int_0^a exp(-x) x^(s-1) dx by the
/// ascending series a^s e^-a sum_n a^n / (s (s+1) ... (s+n)).
inline BigReal lower_gamma(const BigReal& s, const BigReal& a, const PrecisionContext& ctx) {
    if (s <= 0L) throw std::domain_error("lower_gamma: s must be > 0");
    if (a <= 0L) throw std::domain_error("lower_gamma: a must be > 0");
    int guard = static_cast<int>(a.to_double() * 0.9) + 12;
    PrecisionContext cg = ctx.with_guard(guard);
    mpfr_prec_t p = cg.prec_bits();
    BigReal term = BigReal::from_long(1, p) / s;  // a^n / (s...(s+n)), n = 0
    BigReal sum = term;
    BigReal stop = ctx.term_stop();
    long n = 1;
    while (true) {
        term = term * a / (s + n);
        sum += term;
        if (term < stop * sum && n > 3) break;
        if (n > 200000) throw std::runtime_error("lower_gamma: no convergence");
        ++n;
    }
    BigReal aw = with_prec(a, p);
    BigReal r = pow(aw, with_prec(s, p)) * exp(-aw) * sum;
    return with_prec(r, ctx.prec_bits());
}

}  // namespace asianlag

#endif
