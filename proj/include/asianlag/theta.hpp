#ifndef ASIANLAG_THETA_HPP
#define ASIANLAG_THETA_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "asianlag/big_real.hpp"
#include "asianlag/quadrature.hpp"
#include "asianlag/special_functions.hpp"

namespace asianlag {

/// Riemann theta function  theta(z|t) = (pi t)^{-1/2} sum_{n in Z} exp(-(z+n)^2/t).
/// Rapidly convergent for small t; the argument is reduced mod 1 first.
inline BigReal theta_fn(const BigReal& z, const BigReal& t, const PrecisionContext& ctx) {
    if (t <= 0L) throw std::domain_error("theta_fn: t must be > 0");
    mpfr_prec_t p = std::max({z.prec(), t.prec(), ctx.prec_bits()});
    BigReal zr = z - floor(z + BigReal::from_string("0.5", p));   // |zr| <= 1/2
    BigReal stop = ctx.term_stop();
    BigReal sum = BigReal::from_long(0, p);
    int quiet = 0;
    for (long n = 0; n < 1000000; ++n) {
        BigReal term = exp(-((zr + n) * (zr + n)) / t);
        if (n > 0) term += exp(-((zr - n) * (zr - n)) / t);
        sum += term;
        if (term.is_zero() || term < stop * sum) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    return sum / sqrt(quad::const_pi(p) * t);
}

/// Jacobi-transform side: 1 + 2 sum_{n>=1} (-1)^n exp(-(pi n)^2 t) cos(2 pi n x).
/// Equals theta_fn(x - 1/2, t); rapidly convergent for large t.
inline BigReal theta_jacobi_lhs(const BigReal& x, const BigReal& t, const PrecisionContext& ctx) {
    if (t <= 0L) throw std::domain_error("theta_jacobi_lhs: t must be > 0");
    mpfr_prec_t p = std::max({x.prec(), t.prec(), ctx.prec_bits()});
    BigReal pi_v = quad::const_pi(p);
    BigReal stop = ctx.term_stop();
    BigReal sum = BigReal::from_long(1, p);
    int quiet = 0;
    for (long n = 1; n < 1000000; ++n) {
        BigReal term = 2 * exp(-(pi_v * n) * (pi_v * n) * t) * cos(2 * pi_v * n * x);
        if (n % 2 == 1)
            sum -= term;
        else
            sum += term;
        if (abs(term) < stop * max(abs(sum), BigReal::from_long(1, p))) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    return sum;
}

/// cosh((nu-1) y) / (y sinh y); the Laplace transform at y^2 of
/// theta(nu/2 | .) when |nu - 1| <= 1.
inline BigReal hyperbolic_kernel(const BigReal& nu, const BigReal& y) {
    if (y <= 0L) throw std::domain_error("hyperbolic_kernel: y must be > 0");
    if (abs(nu - 1) > 1L) throw std::domain_error("hyperbolic_kernel: requires |nu-1| <= 1");
    return cosh((nu - 1) * y) / (y * sinh(y));
}

/// Quadrature of int_0^inf exp(-y^2 w) theta(nu/2 | w) dw (identity oracle).
inline BigReal laplace_theta_quad(const BigReal& nu, const BigReal& y,
                                  const PrecisionContext& ctx, const BigReal& tol) {
    mpfr_prec_t p = ctx.prec_bits();
    BigReal y2 = y * y;
    BigReal zhalf = nu / 2;
    auto f_small = [&](const BigReal& w) {
        return exp(-y2 * w) * theta_fn(zhalf, w, ctx);
    };
    auto f_large = [&](const BigReal& w) {
        return exp(-y2 * w) * theta_jacobi_lhs(zhalf + BigReal::from_string("0.5", p), w, ctx);
    };
    BigReal split = BigReal::from_string("0.3", p);
    BigReal head = quad::tanh_sinh(f_small, BigReal::from_long(0, p), split, tol);
    BigReal tail = quad::algebraic_tail(f_large, split, 4 / (y2 + 1), tol);
    return head + tail;
}

/// Per-n convergence diagnostics of the two sub-series (largest index m with
/// a contribution to the first 30 decimal places, as in the source tables).
struct ThetaDiagnostics {
    long n_c = 0;
    long n_d = 0;
};

namespace detail {

inline std::vector<BigReal> poch_half_table(long n, mpfr_prec_t p) {
    BigReal half = BigReal::from_string("0.5", p);
    std::vector<BigReal> t(static_cast<size_t>(n) + 1, BigReal(p));
    t[0] = BigReal::from_long(1, p);
    for (long j = 1; j <= n; ++j) t[static_cast<size_t>(j)] = t[static_cast<size_t>(j) - 1] * (half + (j - 1));
    return t;
}

/// c_{B,0}(h) closed form.
inline BigReal theta_c0(long n, const BigReal& h, const BigReal& B, mpfr_prec_t p) {
    BigReal half = BigReal::from_string("0.5", p);
    BigReal hw = with_prec(h, p), Bw = with_prec(B, p);
    BigReal c0 = BigReal::from_long(0, p);
    for (long k = 0; k < n; ++k) {
        BigReal piece = binomial(static_cast<unsigned long>(n - 1),
                                 static_cast<unsigned long>(k), p) /
                        ((n - k - half) * pow(2 * hw * Bw + 1, n - k) / sqrt(2 * hw * Bw + 1));
        if ((n - 1 - k) % 2 == 1) piece = -piece;
        c0 += piece;
    }
    return c0 / (2 * pow(hw, n));
}

struct TermValue {
    BigReal value;
    BigReal max_piece;
};

/// c_{B,m}(h), m >= 1, via gamma_m, C^(1)_{m,k}, C^(2)_{m,k}; rising-factorial
/// Pochhammer throughout.
inline TermValue theta_c_term(long n, long m, const BigReal& nu, const BigReal& h,
                              const BigReal& B, const PrecisionContext& ctx,
                              const std::vector<BigReal>& poch_half) {
    mpfr_prec_t p = ctx.prec_bits();
    BigReal pi_v = quad::const_pi(p);
    BigReal sqrt_pi = sqrt(pi_v);
    BigReal sqrt2 = sqrt(BigReal::from_long(2, p));
    BigReal hw = with_prec(h, p), Bw = with_prec(B, p), nuw = with_prec(nu, p);
    BigReal pm2 = (pi_v * m) * (pi_v * m);
    BigReal gamma_m = cos(pi_v * m * nuw) / sqrt2 * pow(pi_v * m, 2 * n - 1) /
                      (pow(BigReal::from_long(2, p), n - 1) * pow(hw, 2 * n) / sqrt(hw));
    if ((n - 1) % 2 == 1) gamma_m = -gamma_m;
    BigReal emB = exp(-pm2 * Bw);
    BigReal zarg = pm2 * (Bw + 1 / (2 * hw));
    BigReal w_c = erfc_scaled(pi_v * m * sqrt(Bw + 1 / (2 * hw)), ctx);
    BigReal tot = BigReal::from_long(0, p);
    BigReal max_piece = BigReal::from_long(0, p);
    for (long k = 0; k < n; ++k) {
        BigReal c1 = BigReal::from_long(0, p);
        for (long l = 0; l < n - k; ++l) {
            BigReal piece = poch_half[static_cast<size_t>(l)] /
                            poch_half[static_cast<size_t>(n - k)] * emB /
                            (pow(zarg, l) * sqrt(zarg));
            if (l % 2 == 1) piece = -piece;
            c1 += piece;
        }
        if ((n - k - 1) % 2 == 1) c1 = -c1;
        BigReal c2 = sqrt_pi / poch_half[static_cast<size_t>(n - k)] * emB * w_c;
        if ((n - k) % 2 == 1) c2 = -c2;
        BigReal kfac = binomial(static_cast<unsigned long>(n - 1),
                                static_cast<unsigned long>(k), p) *
                       pow(hw, k) / pow(pm2, k) * pow(BigReal::from_long(2, p), k);
        if (k % 2 == 1) kfac = -kfac;
        max_piece = max(max_piece, abs(gamma_m * kfac * c1));
        max_piece = max(max_piece, abs(gamma_m * kfac * c2));
        tot += kfac * (c1 + c2);
    }
    return {gamma_m * tot, max_piece};
}

/// d_{B,m}(h) for integer m: the ((-2)^{n-1}/sqrt(pi)) prefactor applies to
/// the D^(1) sum only, D^(2) stands alone, and the m = -nu/2 slot takes the
/// closed form.
inline TermValue theta_d_term(long n, long m, const BigReal& nu, const BigReal& h,
                              const BigReal& B, const PrecisionContext& ctx,
                              const std::vector<BigReal>& poch_half) {
    mpfr_prec_t p = ctx.prec_bits();
    BigReal sqrt_pi = sqrt(quad::const_pi(p));
    BigReal half = BigReal::from_string("0.5", p);
    BigReal hw = with_prec(h, p), Bw = with_prec(B, p), nuw = with_prec(nu, p);
    BigReal a = m + nuw / 2;
    if (a.is_zero()) {
        BigReal v = pow(BigReal::from_long(2, p), n - 1) / (sqrt_pi * (n - half)) *
                    pow(Bw, n) / sqrt(Bw) /
                    (pow(2 * hw * Bw + 1, n) / sqrt(2 * hw * Bw + 1));
        return {v, abs(v)};
    }
    BigReal aa = abs(a);
    BigReal eB = exp(-(a * a) / Bw);
    BigReal base = 1 / Bw + 2 * hw;
    BigReal d1s = BigReal::from_long(0, p);
    for (long k = 0; k < n; ++k) {
        BigReal piece = poch_half[static_cast<size_t>(k)] / poch_half[static_cast<size_t>(n)] *
                        pow(a, 2 * (n - k - 1)) / (pow(base, k) * sqrt(base)) * eB;
        if (k % 2 == 1) piece = -piece;
        d1s += piece;
    }
    BigReal pre = pow(BigReal::from_long(2, p), n - 1) / sqrt_pi;
    if ((n - 1) % 2 == 1) pre = -pre;
    BigReal d2 = pow(BigReal::from_long(2, p), n - 1) / poch_half[static_cast<size_t>(n)] *
                 pow(aa, 2 * n - 1) * eB * erfc_scaled(aa * sqrt(base), ctx);
    if (n % 2 == 1) d2 = -d2;
    BigReal max_piece = max(abs(pre * d1s), abs(d2));
    return {pre * d1s + d2, max_piece};
}

struct ThetaSeriesResult {
    BigReal value;
    ThetaDiagnostics diag;
    double cancellation_digits = 0.0;  // realized log10(max piece / |value|)
};

inline ThetaSeriesResult theta_series_once(long n, const BigReal& nu, const BigReal& h,
                                           const BigReal& B, const PrecisionContext& ctx) {
    mpfr_prec_t p = ctx.prec_bits();
    BigReal stop = ctx.term_stop();
    BigReal nuw = with_prec(nu, p);
    BigReal max_piece = BigReal::from_long(0, p);
    std::vector<BigReal> poch_half = poch_half_table(n, p);

    // c-sum over m >= 0
    std::vector<BigReal> c_terms;
    c_terms.push_back(theta_c0(n, h, B, p));
    BigReal c_sum = c_terms.back();
    {
        int quiet = 0;
        for (long m = 1; m < 4000; ++m) {
            TermValue tv = theta_c_term(n, m, nu, h, B, ctx, poch_half);
            max_piece = max(max_piece, tv.max_piece);
            c_terms.push_back(tv.value);
            c_sum += tv.value;
            if (abs(tv.value) < stop * abs(c_sum) && m >= 2) {
                if (++quiet >= 3) break;
            } else {
                quiet = 0;
            }
        }
    }

    // d-sum over integer m, ordered by |m + nu/2|
    struct DTerm { long m; BigReal value; };
    std::vector<DTerm> d_terms;
    long mc = static_cast<long>(std::llround(-nuw.to_double() / 2.0));
    std::vector<long> order;
    for (long j = 0; j < 4000; ++j) {
        if (j == 0) { order.push_back(mc); continue; }
        long lo = mc - (j + 1) / 2, hi = mc + (j + 1) / 2;
        order.push_back((j % 2 == 1) ? hi : lo);
    }
    std::stable_sort(order.begin(), order.end(), [&](long x, long y) {
        return std::abs(x + nuw.to_double() / 2.0) < std::abs(y + nuw.to_double() / 2.0);
    });
    BigReal d_sum = BigReal::from_long(0, p);
    {
        int quiet = 0;
        for (long m : order) {
            TermValue tv = theta_d_term(n, m, nu, h, B, ctx, poch_half);
            max_piece = max(max_piece, tv.max_piece);
            d_terms.push_back({m, tv.value});
            d_sum += tv.value;
            BigReal scale = max(abs(c_sum + d_sum), abs(c_sum));
            if (abs(tv.value) < stop * scale && d_terms.size() >= 4) {
                if (++quiet >= 3) break;
            } else {
                quiet = 0;
            }
        }
    }

    // diagnostics: largest index whose omission would disturb the first 30
    // decimal places of the partial sums
    BigReal crit = pow10(-30, p) / 2;
    ThetaDiagnostics diag;
    {
        BigReal tail = BigReal::from_long(0, p);
        diag.n_c = 0;
        for (size_t i = c_terms.size(); i-- > 0;) {
            tail += c_terms[i];
            if (!(abs(tail) < crit)) { diag.n_c = static_cast<long>(i); break; }
        }
    }
    {
        BigReal tail = BigReal::from_long(0, p);
        size_t needed = 0;
        for (size_t i = d_terms.size(); i-- > 0;) {
            tail += d_terms[i].value;
            if (!(abs(tail) < crit)) { needed = i; break; }
        }
        long nd = 0;
        for (size_t i = 0; i <= needed && i < d_terms.size(); ++i)
            nd = std::max(nd, std::labs(d_terms[i].m));
        diag.n_d = nd;
    }

    ThetaSeriesResult res{c_sum + d_sum, diag, 0.0};
    if (!max_piece.is_zero() && !res.value.is_zero()) {
        res.cancellation_digits =
            std::max(0.0, std::log10(std::max(1e-300, (max_piece / abs(res.value)).to_double())));
    }
    return res;
}

}  // namespace detail

/// Individual series terms (exposed for the per-term quadrature oracles).
inline BigReal theta_series_c_term(long n, long m, const BigReal& nu, const BigReal& h,
                                   const BigReal& B, const PrecisionContext& ctx) {
    mpfr_prec_t p = ctx.prec_bits();
    if (m == 0) return detail::theta_c0(n, h, B, p);
    return detail::theta_c_term(n, m, nu, h, B, ctx, detail::poch_half_table(n, p)).value;
}

inline BigReal theta_series_d_term(long n, long m, const BigReal& nu, const BigReal& h,
                                   const BigReal& B, const PrecisionContext& ctx) {
    mpfr_prec_t p = ctx.prec_bits();
    return detail::theta_d_term(n, m, nu, h, B, ctx, detail::poch_half_table(n, p)).value;
}

/// Theta integral Theta_n(h) by the convergence-optimized second series.
/// Re-runs at boosted precision when the realized internal cancellation eats
/// into the requested digits.
inline BigReal theta_integral(long n, const BigReal& nu, const BigReal& h, const BigReal& B,
                              const PrecisionContext& ctx, ThetaDiagnostics* diag = nullptr) {
    if (n < 1) throw std::domain_error("theta_integral: n must be >= 1");
    if (h <= 0L) throw std::domain_error("theta_integral: h must be > 0");
    if (B <= 0L) throw std::domain_error("theta_integral: B must be > 0");
    int guard = 20 + static_cast<int>(n);
    for (int attempt = 0; attempt < 4; ++attempt) {
        PrecisionContext work = ctx.with_guard(guard);
        detail::ThetaSeriesResult r = detail::theta_series_once(n, nu, h, B, work);
        if (r.cancellation_digits + 10.0 < static_cast<double>(guard) || attempt == 3) {
            if (diag) *diag = r.diag;
            return with_prec(r.value, ctx.prec_bits());
        }
        guard = static_cast<int>(r.cancellation_digits) + 30;
    }
    throw std::runtime_error("theta_integral: unreachable");
}

/// Computed Theta_1..Theta_N at one (nu, h, B) with per-n diagnostics.
struct ThetaIntegralTable {
    BigReal nu, h, B;
    std::vector<BigReal> values;            // values[k-1] = Theta_k
    std::vector<ThetaDiagnostics> diagnostics;

    const BigReal& theta(long k) const {
        if (k < 1 || static_cast<size_t>(k) > values.size())
            throw std::out_of_range("ThetaIntegralTable: index out of range");
        return values[static_cast<size_t>(k) - 1];
    }
    long order() const { return static_cast<long>(values.size()); }
};

inline ThetaIntegralTable compute_theta_table(long N, const BigReal& nu, const BigReal& h,
                                              const BigReal& B, const PrecisionContext& ctx) {
    ThetaIntegralTable t{nu, h, B, {}, {}};
    t.values.reserve(static_cast<size_t>(N));
    for (long k = 1; k <= N; ++k) {
        ThetaDiagnostics d;
        t.values.push_back(theta_integral(k, nu, h, B, ctx, &d));
        t.diagnostics.push_back(d);
    }
    return t;
}

/// Quadrature oracle for the defining integral
///   Theta_n(h) = (1/(2 sqrt 2)) int_0^inf theta(nu/2|w) w^{n-1}/(w h + 1/2)^{n+1/2} dw,
/// theta evaluated through the Gaussian sum below w = 0.3 and through the
/// Jacobi transform above it.
inline BigReal theta_integral_quad(long n, const BigReal& nu, const BigReal& h,
                                   const PrecisionContext& ctx, const BigReal& tol) {
    if (n < 1) throw std::domain_error("theta_integral_quad: n must be >= 1");
    if (h <= 0L) throw std::domain_error("theta_integral_quad: h must be > 0");
    mpfr_prec_t p = ctx.prec_bits();
    BigReal half = BigReal::from_string("0.5", p);
    BigReal zhalf = with_prec(nu, p) / 2;
    BigReal hw = with_prec(h, p);
    auto alg = [&](const BigReal& w, const BigReal& th) {
        return th * pow(w, n - 1) / (pow(w * hw + half, n) * sqrt(w * hw + half));
    };
    auto f_small = [&](const BigReal& w) { return alg(w, theta_fn(zhalf, w, ctx)); };
    auto f_large = [&](const BigReal& w) {
        return alg(w, theta_jacobi_lhs(zhalf + half, w, ctx));
    };
    BigReal split = BigReal::from_string("0.3", p);
    BigReal head = quad::tanh_sinh(f_small, BigReal::from_long(0, p), split, tol);
    BigReal tail = quad::algebraic_tail(f_large, split, 2 / hw, tol);
    return (head + tail) / (2 * sqrt(BigReal::from_long(2, p)));
}

}  // namespace asianlag

#endif
