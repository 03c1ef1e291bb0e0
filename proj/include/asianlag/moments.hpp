#ifndef ASIANLAG_MOMENTS_HPP
#define ASIANLAG_MOMENTS_HPP

#include <stdexcept>
#include <vector>

#include "asianlag/big_real.hpp"
#include "asianlag/quadrature.hpp"
#include "asianlag/special_functions.hpp"
#include "asianlag/theta.hpp"

namespace asianlag {

/// Triangle a_{n,k}, 1 <= k <= n <= N, from the basic-case recursion
///   a_{1,1} = 1,
///   a_{n+1,1}   = (2(n - nu) + nu^2/(2n)) a_{n,1},
///   a_{n+1,n+1} = (1 + 1/(2n)) a_{n,n},
///   a_{n+1,k}   = (2(n - nu) + nu^2/(2n)) a_{n,k} + ((k-1)/n + 1/(2n)) a_{n,k-1}.
struct CoefficientTriangle {
    BigReal nu;
    long N = 0;
    std::vector<std::vector<BigReal>> a;  // a[n-1][k-1]
};

inline CoefficientTriangle coeff_a(long N, const BigReal& nu, const PrecisionContext& ctx) {
    if (N < 1) throw std::domain_error("coeff_a: N must be >= 1");
    mpfr_prec_t p = ctx.prec_bits();
    BigReal nuw = with_prec(nu, p);
    CoefficientTriangle t{nuw, N, {}};
    t.a.resize(static_cast<size_t>(N));
    t.a[0] = {BigReal::from_long(1, p)};
    for (long n = 1; n < N; ++n) {
        BigReal fac = 2 * (n - nuw) + nuw * nuw / (2 * n);
        auto& prev = t.a[static_cast<size_t>(n) - 1];
        auto& cur = t.a[static_cast<size_t>(n)];
        cur.assign(static_cast<size_t>(n) + 1, BigReal(p));
        cur[0] = fac * prev[0];
        for (long k = 2; k <= n; ++k)
            cur[static_cast<size_t>(k) - 1] =
                fac * prev[static_cast<size_t>(k) - 1] +
                (BigReal::from_long(k - 1, p) / n + BigReal::from_long(1, p) / (2 * n)) *
                    prev[static_cast<size_t>(k) - 2];
        cur[static_cast<size_t>(n)] = (1 + BigReal::from_long(1, p) / (2 * n)) *
                                      prev[static_cast<size_t>(n) - 1];
    }
    return t;
}

/// Coefficient functions b_{n,k}(h) = sum_l b_{n,k,l} h^{-(3/2+k+l)} stored by
/// (n, k, l) slot, built from the printed seeds and the four recurrence
/// branches.  Slots outside the displayed support hold zero.
struct BTriangle {
    BigReal nu;
    long N = 0;
    // b[n-1][k][l], 0 <= k <= n-1, 0 <= l <= n-1
    std::vector<std::vector<std::vector<BigReal>>> b;

    const BigReal& at(long n, long k, long l) const {
        return b[static_cast<size_t>(n) - 1][static_cast<size_t>(k)][static_cast<size_t>(l)];
    }
};

inline BTriangle coeff_b(long N, const BigReal& nu, const PrecisionContext& ctx) {
    if (N < 1) throw std::domain_error("coeff_b: N must be >= 1");
    mpfr_prec_t p = ctx.prec_bits();
    BigReal nuw = with_prec(nu, p);
    BigReal pi_v = quad::const_pi(p);
    BTriangle t{nuw, N, {}};
    t.b.resize(static_cast<size_t>(N));
    for (long n = 1; n <= N; ++n)
        t.b[static_cast<size_t>(n) - 1].assign(
            static_cast<size_t>(n),
            std::vector<BigReal>(static_cast<size_t>(n), BigReal::from_long(0, p)));

    // seeds
    t.b[0][0][0] = 2 / sqrt(pi_v);
    if (N >= 2) {
        BigReal fac1 = 2 * (1 - nuw) + nuw * nuw / 2;
        t.b[1][0][0] = 2 / (2 * pi_v) * fac1;            // printed as 2/(2 pi)
        t.b[1][0][1] = 3 / sqrt(2 * pi_v);
        t.b[1][1][1] = -2 / sqrt(2 * pi_v);
    }
    for (long n = 2; n < N; ++n) {
        auto& cur = t.b[static_cast<size_t>(n)];        // order n+1
        auto& prev = t.b[static_cast<size_t>(n) - 1];   // order n
        BigReal fac = 2 * (n - nuw) + nuw * nuw / (2 * n);
        BigReal inv_n = BigReal::from_long(1, p) / n;
        // top diagonal: b_{n+1,n,n} = -(1/n) b_{n,n-1,n-1}
        cur[static_cast<size_t>(n)][static_cast<size_t>(n)] =
            -inv_n * prev[static_cast<size_t>(n) - 1][static_cast<size_t>(n) - 1];
        // k = n-1 branch
        for (long l = 0; l <= n; ++l) {
            BigReal v = BigReal::from_long(0, p);
            if (l == 0) {
                // zero
            } else if (l <= n - 2) {
                v = -inv_n * prev[static_cast<size_t>(n) - 2][static_cast<size_t>(l) - 1];
            } else if (l == n - 1) {
                v = fac * prev[static_cast<size_t>(n) - 1][static_cast<size_t>(n) - 1] -
                    inv_n * prev[static_cast<size_t>(n) - 2][static_cast<size_t>(n) - 1];
            } else {  // l == n
                v = inv_n * (BigReal::from_string("1.5", p) + 2 * (n - 1)) *
                        prev[static_cast<size_t>(n) - 1][static_cast<size_t>(n) - 1] -
                    inv_n * prev[static_cast<size_t>(n) - 2][static_cast<size_t>(n) - 1];
            }
            cur[static_cast<size_t>(n) - 1][static_cast<size_t>(l)] = v;
        }
        // 1 <= k <= n-2 branch
        for (long k = 1; k <= n - 2; ++k) {
            for (long l = 0; l <= n; ++l) {
                BigReal v(p);
                if (l == 0) {
                    v = fac * prev[static_cast<size_t>(k)][0];
                } else if (l <= n - 1) {
                    v = fac * prev[static_cast<size_t>(k)][static_cast<size_t>(l)] +
                        inv_n * (BigReal::from_string("1.5", p) + k + l - 1) *
                            prev[static_cast<size_t>(k)][static_cast<size_t>(l) - 1] -
                        inv_n * prev[static_cast<size_t>(n) - 1][static_cast<size_t>(l) - 1];
                } else {  // l == n
                    v = inv_n * (BigReal::from_string("1.5", p) + k + n - 1) *
                            prev[static_cast<size_t>(k)][static_cast<size_t>(n) - 1] -
                        inv_n * prev[static_cast<size_t>(n) - 1][static_cast<size_t>(n) - 1];
                }
                cur[static_cast<size_t>(k)][static_cast<size_t>(l)] = v;
            }
        }
        // k = 0 branch
        for (long l = 0; l <= n; ++l) {
            BigReal v(p);
            if (l == 0) {
                v = fac * prev[0][0];
            } else if (l <= n - 1) {
                v = fac * prev[0][static_cast<size_t>(l)] +
                    inv_n * (BigReal::from_string("1.5", p) + l - 1) *
                        prev[0][static_cast<size_t>(l) - 1];
            } else {
                v = inv_n * (BigReal::from_string("1.5", p) + n - 1) *
                    prev[0][static_cast<size_t>(n) - 1];
            }
            cur[0][static_cast<size_t>(l)] = v;
        }
    }
    return t;
}

/// Smallest integer m with 2m + 1 - |nu - 1| non-negative (clamped at 0).
inline long n_star(const BigReal& nu) {
    BigReal b = abs(nu - 1);
    BigReal m = ceil((b - 1) / 2);
    long v = m.to_long();
    return v < 0 ? 0 : v;
}

/// C_{n,k}(h) as displayed, with the signed reading of W_l
/// (W_l(x) = 2 e^{x^2} int_x^inf t^l e^{-t^2} dt for any real x).
inline BigReal correction_C(long n, long k, const BigReal& h, const BigReal& nu,
                            const PrecisionContext& ctx) {
    if (h <= 0L) throw std::domain_error("correction_C: h must be > 0");
    if (n < 0 || k < 0) throw std::domain_error("correction_C: n, k must be >= 0");
    mpfr_prec_t p = ctx.prec_bits();
    BigReal hw = with_prec(h, p);
    BigReal beta = 2 * n + 1 - abs(with_prec(nu, p) - 1);
    if (beta.is_zero()) return BigReal::from_long(0, p);
    BigReal sqrt2 = sqrt(BigReal::from_long(2, p));
    BigReal x = beta * sqrt(2 * hw) / 2;
    BigReal s = BigReal::from_long(0, p);
    for (long l = 0; l <= 2 * k + 1; ++l) {
        BigReal piece = binomial(static_cast<unsigned long>(2 * k + 1),
                                 static_cast<unsigned long>(l), p) *
                        upper_gamma_scaled_signed(l, x, ctx) / pow(x, l);
        if (l % 2 == 0) piece = -piece;  // (-1)^(l-1)
        s += piece;
    }
    return sqrt(hw) * pow(beta * hw / sqrt2, 2 * k + 1) * s;
}

/// D_{n,k}(h) as displayed (rising-factorial Pochhammer); gamma_n = 0 is a
/// domain error surfaced to the caller.
inline BigReal correction_D(long n, long k, const BigReal& h, const BigReal& nu,
                            const PrecisionContext& ctx) {
    if (h <= 0L) throw std::domain_error("correction_D: h must be > 0");
    if (k < 1) throw std::domain_error("correction_D: k must be >= 1");
    mpfr_prec_t p = ctx.prec_bits();
    BigReal hw = with_prec(h, p);
    BigReal rho = abs(with_prec(nu, p) - 1) - 1 - 2 * n;
    BigReal gam = rho * rho / 4;
    if (gam.is_zero())
        throw std::domain_error("correction_D: gamma_n = 0 (|nu-1| = 1 + 2n boundary)");
    BigReal half = BigReal::from_string("0.5", p);
    BigReal s = BigReal::from_long(0, p);
    for (long l = 0; l < k; ++l) {
        BigReal piece = rising_factorial(half, l) / (2 * pow(hw * gam, l + 1));
        if (l % 2 == 1) piece = -piece;
        s += piece;
    }
    BigReal bracket = erfc_scaled(sqrt(2 * hw * gam), ctx) / sqrt(gam) -
                      sqrt(hw) / sqrt(quad::const_pi(p)) * s;
    BigReal lead = pow(-2 * gam, k) / rising_factorial(half, k) / 2;
    return lead * bracket;
}

/// Negative moments m_1..m_N with per-order breakdown into theta part and
/// correction part.
struct MomentTable {
    BigReal nu, h;
    long N = 0;
    long nstar = 0;
    std::vector<BigReal> m;                // m[n-1]
    std::vector<BigReal> theta_part;       // e^{nu^2 h/2} m_n theta contribution
    std::vector<BigReal> correction_part;  // e^{nu^2 h/2} m_n correction contribution

    const BigReal& moment(long n) const {
        if (n < 1 || static_cast<size_t>(n) > m.size())
            throw std::out_of_range("MomentTable: order out of range");
        return m[static_cast<size_t>(n) - 1];
    }
};

/// Assemble m_n = e^{-nu^2 h/2} [ sum_k a_{n,k} Theta_k + corrections ].
///
/// The correction for each mismatch index j < n* is u_{n,j} e^{rho_j^2 h/2}
/// with u_{1,j} = 2 rho_j and
/// u_{k,j} = (2(k-1-nu) + (nu^2 - rho_j^2)/(2(k-1))) u_{k-1,j}, the closed-form
/// solution of the first-moment recursion restricted to the non-theta part.
inline MomentTable negative_moments(long N, const BigReal& nu, const BigReal& h,
                                    const ThetaIntegralTable& theta,
                                    const PrecisionContext& ctx) {
    if (N < 1) throw std::domain_error("negative_moments: N must be >= 1");
    if (!(theta.nu == nu) || !(theta.h == h))
        throw std::invalid_argument("negative_moments: theta table (nu,h) mismatch");
    if (theta.order() < N)
        throw std::invalid_argument("negative_moments: theta table shorter than N");
    PrecisionContext work = ctx.with_guard(25 + static_cast<int>(N) / 4);
    mpfr_prec_t p = work.prec_bits();
    BigReal nuw = with_prec(nu, p), hw = with_prec(h, p);
    CoefficientTriangle tri = coeff_a(N, nuw, work);
    long ns = n_star(nuw);
    BigReal pref = exp(-nuw * nuw * hw / 2);

    // correction scale factors u_{n,j}
    std::vector<BigReal> u, expfac;
    for (long j = 0; j < ns; ++j) {
        BigReal rho = abs(nuw - 1) - 1 - 2 * j;
        u.push_back(2 * rho);
        expfac.push_back(exp(rho * rho * hw / 2));
    }

    MomentTable out{with_prec(nu, ctx.prec_bits()), with_prec(h, ctx.prec_bits()), N, ns, {}, {}, {}};
    for (long n = 1; n <= N; ++n) {
        if (n >= 2) {
            BigReal base = 2 * ((n - 1) - nuw);
            for (long j = 0; j < ns; ++j) {
                BigReal rho = abs(nuw - 1) - 1 - 2 * j;
                u[static_cast<size_t>(j)] *=
                    base + (nuw * nuw - rho * rho) / (2 * (n - 1));
            }
        }
        BigReal th = BigReal::from_long(0, p);
        BigReal peak = BigReal::from_long(0, p);
        for (long k = 1; k <= n; ++k) {
            BigReal piece = tri.a[static_cast<size_t>(n) - 1][static_cast<size_t>(k) - 1] *
                            with_prec(theta.theta(k), p);
            peak = max(peak, abs(piece));
            th += piece;
        }
        BigReal corr = BigReal::from_long(0, p);
        for (long j = 0; j < ns; ++j)
            corr += u[static_cast<size_t>(j)] * expfac[static_cast<size_t>(j)];
        out.theta_part.push_back(with_prec(pref * th, ctx.prec_bits()));
        out.correction_part.push_back(with_prec(pref * corr, ctx.prec_bits()));
        out.m.push_back(with_prec(pref * (th + corr), ctx.prec_bits()));
        (void)peak;
    }
    return out;
}

/// First negative moment by the Dufresne integral representation
///   m_1(h) = 2 e^{-nu^2 h/2} / sqrt(2 pi h^3)
///            int_0^inf y e^{-y^2/(2h)} cosh((nu-1)y)/sinh(y) dy,
/// valid for every real nu (oracles the general-case correction path).
inline BigReal first_moment_dufresne(const BigReal& nu, const BigReal& h,
                                     const PrecisionContext& ctx, const BigReal& tol) {
    if (h <= 0L) throw std::domain_error("first_moment_dufresne: h must be > 0");
    mpfr_prec_t p = ctx.prec_bits();
    BigReal nuw = with_prec(nu, p), hw = with_prec(h, p);
    BigReal b = abs(nuw - 1);
    auto f = [&](const BigReal& y) {
        if (y.is_zero()) return BigReal::from_long(1, p);
        return y * exp(-y * y / (2 * hw)) * cosh((nuw - 1) * y) / sinh(y);
    };
    // integrand ~ exp(-y^2/2h + (b-1) y); cut where the exponent is far below
    // the precision floor
    double digs = static_cast<double>(ctx.digits);
    double hd = hw.to_double(), bd = b.to_double();
    double ymax = (bd - 1.0) * hd + std::sqrt(2.0 * hd * (digs + 20.0) * 2.302585) + 1.0;
    BigReal Y = BigReal::from_double(ymax, p);
    BigReal head = quad::tanh_sinh(f, BigReal::from_long(0, p), min(Y, BigReal::from_long(1, p)), tol);
    BigReal tail = BigReal::from_long(0, p);
    if (Y > 1L) tail = quad::tanh_sinh(f, BigReal::from_long(1, p), Y, tol);
    BigReal pi_v = quad::const_pi(p);
    return 2 * exp(-nuw * nuw * hw / 2) / sqrt(2 * pi_v * pow(hw, 3)) * (head + tail);
}

/// E[A_h] = (e^{2h(nu+1)} - 1) / (2(nu+1)), with the removable singularity at
/// nu = -1 handled explicitly (value h).
inline BigReal positive_first_moment(const BigReal& nu, const BigReal& h,
                                     const PrecisionContext& ctx) {
    if (h <= 0L) throw std::domain_error("positive_first_moment: h must be > 0");
    mpfr_prec_t p = ctx.prec_bits();
    BigReal nuw = with_prec(nu, p), hw = with_prec(h, p);
    if (nuw == -1L) return hw;
    return expm1(2 * hw * (nuw + 1)) / (2 * (nuw + 1));
}

}  // namespace asianlag

#endif
