#ifndef ASIANLAG_PRICING_HPP
#define ASIANLAG_PRICING_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asianlag/big_real.hpp"
#include "asianlag/moments.hpp"
#include "asianlag/special_functions.hpp"

namespace asianlag {

/// Raw option data in money/time units.
struct MarketParams {
    BigReal spot, strike;
    BigReal drift, rate, sigma;
    BigReal t_issue, t_now, t_expiry;
    BigReal running_integral;  // int_{t0}^{t} S_u du

    void validate() const {
        if (!(spot > 0L) || !(strike > 0L))
            throw std::domain_error("MarketParams: spot and strike must be > 0");
        if (!(sigma > 0L)) throw std::domain_error("MarketParams: sigma must be > 0");
        if (!(t_expiry > t_issue)) throw std::domain_error("MarketParams: T must exceed t0");
        if (t_now < t_issue || t_now > t_expiry)
            throw std::domain_error("MarketParams: t must lie in [t0, T]");
        if (running_integral < 0L)
            throw std::domain_error("MarketParams: running integral must be >= 0");
    }
};

/// Yor-normalized option data: nu = 2 drift/sigma^2 - 1, h = sigma^2 (T-t)/4,
/// q = k h + q*, and the money-price factor
/// scale = e^{-r(T-t)}/(T-t0) * 4 S_t / sigma^2.
struct NormalizedParams {
    BigReal nu, h, q, scale;
};

inline NormalizedParams normalize(const MarketParams& mp, const PrecisionContext& ctx) {
    mp.validate();
    mpfr_prec_t p = ctx.prec_bits();
    BigReal sigma2 = with_prec(mp.sigma, p) * with_prec(mp.sigma, p);
    BigReal dT = with_prec(mp.t_expiry, p) - with_prec(mp.t_now, p);
    BigReal dT0 = with_prec(mp.t_expiry, p) - with_prec(mp.t_issue, p);
    NormalizedParams np;
    np.nu = 2 * with_prec(mp.drift, p) / sigma2 - 1;
    np.h = sigma2 * dT / 4;
    BigReal k = with_prec(mp.strike, p) / with_prec(mp.spot, p);
    BigReal qstar = sigma2 / (4 * with_prec(mp.spot, p)) *
                    (with_prec(mp.strike, p) * (with_prec(mp.t_now, p) - with_prec(mp.t_issue, p)) -
                     with_prec(mp.running_integral, p));
    np.q = k * np.h + qstar;
    np.scale = exp(-with_prec(mp.rate, p) * dT) / dT0 * 4 * with_prec(mp.spot, p) / sigma2;
    return np;
}

/// Degenerate closed form for q <= 0: C^(nu) = E[A_h] - q.
inline BigReal price_degenerate(const NormalizedParams& np, const PrecisionContext& ctx) {
    if (np.q > 0L)
        throw std::logic_error("price_degenerate: q > 0 must be routed to a series");
    return positive_first_moment(np.nu, np.h, ctx) - with_prec(np.q, ctx.prec_bits());
}

/// Partial-sum report of a pricing series run.
struct PriceRow {
    long n;
    BigReal partial;  // C_n^(nu)
    BigReal delta;    // C_n^(nu) - reference
};

struct PriceReport {
    std::string series_kind;  // "direct" | "ladder"
    BigReal c, alpha, beta;
    std::vector<PriceRow> rows;
    BigReal final_normalized;            // deepest partial sum
    std::optional<BigReal> accelerated;  // Wynn-epsilon extrapolation, when requested
    BigReal reference;                   // value the delta column is measured against
    bool reference_user_supplied = false;
    BigReal scale;                       // money = scale * normalized
};

/// Wynn epsilon acceleration of a partial-sum sequence (even columns).
inline BigReal wynn_epsilon(const std::vector<BigReal>& seq) {
    if (seq.size() < 3) return seq.empty() ? BigReal() : seq.back();
    mpfr_prec_t p = seq.front().prec();
    std::vector<BigReal> prev_prev(seq.size() + 1, BigReal::from_long(0, p));
    std::vector<BigReal> prev = seq;
    BigReal best = seq.back();
    for (size_t k = 1; k + 1 < seq.size(); ++k) {
        std::vector<BigReal> cur;
        cur.reserve(prev.size() - 1);
        for (size_t i = 0; i + 1 < prev.size(); ++i) {
            BigReal d = prev[i + 1] - prev[i];
            if (d.is_zero()) {
                cur.push_back(prev_prev[i + 1]);
            } else {
                cur.push_back(prev_prev[i + 1] + 1 / d);
            }
        }
        prev_prev = std::move(prev);
        prev = std::move(cur);
        if (k % 2 == 0 && !prev.empty()) best = prev.back();
    }
    return best;
}

namespace detail {

inline void fill_report(PriceReport& rep, const std::vector<BigReal>& partials,
                        const std::optional<BigReal>& user_ref, bool accelerate) {
    rep.final_normalized = partials.back();
    if (accelerate) rep.accelerated = wynn_epsilon(partials);
    rep.reference_user_supplied = user_ref.has_value();
    rep.reference = user_ref ? *user_ref : rep.final_normalized;
    rep.rows.clear();
    for (size_t i = 0; i < partials.size(); ++i)
        rep.rows.push_back({static_cast<long>(i), partials[i], partials[i] - rep.reference});
}

}  // namespace detail

/// First Laguerre pricing series:
///   C^(nu) = (1/c) sum_n c_n E[X L_n^alpha(qc/X)],  0 < qc < 1/2,
/// with the coefficients of the Laguerre expansion of (c-x)^+,
///   c_n = sum_k (-1)^k/Gamma(k+a+1) C(n,k)
///         [ (c-k-a-1) gamma(k+a+1, c) + c^{k+a+1} e^{-c} ],
/// and E[X L_n(qc/X)] expanded through E[X^{1-k}] (k=0: E[X], k=1: 1,
/// k>=2: m_{k-1}).
inline PriceReport price_direct(const NormalizedParams& np, const BigReal& c,
                                const BigReal& alpha, long N, const MomentTable& moments,
                                const PrecisionContext& ctx,
                                std::optional<BigReal> reference = std::nullopt,
                                bool accelerate = false) {
    if (!(np.q > 0L)) throw std::domain_error("price_direct: requires q > 0");
    BigReal qc = np.q * c;
    if (!(qc > 0L) || !(2 * qc < 1L))
        throw std::domain_error(
            "price_direct: series hypothesis 0 < qc < 1/2 violated (qc = " +
            qc.str(8) + ")");
    if (moments.N < N - 1 && N >= 2)
        throw std::invalid_argument("price_direct: moment table must extend to m_(N-1)");
    PrecisionContext work = ctx.with_guard(20 + static_cast<int>(N) / 3);
    mpfr_prec_t p = work.prec_bits();
    BigReal cw = with_prec(c, p), aw = with_prec(alpha, p), qcw = with_prec(qc, p);
    BigReal ex = positive_first_moment(np.nu, np.h, work);

    // Laguerre coefficients of (c-x)^+
    std::vector<BigReal> coef;
    for (long n = 0; n <= N; ++n) {
        BigReal s = BigReal::from_long(0, p);
        for (long k = 0; k <= n; ++k) {
            BigReal g = lower_gamma(k + aw + 1, cw, work);
            BigReal piece = binomial(static_cast<unsigned long>(n),
                                     static_cast<unsigned long>(k), p) /
                            gamma(k + aw + 1) *
                            ((cw - k - aw - 1) * g + pow(cw, k + 1) * pow(cw, aw) * exp(-cw));
            if (k % 2 == 1) piece = -piece;
            s += piece;
        }
        coef.push_back(s);
    }

    std::vector<BigReal> partials;
    BigReal sum = BigReal::from_long(0, p);
    for (long n = 0; n <= N; ++n) {
        BigReal exl = BigReal::from_long(0, p);
        for (long k = 0; k <= n; ++k) {
            BigReal em(p);
            if (k == 0)
                em = ex;
            else if (k == 1)
                em = BigReal::from_long(1, p);
            else
                em = with_prec(moments.moment(k - 1), p);
            BigReal piece = gamma(n + aw + 1) / gamma(k + aw + 1) * pow(qcw, k) /
                            (factorial(static_cast<unsigned long>(k), p) *
                             factorial(static_cast<unsigned long>(n - k), p)) *
                            em;
            if (k % 2 == 1) piece = -piece;
            exl += piece;
        }
        sum += coef[static_cast<size_t>(n)] * exl;
        partials.push_back(with_prec(sum / cw, ctx.prec_bits()));
    }

    PriceReport rep;
    rep.series_kind = "direct";
    rep.c = with_prec(c, ctx.prec_bits());
    rep.alpha = with_prec(alpha, ctx.prec_bits());
    rep.beta = BigReal::from_long(0, ctx.prec_bits());
    rep.scale = BigReal::from_long(1, ctx.prec_bits());
    detail::fill_report(rep, partials, reference, accelerate);
    return rep;
}

/// Ladder-height Laguerre series (delta = -1 branch):
///   C^(nu) = E[X] - q + (q^2 c / 2) m_1 gbar2(c),
///   gbar2(c) = c^{-beta} e^{-c} sum_n c_n L_n^alpha(c),
///   c_n = sum_k (-1)^k/Gamma(k+a+1) C(n,k) I_k,
///   I_k = (2/m_1) (qc)^{a+b+k} / ((a+b+k+1)(a+b+k+2)) m_{a+b+k+1}.
inline PriceReport price_ladder(const NormalizedParams& np, const BigReal& c,
                                const BigReal& alpha, const BigReal& beta, long N,
                                const MomentTable& moments, const PrecisionContext& ctx,
                                std::optional<BigReal> reference = std::nullopt,
                                bool accelerate = false) {
    if (!(np.q > 0L)) throw std::domain_error("price_ladder: requires q > 0");
    if (!(c > 0L)) throw std::domain_error("price_ladder: requires c > 0");
    BigReal qc = np.q * c;
    if (!(2 * qc < 1L))
        throw std::domain_error(
            "price_ladder: series hypothesis qc < 1/2 violated (qc = " + qc.str(8) + ")");
    BigReal ab = alpha + beta;
    BigReal ab_round = round_nearest(ab);
    if (!(abs(ab - ab_round) < pow10(-20, ab.prec())) || ab_round < 0L)
        throw std::invalid_argument(
            "price_ladder: unsupported configuration, alpha+beta+k+1 must be a positive "
            "integer for all k (needs the deferred Bessel machinery otherwise)");
    long ab_int = ab_round.to_long();
    if (moments.N < ab_int + N + 1)
        throw std::invalid_argument("price_ladder: moment table must extend to m_(alpha+beta+N+1)");

    PrecisionContext work = ctx.with_guard(20 + static_cast<int>(N) / 3);
    mpfr_prec_t p = work.prec_bits();
    BigReal cw = with_prec(c, p), aw = with_prec(alpha, p), bw = with_prec(beta, p);
    BigReal qw = with_prec(np.q, p), qcw = with_prec(qc, p);
    BigReal m1 = with_prec(moments.moment(1), p);
    BigReal ex = positive_first_moment(np.nu, np.h, work);

    std::vector<BigReal> I;
    for (long k = 0; k <= N; ++k) {
        long idx = ab_int + k + 1;
        BigReal ik = 2 / m1 * pow(qcw, ab_int + k) /
                     ((ab_int + k + 1) * BigReal::from_long(ab_int + k + 2, p)) *
                     with_prec(moments.moment(idx), p);
        I.push_back(ik);
    }

    BigReal head = ex - qw;
    BigReal factor = qw * qw * cw / 2 * m1 * exp(-cw) / pow(cw, bw);
    std::vector<BigReal> partials;
    BigReal S = BigReal::from_long(0, p);
    for (long n = 0; n <= N; ++n) {
        BigReal cn = BigReal::from_long(0, p);
        for (long k = 0; k <= n; ++k) {
            BigReal piece = binomial(static_cast<unsigned long>(n),
                                     static_cast<unsigned long>(k), p) /
                            gamma(k + aw + 1) * I[static_cast<size_t>(k)];
            if (k % 2 == 1) piece = -piece;
            cn += piece;
        }
        S += cn * laguerre(n, aw, cw);
        partials.push_back(with_prec(head + factor * S, ctx.prec_bits()));
    }

    PriceReport rep;
    rep.series_kind = "ladder";
    rep.c = with_prec(c, ctx.prec_bits());
    rep.alpha = with_prec(alpha, ctx.prec_bits());
    rep.beta = with_prec(beta, ctx.prec_bits());
    rep.scale = BigReal::from_long(1, ctx.prec_bits());
    detail::fill_report(rep, partials, reference, accelerate);
    return rep;
}

/// Money values: multiplies the normalized report through by np.scale.
inline void denormalize(PriceReport& rep, const NormalizedParams& np) {
    rep.scale = np.scale;
}

inline BigReal money_price(const PriceReport& rep, const BigReal& normalized) {
    return rep.scale * normalized;
}

}  // namespace asianlag

#endif
