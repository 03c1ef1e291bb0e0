#include <catch2/catch_amalgamated.hpp>

#include "asianlag/big_real.hpp"
#include "asianlag/quadrature.hpp"
#include "asianlag/theta.hpp"

using namespace asianlag;

namespace {
const PrecisionContext ctx(160);
BigReal tol10(int e) { return pow10(-e, ctx.prec_bits()); }
const BigReal H = ctx.real("0.0225");
const BigReal B = ctx.real("0.3");
}  // namespace

TEST_CASE("theta function shift and symmetry") {
    BigReal z = ctx.real("0.37"), t = ctx.real("0.8");
    CHECK(abs(theta_fn(z, t, ctx) - theta_fn(z + 1, t, ctx)) < tol10(150));
    CHECK(abs(theta_fn(z, t, ctx) - theta_fn(-z, t, ctx)) < tol10(150));
    CHECK_THROWS_AS(theta_fn(z, ctx.real(0), ctx), std::domain_error);
}

TEST_CASE("theta(0|1) against direct high-precision summation") {
    // (1/sqrt(pi)) sum exp(-n^2), summed right here as the oracle
    BigReal s = ctx.real(1);
    for (long n = 1; n < 30; ++n) s += 2 * exp(ctx.real(-n * n));
    BigReal oracle = s / sqrt(ctx.pi());
    CHECK(abs(theta_fn(ctx.real(0), ctx.real(1), ctx) - oracle) < tol10(150));
}

TEST_CASE("jacobi transform equals the theta function") {
    CHECK_THROWS_AS(theta_jacobi_lhs(ctx.real(0), ctx.real(0), ctx), std::domain_error);
    std::uint64_t seed = 0x1234;
    auto next = [&]() {
        seed = seed * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(seed >> 11) / static_cast<double>(1ull << 53);
    };
    for (int i = 0; i < 12; ++i) {
        BigReal x = BigReal::from_double(next(), ctx.prec_bits());
        BigReal t = BigReal::from_double(0.05 + 4.95 * next(), ctx.prec_bits());
        BigReal lhs = theta_jacobi_lhs(x, t, ctx);
        BigReal rhs = theta_fn(x - ctx.real(1) / 2, t, ctx);
        CHECK(abs(lhs - rhs) < tol10(145) * abs(rhs));
    }
    // x = 1/2 kills the alternating sign: 1 + 2 sum exp(-(pi n)^2 t)
    BigReal t = ctx.real("0.7");
    BigReal direct = ctx.real(1);
    for (long n = 1; n < 40; ++n)
        direct += 2 * exp(-(ctx.pi() * n) * (ctx.pi() * n) * t);
    CHECK(abs(theta_jacobi_lhs(ctx.real(1) / 2, t, ctx) - direct) < tol10(150));
}

TEST_CASE("hyperbolic kernel") {
    BigReal y = ctx.real("0.9");
    CHECK(abs(hyperbolic_kernel(ctx.real(1), y) - 1 / (y * sinh(y))) < tol10(150));
    CHECK(abs(hyperbolic_kernel(ctx.real(0), y) - cosh(y) / (y * sinh(y))) < tol10(150));
    CHECK(abs(hyperbolic_kernel(ctx.real(1), ctx.real(1)) -
              ctx.real("0.85091812823932154513384276328717528418172466091034")) < tol10(49));
    CHECK_THROWS_AS(hyperbolic_kernel(ctx.real(1), ctx.real(0)), std::domain_error);
    CHECK_THROWS_AS(hyperbolic_kernel(ctx.real(3), y), std::domain_error);
}

TEST_CASE("Laplace transform of theta equals the hyperbolic kernel") {
    // one combination here; the 12-point sweep runs in the acceptance suite
    BigReal lhs = laplace_theta_quad(ctx.real(1), ctx.real(1), ctx, tol10(30));
    BigReal rhs = hyperbolic_kernel(ctx.real(1), ctx.real(1));
    CHECK(abs(lhs - rhs) < tol10(20) * rhs);
}

TEST_CASE("theta integral reproduces the printed growth-table anchors") {
    ThetaDiagnostics d1, d19;
    BigReal t1 = theta_integral(1, ctx.real(1), H, B, ctx, &d1);
    CHECK(t1.fixed(10) == "44.2790749547");
    CHECK(d1.n_c == 4);
    CHECK(d1.n_d == 4);
    BigReal t19 = theta_integral(19, ctx.real(1), H, B, ctx, &d19);
    CHECK(t19.fixed(10) == "4164445349148560860975785222305.1797500863");
    CHECK(d19.n_c == 4);
    CHECK(d19.n_d == 4);
}

TEST_CASE("theta integral is independent of the split point B") {
    for (long n : {1L, 3L}) {
        BigReal v1 = theta_integral(n, ctx.real(1), H, ctx.real("0.1"), ctx);
        BigReal v2 = theta_integral(n, ctx.real(1), H, B, ctx);
        BigReal v3 = theta_integral(n, ctx.real(1), H, ctx.real(1), ctx);
        CHECK(abs(v1 - v2) < tol10(30));
        CHECK(abs(v2 - v3) < tol10(30));
    }
}

TEST_CASE("series agrees with the defining-integral quadrature") {
    for (long n : {1L, 2L}) {
        BigReal s = theta_integral(n, ctx.real(1), H, B, ctx);
        BigReal q = theta_integral_quad(n, ctx.real(1), H, ctx, tol10(30));
        CHECK(abs(s - q) < tol10(20) * q);
        CHECK(s > 0L);
    }
    // non-unit drift index too
    BigReal s = theta_integral(1, ctx.real("0.5"), H, B, ctx);
    BigReal q = theta_integral_quad(1, ctx.real("0.5"), H, ctx, tol10(30));
    CHECK(abs(s - q) < tol10(20) * q);
}

TEST_CASE("per-term closed forms match their defining integrals") {
    // c_{B,m} (m >= 1) is (cos(pi m nu)/sqrt(2)) int_B^inf e^{-(pi m)^2 w}
    //   w^{n-1} (wh + 1/2)^{-(n+1/2)} dw
    mpfr_prec_t p = ctx.prec_bits();
    BigReal half = ctx.real(1) / 2;
    for (long n : {1L, 3L}) {
        for (long m : {1L, 2L}) {
            BigReal closed = theta_series_c_term(n, m, ctx.real(1), H, B, ctx);
            auto f = [&](const BigReal& w) {
                return exp(-(ctx.pi() * m) * (ctx.pi() * m) * w) * pow(w, n - 1) /
                       (pow(w * H + half, n) * sqrt(w * H + half));
            };
            BigReal integral = quad::tanh_sinh(f, B, ctx.real(30), tol10(60)) *
                               cos(ctx.pi() * m * ctx.real(1)) / sqrt(ctx.real(2));
            CHECK(abs(closed - integral) < tol10(45) * max(abs(integral), tol10(30)));
        }
    }
    // d_{B,m} is (1/(2 sqrt(2 pi))) int_0^B e^{-(m+nu/2)^2/w}
    //   w^{n-3/2} (wh+1/2)^{-(n+1/2)} dw
    for (long n : {1L, 3L}) {
        for (long m : {0L, -1L, 1L}) {
            BigReal closed = theta_series_d_term(n, m, ctx.real(1), H, B, ctx);
            BigReal a = m + half;
            auto f = [&](const BigReal& w) {
                return exp(-a * a / w) * pow(w, n - 1) / sqrt(w) /
                       (pow(w * H + half, n) * sqrt(w * H + half));
            };
            BigReal integral =
                quad::tanh_sinh(f, ctx.real(0), B, tol10(60)) / (2 * sqrt(2 * ctx.pi()));
            CHECK(abs(closed - integral) < tol10(45) * max(abs(integral), tol10(30)));
        }
    }
    // the closed-form special slot at m = -nu/2 (nu = 2 makes m = -1 special)
    {
        long n = 2;
        BigReal closed = theta_series_d_term(n, -1, ctx.real(2), H, B, ctx);
        auto f = [&](const BigReal& w) {
            return pow(w, n - 1) / sqrt(w) / (pow(w * H + half, n) * sqrt(w * H + half));
        };
        BigReal integral =
            quad::tanh_sinh(f, ctx.real(0), B, tol10(60)) / (2 * sqrt(2 * ctx.pi()));
        CHECK(abs(closed - integral) < tol10(45) * abs(integral));
    }
    (void)p;
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(theta_integral(0, ctx.real(1), H, B, ctx), std::domain_error);
    CHECK_THROWS_AS(theta_integral(1, ctx.real(1), ctx.real(0), B, ctx), std::domain_error);
    CHECK_THROWS_AS(theta_integral(1, ctx.real(1), H, ctx.real(0), ctx), std::domain_error);
    CHECK_THROWS_AS(theta_integral_quad(1, ctx.real(1), ctx.real(-1), ctx, tol10(20)),
                    std::domain_error);
}
