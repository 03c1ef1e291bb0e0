#include <catch2/catch_amalgamated.hpp>

#include "asianlag/big_real.hpp"
#include "asianlag/moments.hpp"
#include "asianlag/theta.hpp"

using namespace asianlag;

namespace {
const PrecisionContext ctx(160);
BigReal tol10(int e) { return pow10(-e, ctx.prec_bits()); }
const BigReal H = ctx.real("0.0225");
const BigReal B = ctx.real("0.3");
}  // namespace

TEST_CASE("a-coefficient triangle") {
    BigReal nu = ctx.real(1);
    CoefficientTriangle t = coeff_a(4, nu, ctx);
    CHECK(t.a[0][0] == ctx.real(1));
    CHECK(abs(t.a[1][1] - ctx.real(3) / 2) < tol10(155));
    // two hand-recursion steps at nu = 1
    CHECK(abs(t.a[2][0] - ctx.real(9) / 8) < tol10(154));
    CHECK(abs(t.a[2][1] - ctx.real(15) / 4) < tol10(154));
    CHECK(abs(t.a[2][2] - ctx.real(15) / 8) < tol10(154));
    // diagonal rule: a_{n,n} = prod (1 + 1/(2j))
    BigReal prod = ctx.real(1);
    for (long j = 1; j <= 3; ++j) prod *= (1 + ctx.real(1) / (2 * j));
    CHECK(abs(t.a[3][3] - prod) < tol10(153));
    CHECK_THROWS_AS(coeff_a(0, nu, ctx), std::domain_error);
}

TEST_CASE("general a-recursion reproduces the diagonal when k = n+1") {
    // with a_{n,n+1} treated as 0, the general rule at k = n+1 must equal
    // (1 + 1/(2n)) a_{n,n}
    BigReal nu = ctx.real("0.7");
    CoefficientTriangle t = coeff_a(6, nu, ctx);
    for (long n = 1; n < 6; ++n) {
        BigReal via_general = (BigReal(ctx.real(n)) / n + ctx.real(1) / (2 * n)) *
                              t.a[static_cast<size_t>(n) - 1][static_cast<size_t>(n) - 1];
        CHECK(abs(t.a[static_cast<size_t>(n)][static_cast<size_t>(n)] - via_general) <
              tol10(145) * abs(via_general));
    }
}

TEST_CASE("b-coefficient seeds and shape") {
    BigReal nu = ctx.real(1);
    BTriangle b = coeff_b(4, nu, ctx);
    CHECK(abs(b.at(1, 0, 0) - 2 / sqrt(ctx.pi())) < tol10(150));
    CHECK(abs(b.at(2, 1, 1) + 2 / sqrt(2 * ctx.pi())) < tol10(150));
    // one step of b_{n+1,n,n} = -(1/n) b_{n,n-1,n-1}
    CHECK(abs(b.at(3, 2, 2) - 1 / sqrt(2 * ctx.pi())) < tol10(150));
    // b_{n,n-1}(h) has the single nonzero slot l = n-1
    for (long n = 2; n <= 4; ++n) {
        for (long l = 0; l < n; ++l) {
            if (l == n - 1) continue;
            CHECK(b.at(n, n - 1, l).is_zero());
        }
        CHECK(!b.at(n, n - 1, n - 1).is_zero());
    }
}

TEST_CASE("n_star") {
    CHECK(n_star(ctx.real(1)) == 0);
    CHECK(n_star(ctx.real(0)) == 0);
    CHECK(n_star(ctx.real(2)) == 0);
    CHECK(n_star(ctx.real(3)) == 1);
    CHECK(n_star(ctx.real(4)) == 1);
    CHECK(n_star(ctx.real(6)) == 2);
    CHECK(n_star(ctx.real(-4)) == 2);
}

TEST_CASE("negative moments reproduce the printed growth table") {
    ThetaIntegralTable tab = compute_theta_table(19, ctx.real(1), H, B, ctx);
    MomentTable mom = negative_moments(19, ctx.real(1), H, tab, ctx);
    CHECK(mom.moment(1).fixed(10) == "43.7837269185");
    CHECK(mom.moment(3).fixed(10) == "91741.4898743896");
    CHECK(mom.moment(19).fixed(10) == "1576936784103137595901225118618858.9370371494");
    CHECK(mom.nstar == 0);

    // m_1 = e^{-nu^2 h/2} Theta_1 in the basic case
    CHECK(abs(mom.moment(1) - exp(-H / 2) * tab.theta(1)) < tol10(140));

    // log-convexity m_n m_{n+2} >= m_{n+1}^2
    for (long n = 1; n + 2 <= 19; ++n)
        CHECK(mom.moment(n) * mom.moment(n + 2) >= mom.moment(n + 1) * mom.moment(n + 1));

    // positivity and empty correction in the basic case
    for (long n = 1; n <= 19; ++n) {
        CHECK(mom.moment(n) > 0L);
        CHECK(mom.correction_part[static_cast<size_t>(n) - 1].is_zero());
        CHECK(mom.moment(n) == mom.theta_part[static_cast<size_t>(n) - 1]);
    }
}

TEST_CASE("moment table input contracts") {
    ThetaIntegralTable tab = compute_theta_table(2, ctx.real(1), H, B, ctx);
    CHECK_THROWS_AS(negative_moments(2, ctx.real("0.5"), H, tab, ctx), std::invalid_argument);
    CHECK_THROWS_AS(negative_moments(2, ctx.real(1), ctx.real("0.02"), tab, ctx),
                    std::invalid_argument);
    CHECK_THROWS_AS(negative_moments(5, ctx.real(1), H, tab, ctx), std::invalid_argument);
}

TEST_CASE("dufresne integral matches the assembled moments") {
    BigReal qtol = tol10(40);
    for (const char* nus : {"0", "0.5", "1"}) {
        BigReal nu = ctx.real(nus);
        ThetaIntegralTable tab = compute_theta_table(1, nu, H, B, ctx);
        MomentTable mom = negative_moments(1, nu, H, tab, ctx);
        BigReal duf = first_moment_dufresne(nu, H, ctx, qtol);
        CHECK(abs(mom.moment(1) - duf) < tol10(25) * duf);
    }
    // general case: nu = 4 exercises the correction path (n* = 1)
    BigReal nu = ctx.real(4);
    ThetaIntegralTable tab = compute_theta_table(2, nu, H, B, ctx);
    MomentTable mom = negative_moments(2, nu, H, tab, ctx);
    CHECK(mom.nstar == 1);
    CHECK(!mom.correction_part[0].is_zero());
    BigReal duf = first_moment_dufresne(nu, H, ctx, qtol);
    CHECK(abs(mom.moment(1) - duf) < tol10(25) * duf);
    CHECK(duf.fixed(10) == "40.8951678692");
}

TEST_CASE("finite-difference spot check of the derivative recursion at k = 2") {
    // m_2 = 2(2 - (nu+1)) m_1 - m_1'  with  m_1' by central differences
    for (const char* nus : {"1", "4"}) {
        BigReal nu = ctx.real(nus);
        BigReal qtol = tol10(60);
        BigReal dh = tol10(10);
        BigReal m1p = first_moment_dufresne(nu, H + dh, ctx, qtol);
        BigReal m1m = first_moment_dufresne(nu, H - dh, ctx, qtol);
        BigReal m1 = first_moment_dufresne(nu, H, ctx, qtol);
        BigReal m2_fd = 2 * (2 - (nu + 1)) * m1 - (m1p - m1m) / (2 * dh);
        ThetaIntegralTable tab = compute_theta_table(2, nu, H, B, ctx);
        MomentTable mom = negative_moments(2, nu, H, tab, ctx);
        CHECK(abs(mom.moment(2) - m2_fd) < tol10(12) * abs(m2_fd));
    }
}

TEST_CASE("positive first moment") {
    CHECK(positive_first_moment(ctx.real(-1), H, ctx) == H);
    BigReal e1 = positive_first_moment(ctx.real(1), H, ctx);
    CHECK(abs(e1 - (exp(ctx.real("0.09")) - 1) / 4) < tol10(150));
    BigReal e0 = positive_first_moment(ctx.real(0), H, ctx);
    CHECK(abs(e0 - (exp(2 * H) - 1) / 2) < tol10(150));
    CHECK_THROWS_AS(positive_first_moment(ctx.real(1), ctx.real(0), ctx), std::domain_error);
}

TEST_CASE("correction terms as displayed") {
    // beta_n = 0 kills C_{n,k}
    CHECK(correction_C(0, 0, ctx.real(1), ctx.real("2.5"), ctx).is_zero() == false);
    CHECK(correction_C(1, 0, ctx.real(1), ctx.real(4), ctx).is_zero());  // beta_1 = 3 - |4-1| = 0
    // (0,0,h=1,nu=1): beta_0 = 1, value per displayed formula
    {
        BigReal h1 = ctx.real(1);
        BigReal x = sqrt(ctx.real(2)) / 2;  // beta sqrt(2h)/2
        BigReal expect = sqrt(h1) * (h1 / sqrt(ctx.real(2))) *
                         (-upper_gamma_scaled_signed(0, x, ctx) +
                          upper_gamma_scaled_signed(1, x, ctx) / x);
        CHECK(abs(correction_C(0, 0, h1, ctx.real(1), ctx) - expect) < tol10(145));
    }
    // finite for h across the supported range
    for (const char* hs : {"0.001", "0.1", "10"}) {
        BigReal v = correction_C(1, 2, ctx.real(hs), ctx.real("0.3"), ctx);
        CHECK(!v.is_nan());
    }
    // D_{n,1} reduces to the two-term expression
    {
        BigReal nu = ctx.real(4), h1 = H;
        BigReal gam = ctx.real(1);  // (|nu-1|-1-2n)^2/4 at n=0: (3-1)^2/4 = 1
        BigReal expect = -2 * gam *
                         (erfc_scaled(sqrt(2 * h1 * gam), ctx) / sqrt(gam) -
                          sqrt(h1) / sqrt(ctx.pi()) / (2 * h1 * gam));
        CHECK(abs(correction_D(0, 1, h1, nu, ctx) - expect) < tol10(145));
    }
    // gamma_n = 0 boundary errors loudly
    CHECK_THROWS_AS(correction_D(1, 1, H, ctx.real(4), ctx), std::domain_error);
    CHECK_THROWS_AS(correction_D(0, 0, H, ctx.real(4), ctx), std::domain_error);
}

TEST_CASE("dufresne quadrature failure is explicit") {
    CHECK_THROWS_AS(first_moment_dufresne(ctx.real(1), ctx.real(0), ctx, tol10(40)),
                    std::domain_error);
}
