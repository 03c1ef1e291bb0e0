// Command-line front end: pricing runs, moment/theta table generation,
// reference-table reproduction, and validation sweeps.
//
// Exit codes: 0 ok, 1 validation failure, 2 domain error, 3 non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "asianlag/big_real.hpp"
#include "asianlag/density_oracle.hpp"
#include "asianlag/moments.hpp"
#include "asianlag/monte_carlo.hpp"
#include "asianlag/pricing.hpp"
#include "asianlag/quadrature.hpp"
#include "asianlag/special_functions.hpp"
#include "asianlag/theta.hpp"

using asianlag::BigReal;
using asianlag::PrecisionContext;
using json = nlohmann::json;

namespace {

struct OutputSink {
    std::string path;  // empty: stdout

    void write(const std::string& text) const {
        if (path.empty()) {
            std::fputs(text.c_str(), stdout);
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open output file: " + path);
            f << text;
        }
    }
};

std::string fmt_delta(const BigReal& d) {
    if (abs(d) < asianlag::pow10(-10, d.prec()) && !d.is_zero()) return d.str(4);
    return d.fixed(10);
}

// keys ordered as inserted
using ojson = nlohmann::ordered_json;

struct PriceCliOpts {
    // market block
    double spot = 0, strike = 0, rate = 0, drift = 0, sigma = 0;
    double issue = 0, now = 0, expiry = 0, running_integral = 0;
    bool market_given = false;
    // normalized block
    std::string nu_s, h_s, q_s;
    // series options
    std::string series = "ladder";
    std::string c_s;
    std::string alpha_s = "0", beta_s = "0";
    long terms = 19;
    std::string reference_s;
    bool accelerate = false;
    double conv_tol = 1e-9;
    // numeric/output
    int digits = 160;
    std::string B_s = "0.3";
    std::string format = "text";
    std::string out_path;
};

int cmd_price(const PriceCliOpts& o) {
    PrecisionContext ctx(o.digits);
    asianlag::NormalizedParams np;
    if (o.market_given && !o.nu_s.empty())
        throw std::domain_error("exactly one of the market block and the normalized block may be given");
    if (o.market_given) {
        asianlag::MarketParams mp{
            BigReal::from_double(o.spot, ctx.prec_bits()),
            BigReal::from_double(o.strike, ctx.prec_bits()),
            BigReal::from_double(o.drift, ctx.prec_bits()),
            BigReal::from_double(o.rate, ctx.prec_bits()),
            BigReal::from_double(o.sigma, ctx.prec_bits()),
            BigReal::from_double(o.issue, ctx.prec_bits()),
            BigReal::from_double(o.now, ctx.prec_bits()),
            BigReal::from_double(o.expiry, ctx.prec_bits()),
            BigReal::from_double(o.running_integral, ctx.prec_bits())};
        np = asianlag::normalize(mp, ctx);
    } else if (!o.nu_s.empty() && !o.h_s.empty() && !o.q_s.empty()) {
        np.nu = ctx.real(o.nu_s);
        np.h = ctx.real(o.h_s);
        np.q = ctx.real(o.q_s);
        np.scale = ctx.real(1);
    } else {
        throw std::domain_error("need either the full market block or the full normalized block (--nu --h --q)");
    }

    ojson doc;
    doc["config"] = {{"command", "price"},
                     {"series", o.series},
                     {"terms", o.terms},
                     {"digits", o.digits},
                     {"nu", np.nu.str(30)},
                     {"h", np.h.str(30)},
                     {"q", np.q.str(30)},
                     {"scale", np.scale.str(30)}};

    if (!(np.q > 0L)) {
        // degenerate closed form, no series
        BigReal cnu = asianlag::price_degenerate(np, ctx);
        BigReal money = np.scale * cnu;
        doc["results"] = {{"kind", "degenerate"},
                          {"normalized_price", cnu.str(o.digits / 2)},
                          {"money_price", money.str(o.digits / 2)}};
        doc["diagnostics"] = {{"converged", true}};
        doc["residuals"] = ojson::object();
        OutputSink sink{o.out_path};
        if (o.format == "json") {
            sink.write(doc.dump(2) + "\n");
        } else if (o.format == "csv") {
            sink.write("kind,normalized_price,money_price\ndegenerate," +
                       cnu.str(30) + "," + money.str(30) + "\n");
        } else {
            sink.write("degenerate closed form (q <= 0): C^(nu) = E[A_h] - q\n"
                       "normalized price = " + cnu.str(30) + "\n" +
                       "money price      = " + money.str(30) + "\n");
        }
        return 0;
    }

    if (o.c_s.empty())
        throw std::domain_error("series pricing requires --c (the convergence parameter)");
    BigReal c = ctx.real(o.c_s);
    BigReal alpha = ctx.real(o.alpha_s), beta = ctx.real(o.beta_s);

    // moments to the depth the series needs
    long ab = std::lround(alpha.to_double() + beta.to_double());
    long depth = std::max<long>(o.terms + ab + 1, o.terms - 1);
    depth = std::max<long>(depth, 1);
    asianlag::ThetaIntegralTable tab =
        asianlag::compute_theta_table(depth, np.nu, np.h, ctx.real(o.B_s), ctx);
    asianlag::MomentTable mom = asianlag::negative_moments(depth, np.nu, np.h, tab, ctx);

    std::optional<BigReal> ref;
    if (!o.reference_s.empty()) ref = ctx.real(o.reference_s);

    asianlag::PriceReport rep =
        (o.series == "direct")
            ? asianlag::price_direct(np, c, alpha, o.terms, mom, ctx, ref, o.accelerate)
            : asianlag::price_ladder(np, c, alpha, beta, o.terms, mom, ctx, ref, o.accelerate);
    asianlag::denormalize(rep, np);

    // convergence: the last three increments are below conv_tol relative
    bool converged = rep.rows.size() >= 4;
    if (converged) {
        BigReal tolr = BigReal::from_double(o.conv_tol, ctx.prec_bits()) *
                       max(abs(rep.final_normalized), asianlag::pow10(-30, ctx.prec_bits()));
        for (size_t i = rep.rows.size() - 3; i < rep.rows.size(); ++i) {
            BigReal inc = abs(rep.rows[i].partial - rep.rows[i - 1].partial);
            if (!(inc <= tolr)) converged = false;
        }
    }

    BigReal money_final = rep.scale * rep.final_normalized;
    doc["results"]["rows"] = ojson::array();
    for (const auto& row : rep.rows) {
        BigReal cbs = rep.scale * row.partial;
        BigReal dbs = cbs - rep.scale * rep.reference;
        doc["results"]["rows"].push_back({{"n", row.n},
                                          {"C_nu", row.partial.str(20)},
                                          {"delta_nu", row.delta.str(8)},
                                          {"C_bs", cbs.str(20)},
                                          {"delta_bs", dbs.str(8)}});
    }
    doc["results"]["normalized_price"] = rep.final_normalized.str(30);
    doc["results"]["money_price"] = money_final.str(30);
    if (rep.accelerated) {
        doc["results"]["accelerated_normalized"] = rep.accelerated->str(30);
        doc["results"]["accelerated_money"] = (rep.scale * *rep.accelerated).str(30);
    }
    doc["diagnostics"] = {{"converged", converged},
                          {"reference", rep.reference.str(30)},
                          {"reference_user_supplied", rep.reference_user_supplied}};
    doc["residuals"] = ojson::object();

    OutputSink sink{o.out_path};
    if (o.format == "json") {
        sink.write(doc.dump(2) + "\n");
    } else if (o.format == "csv") {
        std::string s = "n,C_nu,delta_nu,C_bs,delta_bs\n";
        for (const auto& row : rep.rows) {
            BigReal cbs = rep.scale * row.partial;
            BigReal dbs = cbs - rep.scale * rep.reference;
            s += std::to_string(row.n) + "," + row.partial.fixed(10) + "," +
                 fmt_delta(row.delta) + "," + cbs.fixed(8) + "," + fmt_delta(dbs) + "\n";
        }
        sink.write(s);
    } else {
        std::string s = "series: " + rep.series_kind + "  c = " + rep.c.str(13) +
                        "  alpha = " + rep.alpha.str(4) + "  beta = " + rep.beta.str(4) + "\n";
        s += "  n            C_n^(nu)        Delta_n^(nu)          C_n^BS        Delta_n^BS\n";
        for (const auto& row : rep.rows) {
            BigReal cbs = rep.scale * row.partial;
            BigReal dbs = cbs - rep.scale * rep.reference;
            char buf[16];
            std::snprintf(buf, sizeof buf, "%3ld", row.n);
            s += std::string(buf) + "  " + row.partial.fixed(12) + "  " + fmt_delta(row.delta) +
                 "  " + cbs.fixed(8) + "  " + fmt_delta(dbs) + "\n";
        }
        s += "normalized price = " + rep.final_normalized.str(30) + "\n";
        s += "money price      = " + money_final.str(30) + "\n";
        if (rep.accelerated)
            s += "accelerated      = " + rep.accelerated->str(30) + " (money " +
                 (rep.scale * *rep.accelerated).str(30) + ")\n";
        s += std::string("converged        = ") + (converged ? "yes" : "no") + "\n";
        sink.write(s);
    }
    return converged ? 0 : 3;
}

struct SimpleOpts {
    std::string nu_s = "1", h_s = "0.0225", B_s = "0.3";
    long terms = 19;
    int digits = 160;
    std::string format = "text";
    std::string out_path;
};

int cmd_moments(const SimpleOpts& o) {
    PrecisionContext ctx(o.digits);
    BigReal nu = ctx.real(o.nu_s), h = ctx.real(o.h_s), B = ctx.real(o.B_s);
    asianlag::ThetaIntegralTable tab = asianlag::compute_theta_table(o.terms, nu, h, B, ctx);
    asianlag::MomentTable mom = asianlag::negative_moments(o.terms, nu, h, tab, ctx);
    OutputSink sink{o.out_path};
    if (o.format == "json") {
        ojson doc;
        doc["config"] = {{"command", "moments"}, {"nu", o.nu_s}, {"h", o.h_s},
                         {"terms", o.terms}, {"digits", o.digits}, {"B", o.B_s}};
        doc["results"]["n_star"] = mom.nstar;
        doc["results"]["moments"] = ojson::array();
        for (long n = 1; n <= o.terms; ++n)
            doc["results"]["moments"].push_back(
                {{"n", n},
                 {"m_n", mom.moment(n).str(40)},
                 {"theta_part", mom.theta_part[static_cast<size_t>(n) - 1].str(30)},
                 {"correction_part", mom.correction_part[static_cast<size_t>(n) - 1].str(30)}});
        doc["diagnostics"] = ojson::object();
        doc["residuals"] = ojson::object();
        sink.write(doc.dump(2) + "\n");
    } else if (o.format == "csv") {
        std::string s = "n,m_n\n";
        for (long n = 1; n <= o.terms; ++n)
            s += std::to_string(n) + "," + mom.moment(n).fixed(10) + "\n";
        sink.write(s);
    } else {
        std::string s = "negative moments m_n(h), nu = " + o.nu_s + ", h = " + o.h_s +
                        ", n* = " + std::to_string(mom.nstar) + "\n";
        for (long n = 1; n <= o.terms; ++n)
            s += "  m_" + std::to_string(n) + " = " + mom.moment(n).fixed(10) + "\n";
        sink.write(s);
    }
    return 0;
}

int cmd_theta(const SimpleOpts& o) {
    PrecisionContext ctx(o.digits);
    BigReal nu = ctx.real(o.nu_s), h = ctx.real(o.h_s), B = ctx.real(o.B_s);
    asianlag::ThetaIntegralTable tab = asianlag::compute_theta_table(o.terms, nu, h, B, ctx);
    OutputSink sink{o.out_path};
    if (o.format == "json") {
        ojson doc;
        doc["config"] = {{"command", "theta"}, {"nu", o.nu_s}, {"h", o.h_s},
                         {"B", o.B_s}, {"terms", o.terms}, {"digits", o.digits}};
        doc["results"]["theta"] = ojson::array();
        for (long n = 1; n <= o.terms; ++n)
            doc["results"]["theta"].push_back({{"n", n},
                                               {"value", tab.theta(n).str(40)},
                                               {"n_c30", tab.diagnostics[static_cast<size_t>(n) - 1].n_c},
                                               {"n_d30", tab.diagnostics[static_cast<size_t>(n) - 1].n_d}});
        doc["diagnostics"] = ojson::object();
        doc["residuals"] = ojson::object();
        sink.write(doc.dump(2) + "\n");
    } else if (o.format == "csv") {
        std::string s = "n,n_c30,n_d30,theta_n\n";
        for (long n = 1; n <= o.terms; ++n)
            s += std::to_string(n) + "," +
                 std::to_string(tab.diagnostics[static_cast<size_t>(n) - 1].n_c) + "," +
                 std::to_string(tab.diagnostics[static_cast<size_t>(n) - 1].n_d) + "," +
                 tab.theta(n).fixed(10) + "\n";
        sink.write(s);
    } else {
        std::string s = "Theta integrals, nu = " + o.nu_s + ", h = " + o.h_s + ", B = " + o.B_s + "\n";
        s += "  n  n_c30  n_d30  Theta_n\n";
        for (long n = 1; n <= o.terms; ++n) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%3ld  %5ld  %5ld  ", n,
                          tab.diagnostics[static_cast<size_t>(n) - 1].n_c,
                          tab.diagnostics[static_cast<size_t>(n) - 1].n_d);
            s += std::string(buf) + tab.theta(n).fixed(10) + "\n";
        }
        sink.write(s);
    }
    return 0;
}

struct TablesOpts {
    int which = 1;
    int digits = 160;
    std::string format = "csv";
    std::string out_path;
};

// Hard-wired worked-example parameters: nu=1, h=q=0.0225, B=0.3,
// scale = e^{-0.09} * 400/0.09, reference = 8.83/scale.
int cmd_tables(const TablesOpts& o) {
    PrecisionContext ctx(o.digits);
    BigReal nu = ctx.real(1), h = ctx.real("0.0225"), q = ctx.real("0.0225");
    BigReal B = ctx.real("0.3");
    OutputSink sink{o.out_path};
    std::string s;
    if (o.which == 1) {
        asianlag::ThetaIntegralTable tab = asianlag::compute_theta_table(19, nu, h, B, ctx);
        s = "n,n_c30,n_d30,theta_n\n";
        for (long n = 1; n <= 19; n += 2)
            s += std::to_string(n) + "," +
                 std::to_string(tab.diagnostics[static_cast<size_t>(n) - 1].n_c) + "," +
                 std::to_string(tab.diagnostics[static_cast<size_t>(n) - 1].n_d) + "," +
                 tab.theta(n).fixed(10) + "\n";
    } else if (o.which == 2) {
        asianlag::ThetaIntegralTable tab = asianlag::compute_theta_table(19, nu, h, B, ctx);
        asianlag::MomentTable mom = asianlag::negative_moments(19, nu, h, tab, ctx);
        s = "n,m_n\n";
        for (long n = 1; n <= 19; n += 2)
            s += std::to_string(n) + "," + mom.moment(n).fixed(10) + "\n";
    } else if (o.which == 3 || o.which == 4) {
        asianlag::ThetaIntegralTable tab = asianlag::compute_theta_table(21, nu, h, B, ctx);
        asianlag::MomentTable mom = asianlag::negative_moments(21, nu, h, tab, ctx);
        asianlag::NormalizedParams np{nu, h, q,
                                      exp(ctx.real("-0.09")) * 400 / ctx.real("0.09")};
        BigReal c = (o.which == 3) ? ctx.real("1.367054258545") : ctx.real(6);
        BigReal ref = ctx.real("8.83") / np.scale;
        asianlag::PriceReport rep = asianlag::price_ladder(
            np, c, ctx.real(0), ctx.real(0), 19, mom, ctx, ref, false);
        asianlag::denormalize(rep, np);
        s = "n,C_nu,delta_nu,C_bs,delta_bs\n";
        for (long n = 1; n <= 19; n += 2) {
            const auto& row = rep.rows[static_cast<size_t>(n)];
            BigReal cbs = rep.scale * row.partial;
            BigReal dbs = cbs - ctx.real("8.83");
            s += std::to_string(n) + "," + row.partial.fixed(10) + "," + fmt_delta(row.delta) +
                 "," + cbs.fixed(8) + "," + fmt_delta(dbs) + "\n";
        }
    } else {
        throw std::domain_error("tables: --which must be 1, 2, 3 or 4");
    }
    if (o.format == "json") {
        ojson doc;
        doc["config"] = {{"command", "tables"}, {"which", o.which}, {"digits", o.digits}};
        doc["results"]["csv"] = s;
        doc["diagnostics"] = ojson::object();
        doc["residuals"] = ojson::object();
        sink.write(doc.dump(2) + "\n");
    } else {
        sink.write(s);
    }
    return 0;
}

struct CheckOpts {
    int digits = 160;
    std::string nu_s = "1";
    std::uint64_t seed = 20260809;
    std::uint64_t paths = 200000;
    double mc_sigmas = 3.0;
    bool skip_density = false;
    bool skip_mc = false;
    std::string out_path;
};

struct CheckResult {
    std::string name;
    bool pass;
    std::string residual;
    std::string tolerance;
};

int cmd_check(const CheckOpts& o) {
    PrecisionContext ctx(o.digits);
    std::vector<CheckResult> results;
    auto add = [&](const std::string& name, const BigReal& residual, const BigReal& tol) {
        results.push_back({name, residual <= tol, residual.str(6), tol.str(4)});
    };

    mpfr_prec_t p = ctx.prec_bits();
    BigReal h = ctx.real("0.0225");
    BigReal B = ctx.real("0.3");
    BigReal nu_user = ctx.real(o.nu_s);

    // 1. Jacobi transformation identity at 50 seeded points
    {
        std::uint64_t s = o.seed;
        BigReal worst = ctx.real(0);
        for (int i = 0; i < 50; ++i) {
            double xr = asianlag::mc::detail::u01(s);
            double tr = 0.05 + 4.95 * asianlag::mc::detail::u01(s);
            BigReal x = BigReal::from_double(xr, p), t = BigReal::from_double(tr, p);
            BigReal lhs = asianlag::theta_jacobi_lhs(x, t, ctx);
            BigReal rhs = asianlag::theta_fn(x - ctx.real(1) / 2, t, ctx);
            worst = max(worst, abs(lhs - rhs) / abs(rhs));
        }
        add("jacobi_identity", worst, asianlag::pow10(-(o.digits - 12), p));
    }

    // 2. Laplace-theta identity, 12 parameter combinations
    {
        BigReal worst = ctx.real(0);
        BigReal qtol = asianlag::pow10(-26, p);
        for (const char* nus : {"0", "0.5", "1", "2"}) {
            for (const char* ys : {"0.5", "1", "2"}) {
                BigReal nu = ctx.real(nus), y = ctx.real(ys);
                BigReal lhs = asianlag::laplace_theta_quad(nu, y, ctx, qtol);
                BigReal rhs = asianlag::hyperbolic_kernel(nu, y);
                worst = max(worst, abs(lhs - rhs) / abs(rhs));
            }
        }
        add("laplace_theta_identity", worst, asianlag::pow10(-20, p));
    }

    // 3. Laguerre orthogonality, n, m <= 12, alpha in {0, 1/2}
    {
        BigReal worst = ctx.real(0);
        for (const char* as : {"0", "0.5"}) {
            BigReal alpha = ctx.real(as);
            auto w = [&](const BigReal& x) { return pow(x, alpha) * exp(-x); };
            for (int n = 0; n <= 12; ++n) {
                for (int m = n; m <= 12; ++m) {
                    auto f = [&](const BigReal& x) {
                        return w(x) * asianlag::laguerre(n, alpha, x) *
                               asianlag::laguerre(m, alpha, x);
                    };
                    BigReal val = asianlag::quad::gauss_legendre(f, ctx.real(0), ctx.real(200), 160);
                    BigReal norm = gamma(n + alpha + 1) / asianlag::factorial(n, p);
                    BigReal resid = (n == m) ? abs(val - norm) / norm : abs(val) / norm;
                    worst = max(worst, resid);
                }
            }
        }
        add("laguerre_orthogonality", worst, asianlag::pow10(-(o.digits / 2), p));
    }

    // 4. B-invariance of the theta-integral series
    {
        BigReal worst = ctx.real(0);
        for (long n : {1L, 3L}) {
            BigReal v1 = asianlag::theta_integral(n, nu_user, h, ctx.real("0.1"), ctx);
            BigReal v2 = asianlag::theta_integral(n, nu_user, h, B, ctx);
            BigReal v3 = asianlag::theta_integral(n, nu_user, h, ctx.real(1), ctx);
            worst = max(worst, max(abs(v1 - v2), max(abs(v2 - v3), abs(v1 - v3))));
        }
        add("theta_B_invariance", worst, asianlag::pow10(-30, p));
    }

    // 5. series vs quadrature oracle
    {
        BigReal worst = ctx.real(0);
        BigReal qtol = asianlag::pow10(-30, p);
        for (long n : {1L, 2L, 3L}) {
            BigReal a = asianlag::theta_integral(n, nu_user, h, B, ctx);
            BigReal b = asianlag::theta_integral_quad(n, nu_user, h, ctx, qtol);
            worst = max(worst, abs(a - b) / abs(b));
        }
        add("theta_series_vs_quad", worst, asianlag::pow10(-20, p));
    }

    // 6. moments vs Dufresne integral (exercises the correction path when
    //    |nu - 1| > 1)
    {
        asianlag::ThetaIntegralTable tab = asianlag::compute_theta_table(1, nu_user, h, B, ctx);
        asianlag::MomentTable mom = asianlag::negative_moments(1, nu_user, h, tab, ctx);
        BigReal duf = asianlag::first_moment_dufresne(nu_user, h, ctx, asianlag::pow10(-40, p));
        add("dufresne_first_moment", abs(mom.moment(1) - duf) / duf, asianlag::pow10(-20, p));
    }

    // 7. moment log-convexity
    {
        asianlag::ThetaIntegralTable tab = asianlag::compute_theta_table(10, nu_user, h, B, ctx);
        asianlag::MomentTable mom = asianlag::negative_moments(10, nu_user, h, tab, ctx);
        BigReal worst = ctx.real(0);
        for (long n = 1; n + 2 <= 10; ++n) {
            BigReal lhs = mom.moment(n) * mom.moment(n + 2);
            BigReal rhs = mom.moment(n + 1) * mom.moment(n + 1);
            BigReal viol = (rhs - lhs) / rhs;  // should be <= 0
            worst = max(worst, viol);
        }
        add("moment_log_convexity", worst, ctx.real(0));
    }

    // 8. Monte Carlo agreement (3 standard errors)
    if (!o.skip_mc) {
        asianlag::mc::McConfig cfg;
        cfg.paths = o.paths;
        cfg.steps = 512;
        cfg.seed = o.seed;
        asianlag::mc::McRun run = asianlag::mc::mc_run(cfg, nu_user.to_double(), 0.0225, 0.0225);
        asianlag::ThetaIntegralTable tab = asianlag::compute_theta_table(2, nu_user, h, B, ctx);
        asianlag::MomentTable mom = asianlag::negative_moments(2, nu_user, h, tab, ctx);
        BigReal ex = asianlag::positive_first_moment(nu_user, h, ctx);
        auto sigmas = [&](double est, double se, const BigReal& truth) {
            return abs(BigReal::from_double(est, p) - truth) /
                   BigReal::from_double(se > 0 ? se : 1e-300, p);
        };
        BigReal worst = sigmas(run.m1.value, run.m1.std_error, mom.moment(1));
        worst = max(worst, sigmas(run.m2.value, run.m2.std_error, mom.moment(2)));
        worst = max(worst, sigmas(run.pos_moment.value, run.pos_moment.std_error, ex));
        add("mc_agreement_sigmas", worst, BigReal::from_double(o.mc_sigmas, p));
    }

    // 9. density identities (normalization and price), heavy
    if (!o.skip_density) {
        asianlag::DensityContext dc(nu_user, h, ctx);
        BigReal norm = asianlag::density_normalization(dc);
        add("density_normalization", abs(norm - 1), asianlag::pow10(-8, p));

        asianlag::ThetaIntegralTable tab = asianlag::compute_theta_table(74, nu_user, h, B, ctx);
        asianlag::MomentTable mom = asianlag::negative_moments(74, nu_user, h, tab, ctx);
        asianlag::NormalizedParams np{nu_user, h, ctx.real("0.0225"), ctx.real(1)};
        asianlag::PriceReport rep = asianlag::price_ladder(
            np, ctx.real(6), ctx.real(0), ctx.real(0), 72, mom, ctx, std::nullopt, true);
        BigReal dp = asianlag::density_price(ctx.real("0.0225"), dc);
        add("density_price_vs_series", abs(*rep.accelerated - dp), asianlag::pow10(-8, p));
    }

    bool all_pass = true;
    ojson doc;
    doc["config"] = {{"command", "check"}, {"digits", o.digits}, {"nu", o.nu_s},
                     {"seed", o.seed}, {"paths", o.paths},
                     {"skip_density", o.skip_density}, {"skip_mc", o.skip_mc}};
    doc["results"] = ojson::array();
    doc["residuals"] = ojson::object();
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        doc["results"].push_back({{"check", r.name},
                                  {"pass", r.pass},
                                  {"residual", r.residual},
                                  {"tolerance", r.tolerance}});
        doc["residuals"][r.name] = r.residual;
    }
    doc["diagnostics"] = {{"all_pass", all_pass}};
    OutputSink sink{o.out_path};
    sink.write(doc.dump(2) + "\n");
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-precision pricing of fixed-strike arithmetic-average Asian options\n"
                 "via Laguerre series with theta-integral moment coefficients"};
    app.set_config("--config", "", "flat key=value configuration file");
    app.require_subcommand(1);

    PriceCliOpts po;
    auto* price = app.add_subcommand("price", "price an option (series or closed form)");
    price->add_option("--spot", po.spot);
    price->add_option("--strike", po.strike);
    price->add_option("--rate", po.rate);
    price->add_option("--drift", po.drift);
    price->add_option("--sigma", po.sigma);
    price->add_option("--issue", po.issue);
    price->add_option("--now", po.now);
    price->add_option("--expiry", po.expiry);
    price->add_option("--running-integral", po.running_integral);
    price->add_option("--nu", po.nu_s);
    price->add_option("--h", po.h_s);
    price->add_option("--q", po.q_s);
    price->add_option("--series", po.series)->check(CLI::IsMember({"ladder", "direct"}));
    price->add_option("--c", po.c_s);
    price->add_option("--alpha", po.alpha_s);
    price->add_option("--beta", po.beta_s);
    price->add_option("--terms", po.terms);
    price->add_option("--reference", po.reference_s);
    price->add_flag("--accelerate", po.accelerate);
    price->add_option("--conv-tol", po.conv_tol);
    price->add_option("--digits", po.digits);
    price->add_option("--B", po.B_s);
    price->add_option("--format", po.format)->check(CLI::IsMember({"text", "csv", "json"}));
    price->add_option("--out", po.out_path);

    SimpleOpts mo;
    auto* moments = app.add_subcommand("moments", "negative-moment table m_1..m_N");
    moments->add_option("--nu", mo.nu_s);
    moments->add_option("--h", mo.h_s);
    moments->add_option("--B", mo.B_s);
    moments->add_option("--terms", mo.terms);
    moments->add_option("--digits", mo.digits);
    moments->add_option("--format", mo.format)->check(CLI::IsMember({"text", "csv", "json"}));
    moments->add_option("--out", mo.out_path);

    SimpleOpts to;
    auto* theta = app.add_subcommand("theta", "theta-integral table with diagnostics");
    theta->add_option("--nu", to.nu_s);
    theta->add_option("--h", to.h_s);
    theta->add_option("--B", to.B_s);
    theta->add_option("--terms", to.terms);
    theta->add_option("--digits", to.digits);
    theta->add_option("--format", to.format)->check(CLI::IsMember({"text", "csv", "json"}));
    theta->add_option("--out", to.out_path);

    TablesOpts tao;
    auto* tables = app.add_subcommand("tables", "reproduce the worked-example tables 1-4");
    tables->add_option("--which", tao.which)->check(CLI::Range(1, 4));
    tables->add_option("--digits", tao.digits);
    tables->add_option("--format", tao.format)->check(CLI::IsMember({"csv", "json"}));
    tables->add_option("--out", tao.out_path);

    CheckOpts co;
    auto* check = app.add_subcommand("check", "run the validation suite (JSON report)");
    check->add_option("--digits", co.digits);
    check->add_option("--nu", co.nu_s);
    check->add_option("--seed", co.seed);
    check->add_option("--paths", co.paths);
    check->add_option("--mc-sigmas", co.mc_sigmas);
    check->add_flag("--skip-density", co.skip_density);
    check->add_flag("--skip-mc", co.skip_mc);
    check->add_option("--out", co.out_path);

    CLI11_PARSE(app, argc, argv);

    // mark the market block as given when any of its flags appeared
    po.market_given = price->count("--spot") || price->count("--strike") ||
                      price->count("--sigma") || price->count("--expiry");

    try {
        if (price->parsed()) return cmd_price(po);
        if (moments->parsed()) return cmd_moments(mo);
        if (theta->parsed()) return cmd_theta(to);
        if (tables->parsed()) return cmd_tables(tao);
        if (check->parsed()) return cmd_check(co);
    } catch (const asianlag::QuadratureError& e) {
        std::fprintf(stderr, "non-convergence: %s\n", e.what());
        return 3;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 2;
    } catch (const std::logic_error& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
