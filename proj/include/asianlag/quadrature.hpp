#ifndef ASIANLAG_QUADRATURE_HPP
#define ASIANLAG_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "asianlag/big_real.hpp"

namespace asianlag {

/// Thrown when an adaptive scheme cannot reach the requested tolerance.
/// Quadratures never return silently degraded results.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace quad {

inline BigReal const_pi(mpfr_prec_t p) {
    BigReal r(p);
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    return r;
}

/// Tanh-sinh (double-exponential) rule on a finite interval [a, b].
///
/// Levels double until two refinements agree within `tol` (relative to the
/// result, with `tol` itself as the absolute floor).  Node positions are
/// formed from the endpoint offset 2 e^{-2u} / (1 + e^{-2u}) = 1 - tanh(u),
/// so integrable endpoint singularities are sampled without cancellation and
/// the endpoints themselves are never evaluated.
inline BigReal tanh_sinh(const std::function<BigReal(const BigReal&)>& f,
                         const BigReal& a, const BigReal& b,
                         const BigReal& tol, int max_level = 11) {
    mpfr_prec_t p = std::max(std::max(a.prec(), b.prec()), tol.prec());
    BigReal half_pi = const_pi(p) / 2;
    BigReal center = (a + b) / 2;
    BigReal halfw = (b - a) / 2;
    double digits10 = static_cast<double>(p) / 3.3219280948873623;
    double tmax = std::log(1.47 * (digits10 + 24.0));

    // sum of w_k f(x_k) over new nodes at spacing h (odd multiples for level>0)
    auto node_sum = [&](int level, const BigReal& h) -> BigReal {
        BigReal sum = BigReal::from_long(0, p);
        long k = (level == 0) ? 0 : 1;
        long stride = (level == 0) ? 1 : 2;
        while (true) {
            BigReal t = h * k;
            if (t.to_double() > tmax) break;
            BigReal u = half_pi * sinh(t);
            BigReal eu = exp(-2 * u);
            BigReal denom = 1 + eu;
            BigReal offset = 2 * eu / denom;                            // 1 - tanh(u)
            BigReal w = half_pi * cosh(t) * 4 * eu / (denom * denom);   // sech^2 factor
            if (k == 0) {
                sum += f(center) * w;
            } else {
                sum += (f(a + halfw * offset) + f(b - halfw * offset)) * w;
            }
            k += stride;
        }
        return sum;
    };

    BigReal h = BigReal::from_long(1, p);
    BigReal total = node_sum(0, h);
    BigReal est = total * h * halfw;
    for (int level = 1; level <= max_level; ++level) {
        h = h / 2;
        total += node_sum(level, h);
        BigReal next = total * h * halfw;
        BigReal err = abs(next - est);
        est = next;
        if (level >= 3 && err <= max(tol * abs(est), tol))
            return est;
    }
    throw QuadratureError("tanh_sinh: no convergence to requested tolerance");
}

/// Gauss-Legendre nodes/weights on [-1, 1], Newton-refined at working
/// precision, cached per (order, precision).
struct GaussLegendre {
    std::vector<BigReal> nodes;    // non-negative half, descending
    std::vector<BigReal> weights;

    static const GaussLegendre& get(int order, mpfr_prec_t prec) {
        static std::map<std::pair<int, long>, GaussLegendre> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lk(mu);
        auto key = std::make_pair(order, static_cast<long>(prec));
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        GaussLegendre gl;
        gl.build(order, prec);
        return cache.emplace(key, std::move(gl)).first->second;
    }

    void build(int n, mpfr_prec_t prec) {
        auto eval = [&](const BigReal& x, BigReal& pn, BigReal& dpn) {
            BigReal p0 = BigReal::from_long(1, prec);
            BigReal p1 = x;
            for (long j = 1; j < n; ++j) {
                BigReal p2 = ((2 * j + 1) * x * p1 - j * p0) / (j + 1);
                p0 = std::move(p1);
                p1 = std::move(p2);
            }
            pn = p1;
            dpn = n * (x * p1 - p0) / (x * x - 1);
        };
        BigReal newton_tol = pow10(-static_cast<long>(prec / 3.6), prec);
        int half = (n + 1) / 2;
        for (int i = 0; i < half; ++i) {
            BigReal x = BigReal::from_double(
                std::cos(3.141592653589793 * (i + 0.75) / (n + 0.5)), prec);
            BigReal pn(prec), dpn(prec);
            for (int it = 0; it < 300; ++it) {
                eval(x, pn, dpn);
                BigReal dx = pn / dpn;
                x -= dx;
                if (abs(dx) < newton_tol) break;
            }
            eval(x, pn, dpn);
            nodes.push_back(x);
            weights.push_back(2 / ((1 - x * x) * dpn * dpn));
        }
    }
};

/// Fixed-order Gauss-Legendre on [a, b]; caller controls accuracy through
/// panel size and order.
inline BigReal gauss_legendre(const std::function<BigReal(const BigReal&)>& f,
                              const BigReal& a, const BigReal& b, int order) {
    mpfr_prec_t p = std::max(a.prec(), b.prec());
    const GaussLegendre& gl = GaussLegendre::get(order, p);
    BigReal center = (a + b) / 2;
    BigReal halfw = (b - a) / 2;
    BigReal sum = BigReal::from_long(0, p);
    bool has_center = (order % 2) != 0;
    for (size_t i = 0; i < gl.nodes.size(); ++i) {
        const BigReal& x = gl.nodes[i];
        const BigReal& w = gl.weights[i];
        if (has_center && i + 1 == gl.nodes.size()) {
            sum += w * f(center);
        } else {
            sum += w * (f(center + halfw * x) + f(center - halfw * x));
        }
    }
    return sum * halfw;
}

/// Integral over [a, inf) of an algebraically decaying integrand via the
/// substitution w = a + s0 (1 - s)/s, s in (0, 1].
inline BigReal algebraic_tail(const std::function<BigReal(const BigReal&)>& f,
                              const BigReal& a, const BigReal& s0,
                              const BigReal& tol, int max_level = 11) {
    mpfr_prec_t p = std::max(a.prec(), tol.prec());
    auto g = [&](const BigReal& s) -> BigReal {
        BigReal w = a + s0 * (1 - s) / s;
        return f(w) * s0 / (s * s);
    };
    return tanh_sinh(g, BigReal::from_long(0, p), BigReal::from_long(1, p), tol, max_level);
}

}  // namespace quad
}  // namespace asianlag

#endif
