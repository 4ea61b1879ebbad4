#ifndef MCERT_WHITTAKER_HPP
#define MCERT_WHITTAKER_HPP

// Certified evaluation of W_{ir}(y) = sqrt(y) K_{ir}(y), its y-derivatives,
// the Cauchy-estimate sup bounds used for Taylor remainders, and the
// D-integral entering the final eigenvalue bound.
//
// K_{ir}(y) = int_0^oo e^{-y cosh t} cos(rt) dt is computed by the truncated
// trapezoid rule. The integrand extends to an even entire function of t, so
// the full trapezoid sum with step h has discretization error at most
// 2 M_a / (e^{2 pi a / h} - 1), where M_a bounds int |f(t +- ia)| dt on the
// strip of half-width a (we use a = 1). Truncating the sum at T >= acosh(j/y)
// costs at most the monotone tail of the integrand. Both error terms are
// evaluated rigorously in ball arithmetic and added to the result radius.

#include "arith.hpp"
#include "ball.hpp"
#include "cball.hpp"

#include <map>
#include <mutex>
#include <vector>

namespace mcert {

namespace wk {

// Upper bounds Phi_j(s) >= int_0^oo cosh^j t e^{-s cosh t} dt  (j = 0, 1),
// valid for s > 0, from cosh t >= 1 + t^2/2:
//   Phi_0(s) = e^-s sqrt(pi/(2s)),  Phi_1(s) = e^-s (1/2) sqrt(2 pi/s) e^{1/(2s)}.
inline Ball phi_bound(int j, const Ball& s) {
    Ball pi = Ball::pi();
    if (j == 0) return exp(-s) * sqrt(pi / (Ball(2) * s));
    return exp(-s) * sqrt(Ball(2) * pi / s) * exp(Ball(1) / (Ball(2) * s)) / Ball(2);
}

// I_j(y, r) = int_0^oo cosh^j t e^{-y cosh t} cos(rt) dt for j in {0, 1}.
// j = 0 gives K_{ir}(y); j = 1 gives -d/dy K_{ir}(y).
inline Ball bessel_integral(int j, const Ball& y, const Ball& r) {
    if (!y.is_positive()) throw domain_error("bessel_integral: y must be strictly positive");
    long prec = precision();
    double ylo = y.lower_double();
    double rhi = r.abs_upper_double();
    if (ylo <= 0) throw domain_error("bessel_integral: y ball touches 0");

    // Step and truncation heuristics; the error terms below are computed
    // rigorously for whatever h, T come out of these.
    double target = 0.7 * (static_cast<double>(prec) + 20);
    double hh = 2 * M_PI / (rhi + ylo * (1 - std::cos(1.0)) + target + 10.0);
    double coshT = (ylo + target + 20.0) / ylo + static_cast<double>(j);
    double TT = std::acosh(coshT);
    long K = static_cast<long>(std::ceil(TT / hh)) + 1;

    Ball h = Ball::from_double(hh);
    Ball sum = exp(-y) / Ball(2);  // t = 0 term: cosh^j(0) e^{-y} / 2
    for (long k = 1; k <= K; ++k) {
        Ball t = h * Ball(k);
        Ball ch = cosh(t);
        Ball term = exp(-(y * ch)) * cos(r * t);
        if (j == 1) term = term * ch;
        sum += term;
    }
    Ball approx = h * sum;

    Ball yl = Ball::from_double(ylo);
    Ball a(1);
    // Discretization: (1/2) * 2 M_a / (e^{2 pi a/h} - 1), M_a <= e^{r a} 2 Phi_j(y cos a).
    Ball Ma = exp(Ball::from_double(rhi) * a) * Ball(2) * phi_bound(j, yl * cos(a));
    Ball disc = Ma / (exp(Ball(2) * Ball::pi() * a / h) - Ball(1));
    // Truncation: tail of the trapezoid sum beyond T = K h, bounded by the
    // integral of the (decreasing there) integrand.
    Ball T = h * Ball(K);
    Ball chT = cosh(T), shT = sinh(T);
    if (!(yl * chT).certainly_greater(Ball(j)))
        throw domain_error("bessel_integral: truncation point too small");
    Ball tail;
    if (j == 0)
        tail = exp(-(yl * chT)) / (yl * shT);
    else
        tail = (chT / shT) * exp(-(yl * chT)) / yl;

    approx.add_error(disc.upper_double());
    approx.add_error(tail.upper_double());
    return approx;
}

}  // namespace wk

class WhittakerEvaluator {
  public:
    WhittakerEvaluator(Ball lambda, Ball r) : lambda_(std::move(lambda)), r_(std::move(r)) {}

    static WhittakerEvaluator from_lambda(const Ball& lambda) {
        Ball quarter = Ball(1) / Ball(4);
        return WhittakerEvaluator(lambda, sqrt(lambda - quarter));
    }

    const Ball& lambda() const { return lambda_; }
    const Ball& r() const { return r_; }

    // (W_{ir}(y), W_{ir}'(y)).
    std::pair<Ball, Ball> whittaker(const Ball& y) const {
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = cache_.find(key(y));
            if (it != cache_.end()) return it->second;
        }
        Ball K = wk::bessel_integral(0, y, r_);
        Ball Kp = -wk::bessel_integral(1, y, r_);
        Ball sy = sqrt(y);
        Ball W = sy * K;
        Ball Wp = K / (Ball(2) * sy) + sy * Kp;
        std::pair<Ball, Ball> out{W, Wp};
        {
            std::lock_guard<std::mutex> lk(mu_);
            cache_.emplace(key(y), out);
        }
        return out;
    }

    // [W, W', ..., W^(d)] via the ODE W'' = (1 - lambda y^-2) W.
    std::vector<Ball> derivatives(const Ball& y, int d) const {
        auto [W, Wp] = whittaker(y);
        std::vector<Ball> out;
        out.reserve(static_cast<size_t>(d) + 1);
        out.push_back(W);
        if (d >= 1) out.push_back(Wp);
        if (d < 2) return out;
        // inv_pows[i] = y^{-2-i}
        std::vector<Ball> inv_pows;
        Ball yi = Ball(1) / y;
        Ball cur = yi * yi;
        for (int i = 0; i <= d - 2; ++i) {
            inv_pows.push_back(cur);
            cur = cur * yi;
        }
        // W^{(m+2)} = W^{(m)} - lambda sum_{i<=m} C(m,i)(-1)^i (i+1)! y^{-2-i} W^{(m-i)}
        std::vector<std::vector<Ball>> C(static_cast<size_t>(d) + 1);
        for (int n = 0; n <= d; ++n) {
            C[n].assign(static_cast<size_t>(n) + 1, Ball(1));
            for (int k = 1; k < n; ++k) C[n][k] = C[n - 1][k - 1] + C[n - 1][k];
        }
        std::vector<Ball> factorial{Ball(1)};
        for (int i = 1; i <= d; ++i) factorial.push_back(factorial.back() * Ball(i));
        for (int m = 0; m + 2 <= d; ++m) {
            Ball s(0);
            for (int i = 0; i <= m; ++i) {
                Ball term = C[m][i] * factorial[static_cast<size_t>(i) + 1] * inv_pows[i] *
                            out[static_cast<size_t>(m - i)];
                if (i % 2 == 1) term = -term;
                s += term;
            }
            out.push_back(out[static_cast<size_t>(m)] - lambda_ * s);
        }
        return out;
    }

  private:
    static std::string key(const Ball& y) {
        return y.mid_string(45) + "#" + std::to_string(y.rad());
    }

    Ball lambda_, r_;
    mutable std::mutex mu_;
    mutable std::map<std::string, std::pair<Ball, Ball>> cache_;
};

// Coarse sup bound |W^(l)(y0)| <= sqrt(pi) l! (y0 e^-delta)^-l.
inline Ball whittaker_sup_bound(int l, const Ball& y0, const Ball& delta) {
    if (!y0.is_positive()) throw domain_error("whittaker_sup_bound: y0 must be positive");
    Ball ymin = y0 * exp(-delta);
    return sqrt(Ball::pi()) * factorial_ball(static_cast<unsigned long>(l)) /
           pow_ui(ymin, static_cast<unsigned long>(l));
}

// Decaying Cauchy bound. For real r and u > 0, K_{ir} extends analytically to
// Re zeta > 0 with |K_{ir}(zeta)| <= e^{-s} sqrt(pi/(2s)), s = Re zeta, from
// |cos(rt)| <= 1 and cosh t - 1 >= t^2/2. Integrating W = sqrt(zeta) K_{ir}
// over the circle |zeta - u| = theta u (0 < theta < 1) gives
//   |W^(l)(u)| <= l! (theta u)^-l sqrt(pi (1+theta) / (2 (1-theta)))
//                 e^{-u (1-theta)}.
// The bound is decreasing in u, so it also covers [u, oo).
inline Ball whittaker_sup_bound_cauchy(int l, const Ball& u, const Ball& theta) {
    if (!u.is_positive()) throw domain_error("whittaker_sup_bound_cauchy: u must be positive");
    if (!theta.is_positive() || !(Ball(1) - theta).is_positive())
        throw domain_error("whittaker_sup_bound_cauchy: theta must be in (0,1)");
    Ball pref = sqrt(Ball::pi() * (Ball(1) + theta) / (Ball(2) * (Ball(1) - theta)));
    return factorial_ball(static_cast<unsigned long>(l)) /
           pow_ui(theta * u, static_cast<unsigned long>(l)) * pref * exp(-(u * (Ball(1) - theta)));
}

struct DParameters {
    i64 N = 1;
    int omega = 0;     // number of distinct primes of N
    i64 m = 2;
    int psi_count = 1;
    Ball delta;
};

namespace wk {

// Enclosure of int_a^b W_{ir}(2 pi y)^2 / y^2 dy by an interval Riemann sum.
inline Ball integral_segment(const WhittakerEvaluator& ev, const Ball& a, const Ball& b,
                             int pieces) {
    Ball width = (b - a) / Ball(pieces);
    Ball total(0);
    Ball twopi = Ball(2) * Ball::pi();
    for (int k = 0; k < pieces; ++k) {
        Ball lo = a + width * Ball(k);
        Ball hi = lo + width;
        Ball y = Ball::interval(lo, hi);
        Ball W = ev.whittaker(twopi * y).first;
        total += width * (sqr(W) / sqr(y));
    }
    return total;
}

}  // namespace wk

// The three-part weighted integral of W_{ir}(2 pi y)^2 / y^2 with limits
// A = m^{#Psi} e^delta and its /sqrt3, *sqrt3 variants; certified positive.
inline Ball compute_D(const WhittakerEvaluator& ev, const DParameters& p, int pieces = 768) {
    if (!p.delta.is_positive()) throw domain_error("compute_D: delta must be positive");
    Ball A = pow_ui(Ball(p.m), static_cast<unsigned long>(p.psi_count)) * exp(p.delta);
    Ball s3 = sqrt(Ball(3));
    Ball two_omega = pow_ui(Ball(2), static_cast<unsigned long>(p.omega));

    // Main term: cut the infinite integral at Y0 = max(A, 5); tail bounded via
    // W(2 pi y)^2 <= (pi/2) e^{-4 pi y}.
    Ball Y0 = max_ball(A, Ball(5));
    Ball main = wk::integral_segment(ev, A, Y0, pieces);
    Ball fourpi = Ball(4) * Ball::pi();
    Ball tail = (Ball::pi() / Ball(2)) * exp(-(fourpi * Y0)) / (fourpi * sqr(Y0));
    main.add_error(tail.upper_double());

    Ball second = wk::integral_segment(ev, A / s3, A, pieces);
    Ball third = wk::integral_segment(ev, A, A * s3, pieces);

    Ball D = two_omega * main + second - third;
    if (!D.is_positive())
        throw domain_error("D not certified positive; increase precision or adjust delta");
    return D;
}

}  // namespace mcert

#endif
