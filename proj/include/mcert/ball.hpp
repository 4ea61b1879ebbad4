#ifndef MCERT_BALL_HPP
#define MCERT_BALL_HPP

// Self-validated real arithmetic: midpoint-radius balls on top of MPFR.
// Every operation returns a ball containing the exact image of its operand
// balls. Midpoints are computed round-to-nearest at the working precision;
// the half-ulp rounding error and the propagated operand radii are absorbed
// into the radius with outward (upward) double rounding.

#include <mpfr.h>

#include <atomic>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace mcert {

inline std::atomic<long>& precision_bits_ref() {
    static std::atomic<long> bits{128};
    return bits;
}

inline void set_precision(long bits) {
    if (bits < 16) throw std::invalid_argument("precision too small");
    precision_bits_ref().store(bits);
}

inline long precision() { return precision_bits_ref().load(); }

struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Outward-rounded double helpers for radii. fl(x) is within half an ulp of
// the exact value, so one nextafter step upward dominates it.
inline double up(double x) {
    if (std::isnan(x)) return std::numeric_limits<double>::infinity();
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}
inline double radd(double a, double b) { return up(a + b); }
inline double rmul(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return up(a * b);
}

}  // namespace detail

class Ball {
  public:
    Ball() : rad_(0.0) { mpfr_init2(mid_, precision()); mpfr_set_zero(mid_, 1); }

    explicit Ball(long v) : rad_(0.0) {
        mpfr_init2(mid_, precision());
        int t = mpfr_set_si(mid_, v, MPFR_RNDN);
        if (t != 0) rad_ = ulp();
    }

    Ball(const Ball& o) : rad_(o.rad_) {
        mpfr_init2(mid_, mpfr_get_prec(o.mid_));
        mpfr_set(mid_, o.mid_, MPFR_RNDN);
    }

    Ball(Ball&& o) noexcept : rad_(o.rad_) {
        mid_[0] = o.mid_[0];
        mpfr_init2(o.mid_, MPFR_PREC_MIN);
        mpfr_set_zero(o.mid_, 1);
        o.rad_ = 0.0;
    }

    Ball& operator=(const Ball& o) {
        if (this != &o) {
            mpfr_set_prec(mid_, mpfr_get_prec(o.mid_));
            mpfr_set(mid_, o.mid_, MPFR_RNDN);
            rad_ = o.rad_;
        }
        return *this;
    }

    Ball& operator=(Ball&& o) noexcept {
        if (this != &o) {
            mpfr_swap(mid_, o.mid_);
            std::swap(rad_, o.rad_);
        }
        return *this;
    }

    ~Ball() { mpfr_clear(mid_); }

    // Decimal midpoint plus optional declared absolute radius.
    static Ball from_string(const std::string& dec, double declared_rad = 0.0) {
        Ball b;
        char* end = nullptr;
        mpfr_strtofr(b.mid_, dec.c_str(), &end, 10, MPFR_RNDN);
        if (dec.empty() || end == dec.c_str() || *end != '\0')
            throw std::invalid_argument("unparseable decimal: " + dec);
        b.rad_ = detail::radd(b.ulp(), declared_rad);
        if (declared_rad == 0.0) b.rad_ = b.exactly_parsed(dec) ? 0.0 : b.ulp();
        return b;
    }

    static Ball from_double(double v) {
        Ball b;
        mpfr_set_d(b.mid_, v, MPFR_RNDN);  // exact, double fits
        return b;
    }

    static Ball whole_line() {
        Ball b;
        b.rad_ = std::numeric_limits<double>::infinity();
        return b;
    }

    static Ball pi() {
        Ball b;
        mpfr_const_pi(b.mid_, MPFR_RNDN);
        b.rad_ = b.ulp();
        return b;
    }

    static Ball interval(const Ball& lo, const Ball& hi) {
        // Hull of [lo.lower(), hi.upper()].
        Ball mid = (lo + hi) / Ball(2);
        Ball half = (hi - lo) / Ball(2);
        Ball b = mid;
        b.rad_ = detail::radd(b.rad_, half.abs_upper_double());
        return b;
    }

    const mpfr_t& mid() const { return mid_; }
    double rad() const { return rad_; }
    bool is_finite() const { return std::isfinite(rad_) && mpfr_number_p(mid_); }
    bool is_exact() const { return rad_ == 0.0; }

    // One ulp of the midpoint as an upward-rounded double; dominates the
    // half-ulp round-to-nearest error of any mpfr operation producing mid_.
    double ulp() const {
        if (mpfr_zero_p(mid_)) return 0.0;
        long e = static_cast<long>(mpfr_get_exp(mid_)) - static_cast<long>(mpfr_get_prec(mid_)) + 1;
        if (e < -1070) return DBL_TRUE_MIN;
        if (e > 1020) return std::numeric_limits<double>::infinity();
        return std::ldexp(1.0, static_cast<int>(e));
    }

    // Upper bound on |mid| as a double.
    double abs_mid_upper() const {
        double d = mpfr_get_d(mid_, MPFR_RNDA);
        return detail::up(std::fabs(d));
    }

    // Upper bound on |x| over the ball.
    double abs_upper_double() const { return detail::radd(abs_mid_upper(), rad_); }

    bool contains_zero() const {
        if (!is_finite()) return true;
        Ball a = *this;
        return mpfr_cmpabs_ui(a.mid_, 0) == 0 || abs_mid_lower() <= rad_;
    }

    // Lower bound on |mid| as a double (rounded toward zero, then one step down).
    double abs_mid_lower() const {
        double d = std::fabs(mpfr_get_d(mid_, MPFR_RNDZ));
        return std::nextafter(d, 0.0);
    }

    bool is_positive() const {
        return is_finite() && mpfr_sgn(mid_) > 0 && abs_mid_lower() > rad_;
    }
    bool is_negative() const {
        return is_finite() && mpfr_sgn(mid_) < 0 && abs_mid_lower() > rad_;
    }
    bool is_nonnegative_lower() const { return is_positive() || (is_exact() && mpfr_zero_p(mid_)); }

    // Certified endpoints as balls (exact at current precision up to one ulp).
    Ball upper() const {
        Ball b;
        mpfr_t r;
        mpfr_init2(r, 64);
        mpfr_set_d(r, rad_, MPFR_RNDU);
        mpfr_add(b.mid_, mid_, r, MPFR_RNDU);
        mpfr_clear(r);
        return b;
    }
    Ball lower() const {
        Ball b;
        mpfr_t r;
        mpfr_init2(r, 64);
        mpfr_set_d(r, rad_, MPFR_RNDU);
        mpfr_sub(b.mid_, mid_, r, MPFR_RNDD);
        mpfr_clear(r);
        return b;
    }
    double upper_double() const {
        Ball u = upper();
        return detail::up(mpfr_get_d(u.mid_, MPFR_RNDU));
    }
    double lower_double() const {
        Ball l = lower();
        return std::nextafter(mpfr_get_d(l.mid_, MPFR_RNDD),
                              -std::numeric_limits<double>::infinity());
    }

    bool contains(const Ball& other) const {
        // [o.lo, o.hi] subset of [lo, hi], compared at mpfr level.
        Ball lo = lower(), hi = upper(), olo = other.lower(), ohi = other.upper();
        return mpfr_cmp(lo.mid_, olo.mid_) <= 0 && mpfr_cmp(ohi.mid_, hi.mid_) <= 0;
    }

    // Strict certified comparisons (false when undecidable).
    bool certainly_less(const Ball& o) const {
        Ball d = o - *this;
        return d.is_positive();
    }
    bool certainly_greater(const Ball& o) const { return o.certainly_less(*this); }

    std::string str(int digits = 20) const {
        char buf[512];
        mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, mid_);
        std::string s(buf);
        char rb[48];
        std::snprintf(rb, sizeof rb, "%.3g", rad_);
        return s + " +/- " + rb;
    }
    std::string mid_string(int digits = 40) const {
        char buf[640];
        mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, mid_);
        return std::string(buf);
    }
    std::string upper_string(int digits = 25) const {
        Ball u = upper();
        char buf[640];
        mpfr_snprintf(buf, sizeof buf, "%.*R*g", digits, MPFR_RNDU, u.mid_);
        return std::string(buf);
    }
    std::string lower_string(int digits = 25) const {
        Ball l = lower();
        char buf[640];
        mpfr_snprintf(buf, sizeof buf, "%.*R*g", digits, MPFR_RNDD, l.mid_);
        return std::string(buf);
    }

    friend Ball operator+(const Ball& x, const Ball& y) {
        Ball b = make();
        int t = mpfr_add(b.mid_, x.mid_, y.mid_, MPFR_RNDN);
        b.rad_ = detail::radd(detail::radd(x.rad_, y.rad_), t ? b.ulp() : 0.0);
        return b;
    }
    friend Ball operator-(const Ball& x, const Ball& y) {
        Ball b = make();
        int t = mpfr_sub(b.mid_, x.mid_, y.mid_, MPFR_RNDN);
        b.rad_ = detail::radd(detail::radd(x.rad_, y.rad_), t ? b.ulp() : 0.0);
        return b;
    }
    friend Ball operator-(const Ball& x) {
        Ball b = x;
        mpfr_neg(b.mid_, b.mid_, MPFR_RNDN);
        return b;
    }
    friend Ball operator*(const Ball& x, const Ball& y) {
        Ball b = make();
        int t = mpfr_mul(b.mid_, x.mid_, y.mid_, MPFR_RNDN);
        double ax = x.abs_mid_upper(), ay = y.abs_mid_upper();
        double r = detail::radd(detail::radd(detail::rmul(ax, y.rad_), detail::rmul(ay, x.rad_)),
                                detail::rmul(x.rad_, y.rad_));
        b.rad_ = detail::radd(r, t ? b.ulp() : 0.0);
        return b;
    }
    friend Ball operator/(const Ball& x, const Ball& y) {
        if (y.contains_zero()) throw domain_error("ball division by ball containing 0");
        Ball b = make();
        int t = mpfr_div(b.mid_, x.mid_, y.mid_, MPFR_RNDN);
        // |x/y - mx/my| <= (rx + |mx/my| ry) / (|my| - ry)
        double q = b.abs_mid_upper();
        double denom = y.abs_mid_lower() - y.rad_;
        double r = detail::up(detail::radd(x.rad_, detail::rmul(q, y.rad_)) / denom);
        b.rad_ = detail::radd(r, t ? b.ulp() : 0.0);
        return b;
    }

    Ball& operator+=(const Ball& y) { *this = *this + y; return *this; }
    Ball& operator-=(const Ball& y) { *this = *this - y; return *this; }
    Ball& operator*=(const Ball& y) { *this = *this * y; return *this; }
    Ball& operator/=(const Ball& y) { *this = *this / y; return *this; }

    // Inflate the radius by a rigorous extra term.
    Ball& add_error(double extra) {
        rad_ = detail::radd(rad_, extra);
        return *this;
    }

    friend Ball sqr(const Ball& x) {
        Ball b = x * x;
        return b;
    }

    friend Ball abs(const Ball& x) {
        Ball b = x;
        mpfr_abs(b.mid_, b.mid_, MPFR_RNDN);
        return b;
    }

    friend Ball sqrt(const Ball& x) {
        if (x.is_negative()) throw domain_error("ball sqrt of certainly negative ball");
        if (!(x.lower_double() >= 0.0)) {
            // Ball dips below 0 only through outward rounding; the true value
            // is >= 0, so enclose sqrt by [0, sqrt(upper)].
            double hi = x.upper_double();
            if (!(hi > 0.0)) return Ball(0);
            return interval(Ball(0), Ball::from_double(detail::up(std::sqrt(hi))));
        }
        return monotone(x, mpfr_sqrt);
    }
    friend Ball exp(const Ball& x) { return monotone(x, mpfr_exp); }
    friend Ball log(const Ball& x) {
        if (!x.is_positive()) throw domain_error("ball log of ball not strictly positive");
        return monotone(x, mpfr_log);
    }
    friend Ball sin(const Ball& x) { return lipschitz1(x, mpfr_sin); }
    friend Ball cos(const Ball& x) { return lipschitz1(x, mpfr_cos); }
    friend Ball sinh(const Ball& x) { return monotone(x, mpfr_sinh); }
    friend Ball cosh(const Ball& x) {
        // cosh is even; monotone endpoints fail across 0. |cosh'| <= cosh on the ball.
        Ball b = make();
        int t = mpfr_cosh(b.mid_, x.mid_, MPFR_RNDN);
        double slope = std::cosh(std::min(709.0, x.abs_upper_double()));
        b.rad_ = detail::radd(detail::rmul(slope, x.rad_), t ? b.ulp() : 0.0);
        return b;
    }

    friend Ball pow(const Ball& x, const Ball& y) {
        if (!x.is_positive()) throw domain_error("ball pow requires positive base");
        return exp(y * log(x));
    }

    friend Ball pow_ui(Ball x, unsigned long n) {
        Ball acc(1);
        while (n) {
            if (n & 1) acc *= x;
            n >>= 1;
            if (n) x = sqr(x);
        }
        return acc;
    }

    friend Ball max_ball(const Ball& a, const Ball& b) {
        // Enclosure of max(a, b).
        Ball lo = mpfr_cmp(a.lower().mid_, b.lower().mid_) >= 0 ? a.lower() : b.lower();
        Ball hi = mpfr_cmp(a.upper().mid_, b.upper().mid_) >= 0 ? a.upper() : b.upper();
        return interval(lo, hi);
    }

  private:
    static Ball make() { return Ball(); }

    bool exactly_parsed(const std::string& dec) {
        mpfr_t chk;
        mpfr_init2(chk, mpfr_get_prec(mid_) + 64);
        int t = mpfr_set_str(chk, dec.c_str(), 10, MPFR_RNDN);
        bool exact = (t == 0) && mpfr_cmp(chk, mid_) == 0;
        mpfr_clear(chk);
        return exact;
    }

    using mpfr_unary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

    static Ball monotone(const Ball& x, mpfr_unary f) {
        Ball b = make();
        int t = f(b.mid_, x.mid_, MPFR_RNDN);
        if (x.rad_ == 0.0) {
            b.rad_ = t ? b.ulp() : 0.0;
            return b;
        }
        mpfr_t lo, hi, e;
        mpfr_inits2(precision() + 8, lo, hi, e, (mpfr_ptr) nullptr);
        mpfr_set_d(e, x.rad_, MPFR_RNDU);
        mpfr_sub(lo, x.mid_, e, MPFR_RNDD);
        mpfr_add(hi, x.mid_, e, MPFR_RNDU);
        f(lo, lo, MPFR_RNDD);
        f(hi, hi, MPFR_RNDU);
        mpfr_sub(lo, b.mid_, lo, MPFR_RNDU);
        mpfr_sub(hi, hi, b.mid_, MPFR_RNDU);
        double r1 = detail::up(mpfr_get_d(lo, MPFR_RNDU));
        double r2 = detail::up(mpfr_get_d(hi, MPFR_RNDU));
        mpfr_clears(lo, hi, e, (mpfr_ptr) nullptr);
        b.rad_ = detail::radd(std::max(std::fabs(r1), std::fabs(r2)), t ? b.ulp() : 0.0);
        return b;
    }

    static Ball lipschitz1(const Ball& x, mpfr_unary f) {
        Ball b = make();
        int t = f(b.mid_, x.mid_, MPFR_RNDN);
        b.rad_ = detail::radd(x.rad_, t ? b.ulp() : 0.0);
        return b;
    }

    mpfr_t mid_;
    double rad_;
};

inline Ball operator*(long a, const Ball& b) { return Ball(a) * b; }
inline Ball operator*(const Ball& b, long a) { return Ball(a) * b; }
inline Ball operator+(const Ball& b, long a) { return b + Ball(a); }
inline Ball operator-(const Ball& b, long a) { return b - Ball(a); }
inline Ball operator/(const Ball& b, long a) { return b / Ball(a); }

inline Ball factorial_ball(unsigned long n) {
    Ball b(1);
    for (unsigned long k = 2; k <= n; ++k) b *= Ball(static_cast<long>(k));
    return b;
}

}  // namespace mcert

#endif
