#ifndef MCERT_CBALL_HPP
#define MCERT_CBALL_HPP

// Complex balls: componentwise rectangular enclosures built on Ball.

#include "ball.hpp"

namespace mcert {

class CBall {
  public:
    Ball re, im;

    CBall() = default;
    explicit CBall(const Ball& r) : re(r) {}
    CBall(Ball r, Ball i) : re(std::move(r)), im(std::move(i)) {}
    explicit CBall(long v) : re(v) {}

    static CBall from_strings(const std::string& r, const std::string& i, double rad = 0.0) {
        return CBall(Ball::from_string(r, rad), Ball::from_string(i, rad));
    }

    static CBall i_unit() { return CBall(Ball(0), Ball(1)); }

    // e^{i t}
    static CBall exp_i(const Ball& t) { return CBall(cos(t), sin(t)); }

    // exact root of unity e(num/den) = e^{2 pi i num/den}
    static CBall root_of_unity(long num, long den) {
        Ball t = Ball(2) * Ball::pi() * Ball(num) / Ball(den);
        return exp_i(t);
    }

    friend CBall operator+(const CBall& x, const CBall& y) { return {x.re + y.re, x.im + y.im}; }
    friend CBall operator-(const CBall& x, const CBall& y) { return {x.re - y.re, x.im - y.im}; }
    friend CBall operator-(const CBall& x) { return {-x.re, -x.im}; }
    friend CBall operator*(const CBall& x, const CBall& y) {
        return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
    }
    friend CBall operator*(const Ball& a, const CBall& y) { return {a * y.re, a * y.im}; }
    friend CBall operator*(const CBall& y, const Ball& a) { return a * y; }
    friend CBall operator/(const CBall& x, const Ball& a) { return {x.re / a, x.im / a}; }
    friend CBall operator/(const CBall& x, const CBall& y) {
        Ball n = sqr(y.re) + sqr(y.im);
        return {(x.re * y.re + x.im * y.im) / n, (x.im * y.re - x.re * y.im) / n};
    }

    CBall& operator+=(const CBall& y) { re += y.re; im += y.im; return *this; }
    CBall& operator-=(const CBall& y) { re -= y.re; im -= y.im; return *this; }
    CBall& operator*=(const CBall& y) { *this = *this * y; return *this; }

    friend CBall conj(const CBall& x) { return {x.re, -x.im}; }

    friend Ball abs_sq(const CBall& x) { return sqr(x.re) + sqr(x.im); }
    friend Ball abs(const CBall& x) { return sqrt(abs_sq(x)); }

    // Upper bound on |x| as a double (cheap, for magnitude pipelines).
    double abs_upper_double() const {
        double a = re.abs_upper_double(), b = im.abs_upper_double();
        return detail::up(std::hypot(a, b));
    }

    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }

    std::string str(int digits = 20) const {
        return "(" + re.str(digits) + ", " + im.str(digits) + ")";
    }
};

}  // namespace mcert

#endif
