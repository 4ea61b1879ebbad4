#ifndef MCERT_GEOMETRY_HPP
#define MCERT_GEOMETRY_HPP

// Combinatorial geometry for Gamma0(N): integer matrices, cusps with
// widths/normalizers/parameters, the right-coset representative set A,
// pullback to the fundamental domain, and hyperbolic metric utilities.

#include "arith.hpp"
#include "cball.hpp"
#include "characters.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mcert {

struct Mat {
    i64 a = 1, b = 0, c = 0, d = 1;

    i64 det() const { return a * d - b * c; }
    bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }

    Mat operator*(const Mat& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat inverse() const { return {d, -b, -c, a}; }
    Mat neg() const { return {-a, -b, -c, -d}; }
    bool operator==(const Mat& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }

    bool in_gamma0(i64 N) const { return mod_pos(c, N) == 0; }

    static Mat T(i64 n = 1) { return {1, n, 0, 1}; }
    static Mat S() { return {0, -1, 1, 0}; }

    // Moebius action on a complex ball point.
    CBall apply(const CBall& z) const {
        CBall num = CBall(Ball(a)) * z + CBall(Ball(b));
        CBall den = CBall(Ball(c)) * z + CBall(Ball(d));
        return num / den;
    }

    std::string str() const {
        return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) +
               "," + std::to_string(d) + "]]";
    }
};

// A cusp a/b in lowest terms (infinity is 1/0) with its width, an SL2(Z)
// completion U = [[a,x],[b,y]] of the normalizing map sigma = U diag(sqrt h,
// 1/sqrt h), and the cusp parameter mu defined by chi(sigma T sigma^-1) = e(mu).
struct Cusp {
    i64 num = 1, den = 0;
    i64 width = 1;
    i64 comp_x = 0, comp_y = 1;  // completion column: num*comp_y - den*comp_x = 1
    Rat mu{0, 1};

    bool is_infinity() const { return den == 0; }
    std::string str() const {
        return is_infinity() ? "oo" : std::to_string(num) + "/" + std::to_string(den);
    }
    bool same_fraction(i64 a, i64 b) const { return num == a && den == b; }
};

inline void normalize_cusp_fraction(i64& a, i64& b) {
    i64 g = std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
    if (g == 0) throw std::invalid_argument("cusp 0/0");
    a /= g;
    b /= g;
    if (b < 0 || (b == 0 && a < 0)) { a = -a; b = -b; }
}

inline Cusp cusp_data(i64 N, const DirichletCharacter& chi, i64 a, i64 b) {
    normalize_cusp_fraction(a, b);
    Cusp cu;
    cu.num = a;
    cu.den = b;
    cu.width = N / gcd_i(N, b * b);
    // Completion [[a,x],[b,y]] in SL2(Z): a*y - b*x = 1.
    i64 u, v;
    i64 g = ext_gcd(a, b, u, v);
    if (g != 1) throw std::logic_error("cusp fraction not reduced");
    cu.comp_y = u;
    cu.comp_x = -v;
    // sigma T sigma^-1 = [[1-abh, a^2 h],[-b^2 h, 1+abh]] must lie in Gamma0(N).
    i64 h = cu.width;
    if (mod_pos(b * b * h, N) != 0) throw std::logic_error("cusp width inconsistent");
    auto e = chi.exponent(1 + a * b * h);
    if (!e) throw std::logic_error("cusp parameter: stabilizer entry not coprime to N");
    cu.mu = *e;
    return cu;
}

// For M in SL2(Z) whose first column is +-(num;den) of the cusp, sigma^-1 M
// acts as z -> (z + tau)/h with integer tau; returns tau.
inline i64 triangularize(const Cusp& cu, Mat M) {
    if (M.a == -cu.num && M.c == -cu.den) M = M.neg();
    if (M.a != cu.num || M.c != cu.den)
        throw std::invalid_argument("triangularize: matrix does not map oo to the cusp");
    i64 tau = cu.comp_y * M.b - cu.comp_x * M.d;
    // det forces sigma^-1 M = [[1, tau],[0, h]] projectively; sanity-check the
    // other entry: -den*M.b + num*M.d must be 1.
    if (-cu.den * M.b + cu.num * M.d != 1) throw std::logic_error("triangularize: not unipotent");
    return tau;
}

struct CosetSystem {
    i64 N = 1;
    std::vector<Mat> reps;                // the set A, ordered by (c, a, d)
    std::vector<size_t> cusp_index;       // reps[i] -> index into cusps
    std::vector<Cusp> cusps;              // pairwise inequivalent
    std::vector<i64> hall_divisors_list;  // d | N with (d, N/d) = 1

    const Cusp& cusp_of(size_t rep_idx) const { return cusps[cusp_index[rep_idx]]; }

    std::optional<size_t> find_rep(const Mat& M) const {
        for (size_t i = 0; i < reps.size(); ++i)
            if (reps[i] == M) return i;
        return std::nullopt;
    }

    // Index of the rep whose coset contains g, i.e. reps[i] * g^-1 in Gamma0(N).
    std::optional<size_t> coset_of(const Mat& g) const {
        Mat gi = g.inverse();
        for (size_t i = 0; i < reps.size(); ++i)
            if ((reps[i] * gi).in_gamma0(N)) return i;
        return std::nullopt;
    }
};

namespace detail {

// Representative of the residue class r mod v that is coprime to c; when the
// class is the full group (v = 1) the convention is 0 for c = 1 and the
// smallest positive integer coprime to c otherwise.
inline i64 coset_a_representative(i64 r, i64 v, i64 c) {
    if (v == 1) {
        if (c == 1) return 0;
        for (i64 a = 1;; ++a)
            if (gcd_i(a, c) == 1) return a;
    }
    for (i64 a = mod_pos(r, v);; a += v)
        if (a > 0 && gcd_i(a, c) == 1) return a;
}

}  // namespace detail

inline CosetSystem coset_representatives(i64 N, const DirichletCharacter& chi) {
    if (N < 1) throw std::invalid_argument("coset_representatives: N >= 1 required");
    CosetSystem sys;
    sys.N = N;
    for (i64 c : divisors(N)) {
        if (c == N) continue;
        i64 v = gcd_i(N / c, c);
        std::vector<i64> a_list;
        if (v == 1) {
            a_list.push_back(detail::coset_a_representative(0, 1, c));
        } else {
            for (i64 r = 1; r < v; ++r)
                if (gcd_i(r, v) == 1) a_list.push_back(detail::coset_a_representative(r, v, c));
        }
        for (i64 a : a_list)
            for (i64 d = -1; d < N / v - 1; ++d) {
                if (a != 0 && mod_pos(a * d - 1, c) != 0) continue;
                if (a == 0 && c != 1) continue;
                Mat M{a, (a * d - 1) / c, c, d};
                if (M.det() != 1) throw std::logic_error("coset algorithm produced det != 1");
                sys.reps.push_back(M);
            }
    }
    sys.reps.push_back(Mat{1, 0, 0, 1});

    // Associate each representative with the cusp M(oo) = a/c.
    for (const Mat& M : sys.reps) {
        i64 a = M.a, c = M.c;
        normalize_cusp_fraction(a, c);
        size_t idx = sys.cusps.size();
        for (size_t i = 0; i < sys.cusps.size(); ++i)
            if (sys.cusps[i].same_fraction(a, c)) { idx = i; break; }
        if (idx == sys.cusps.size()) sys.cusps.push_back(cusp_data(N, chi, a, c));
        sys.cusp_index.push_back(idx);
    }
    sys.hall_divisors_list = hall_divisors(N);
    return sys;
}

// Gamma0(N)-equivalence of two cusps, decided exactly: a1/b1 ~ a2/b2 iff
// some gamma = U2 T^k U1^-1 (U_i SL2 completions) lies in Gamma0(N).
inline bool cusps_equivalent(i64 N, i64 a1, i64 b1, i64 a2, i64 b2) {
    normalize_cusp_fraction(a1, b1);
    normalize_cusp_fraction(a2, b2);
    i64 u1, v1, u2, v2;
    ext_gcd(a1, b1, u1, v1);  // a1*u1 + b1*v1 = 1
    ext_gcd(a2, b2, u2, v2);
    i64 y1 = u1, x1 = -v1;  // U1 = [[a1,x1],[b1,y1]]
    i64 y2 = u2, x2 = -v2;
    // lower-left of U2 T^k U1^-1 is b2*y1 - b1*y2 - b1*b2*k
    for (i64 k = 0; k < std::max<i64>(N, 1); ++k)
        if (mod_pos(b2 * y1 - b1 * y2 - b1 * b2 * k, N) == 0) return true;
    return false;
}

// Hyperbolic distance log((|z-wbar|+|z-w|)/(|z-wbar|-|z-w|)).
inline Ball hyperbolic_distance(const CBall& z, const CBall& w) {
    Ball p = abs(z - conj(w));
    Ball q = abs(z - w);
    if (q.contains_zero()) {
        // enclosure [0, log((p+q)/(p-q)) upper]; for coincident points return
        // a ball containing 0 with the natural radius
        Ball hi = log((p + q) / (p - q + Ball::from_double(1e-300)));
        return Ball::interval(Ball(0), hi);
    }
    return log((p + q) / (p - q));
}

// Certified lower bound (as a ball) on min over M in A of Im(M e(1/6)) and
// Im(M e(1/3)).
inline Ball corner_delta_limit(const CosetSystem& sys) {
    Ball half = Ball(1) / Ball(2);
    Ball s3 = sqrt(Ball(3)) / Ball(2);
    CBall corners[2] = {CBall(half, s3), CBall(-half, s3)};
    bool first = true;
    double lo = 0, hi = 0;
    for (const Mat& M : sys.reps)
        for (const CBall& z : corners) {
            Ball im = M.apply(z).im;
            double l = im.lower_double(), h = im.upper_double();
            if (first || l < lo) lo = l;
            if (first || h < hi) hi = h;
            first = false;
        }
    return Ball::interval(Ball::from_double(lo), Ball::from_double(hi));
}

// Companion data: for M1 in A - {I, S, ST, ST^-1} (level N >= 3), the matrix
// M2 in A and integer omega_arg such that on the relevant fundamental-domain
// pieces the automorphic extension satisfies
//   ftilde(M1 z) = conj(chi(omega_arg)) f_b(M2 z),
// b being the cusp of M2.
struct Companion {
    Mat M2;
    i64 omega_arg = 1;
};

inline Companion companion_matrix(i64 N, const CosetSystem& sys, const Mat& M1) {
    if (N < 3) throw std::invalid_argument("companion_matrix: requires N >= 3");
    Mat S = Mat::S();
    if (M1.is_identity() || M1 == S || M1 == S * Mat::T(1) || M1 == S * Mat::T(-1))
        throw std::invalid_argument("companion_matrix: M1 in excluded set {I,S,ST,ST^-1}");
    i64 a1 = M1.a, c1 = M1.c, d1 = M1.d;
    i64 c2 = gcd_i(d1 < 0 ? -d1 : d1, N);
    i64 v = gcd_i(c2, N / c2);
    i64 a2;
    if (c2 == 1) {
        a2 = 0;
    } else {
        i64 cls = (v == 1) ? 0 : mod_pos(-d1 % v * mod_inverse(mod_pos(c1 * c2, v), v), v);
        a2 = detail::coset_a_representative(cls, v, c2);
    }
    // d2 in [-1, N/v - 1) with d2 = -c1 c2 / d1 mod N/c2 and a2 d2 = 1 mod c2.
    i64 d2 = 0;
    bool found = false;
    i64 target = mod_pos(-c1 * c2 % (N / c2) * mod_inverse(mod_pos(d1, N / c2), N / c2), N / c2);
    for (i64 cand = -1; cand < N / v - 1; ++cand) {
        if (mod_pos(cand, N / c2) != target) continue;
        if (c2 != 1 && mod_pos(a2 * cand - 1, c2) != 0) continue;
        d2 = cand;
        found = true;
        break;
    }
    if (!found) throw std::logic_error("companion_matrix: no d2 satisfies the congruences");
    Mat M2{a2, c2 == 1 ? -1 : (a2 * d2 - 1) / c2, c2, d2};
    if (M2.det() != 1) throw std::logic_error("companion_matrix: M2 not unimodular");
    if (!sys.find_rep(M2)) throw std::logic_error("companion_matrix: M2 not in A");
    i64 num = M2.d - M1.a * (M1.d * M2.d + M1.c * M2.c);
    if (num % c1 != 0) throw std::logic_error("companion_matrix: phase argument not integral");
    Companion out{M2, num / c1};
    // Membership claim of the construction: M' = M2 S M1^-1 in Gamma0(N).
    if (!(M2 * S * M1.inverse()).in_gamma0(N))
        throw std::logic_error("companion_matrix: M' not in Gamma0(N)");
    return out;
}

// Reduce z into the closure of the standard SL2(Z) fundamental domain and
// return (rho in Gamma0(N), index of M in A with rho z in F_M, w = rho z).
struct Pullback {
    Mat rho;
    size_t rep_index;
    CBall w;
};

inline Pullback pullback(const CosetSystem& sys, const CBall& z0) {
    if (!z0.im.is_positive())
        throw std::invalid_argument("pullback: point not certainly in the upper half-plane");
    CBall z = z0;
    Mat g{1, 0, 0, 1};  // g z0 = z
    for (int iter = 0; iter < 4096; ++iter) {
        double x = mpfr_get_d(z.re.mid(), MPFR_RNDN);
        double n = std::nearbyint(x);
        if (n != 0.0) {
            Mat t = Mat::T(-static_cast<i64>(n));
            g = t * g;
            z = t.apply(z);
        }
        double xr = mpfr_get_d(z.re.mid(), MPFR_RNDN);
        double yr = mpfr_get_d(z.im.mid(), MPFR_RNDN);
        if (xr * xr + yr * yr >= 1.0 - 1e-15) break;
        Mat s = Mat::S();
        g = s * g;
        z = s.apply(z);
    }
    // Certify membership in the closure of F_I, allowing the ball's width.
    Ball absq = abs_sq(z);
    double slack = 1e-12;
    if (z.re.abs_upper_double() > 0.5 + z.re.rad() + slack ||
        absq.lower_double() < 1.0 - 2 * absq.rad() - slack)
        throw domain_error("pullback: undecidable at this precision");
    // z0 in F_{g^-1}; find M in A with g^-1 in Gamma0(N) M, i.e. M g in Gamma0(N).
    for (size_t i = 0; i < sys.reps.size(); ++i) {
        Mat rho = sys.reps[i] * g;
        if (rho.in_gamma0(sys.N)) return Pullback{rho, i, rho.apply(z0)};
    }
    throw std::logic_error("pullback: no coset representative matched");
}

}  // namespace mcert

#endif
