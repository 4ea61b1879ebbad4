#ifndef MCERT_FORMS_HPP
#define MCERT_FORMS_HPP

// Purported-form data model: truncated Fourier expansions at the cusps of
// the fundamental domain, Hecke-relation extension of the coefficient table
// at infinity, derivation of Hall-cusp tables, validation of the input
// conditions, and certified evaluation of expansions and their partials.

#include "characters.hpp"
#include "geometry.hpp"
#include "whittaker.hpp"

#include <map>
#include <string>
#include <vector>

namespace mcert {

enum class Symmetry { Odd, Even };

// a(oo, n) for 1 <= n <= M0 from prime coefficients via the Hecke relations
//   a(p^e) = a(p) a(p^{e-1}) - chi(p) a(p^{e-2}),   a(mn) = a(m) a(n) for (m,n)=1.
// Indices in (M0, extend_to] whose prime factors all lie in the supplied table
// are included as well; indices needing an unavailable prime are skipped there.
// The defect of a truncated expansion is governed by its smallest absent
// index, so carrying the freely-derivable composite indices past M0 moves the
// defect floor out to the first prime beyond the table at no input cost.
inline std::map<i64, CBall> hecke_extend(const std::map<i64, CBall>& primes,
                                         const DirichletCharacter& chi, i64 M0,
                                         i64 extend_to = 0) {
    std::map<i64, CBall> a;
    a[1] = CBall(Ball(1));
    for (i64 n = 2; n <= std::max(M0, extend_to); ++n) {
        CBall v(Ball(1));
        bool have_all = true;
        for (const auto& pp : factorize(n)) {
            auto it = primes.find(pp.p);
            if (it == primes.end()) {
                if (n <= M0)
                    throw std::invalid_argument("hecke_extend: missing prime coefficient a(oo," +
                                                std::to_string(pp.p) + ")");
                have_all = false;
                break;
            }
            const CBall& ap = it->second;
            CBall prev2(Ball(1)), prev1 = ap;  // a(p^0), a(p^1)
            for (int e = 2; e <= pp.e; ++e) {
                CBall cur = ap * prev1 - chi.value(pp.p) * prev2;
                prev2 = prev1;
                prev1 = cur;
            }
            v = v * prev1;
        }
        if (have_all) a[n] = v;
    }
    return a;
}

// One Fourier expansion f_a(z) = sum_n c_n / sqrt(2 pi |n+mu|)
// W_{ir}(2 pi |n+mu| y) e((n+mu) x), truncated to the stored terms.
struct CuspExpansion {
    struct Term {
        i64 n;
        CBall c;
    };
    Rat mu{0, 1};
    std::vector<Term> terms;
};

struct PurportedForm {
    i64 N = 1;
    DirichletCharacter chi = DirichletCharacter::conrey(1, 1);
    Ball lambda;
    Ball r;
    i64 M0 = 0;
    Symmetry symmetry = Symmetry::Odd;
    std::map<i64, CBall> prime_coeffs;        // a(oo, p) for primes p <= M0
    std::map<i64, CBall> infinity_table;      // a(oo, n) on the derivable index set
    std::map<i64, CBall> hall_units;          // Hall divisor d -> a(cusp-class of 1/d, 1)
    double coefficient_radius = 0.0;
    i64 table_limit = 0;                      // largest index carried in the tables

    CBall unit() const { return CBall(Ball(symmetry == Symmetry::Odd ? -1 : 1)); }

    void finalize() {
        r = sqrt(lambda - Ball(1) / Ball(4));
        // Carry composite indices derivable from the supplied primes a little
        // past the first absent prime; beyond that the absent-prime term
        // dominates any further omission, so a short margin suffices.
        i64 p_star = M0 + 1;
        while (!is_prime(p_star)) ++p_star;
        table_limit = p_star + 8;
        infinity_table = hecke_extend(prime_coeffs, chi, M0, table_limit);
    }

    // Hall divisor whose cusp 1/d is Gamma0(N)-equivalent to the given cusp.
    i64 hall_divisor_of(const Cusp& cu) const {
        for (i64 d : hall_divisors(N))
            if (cusps_equivalent(N, 1, d, cu.num, cu.den)) return d;
        throw std::invalid_argument("cusp " + cu.str() +
                                    " is not equivalent to a Hall cusp; expansion unavailable");
    }

    // Coefficient table at the cusp class of 1/d, derived from the table at
    // infinity via the Hecke action: for n = prod p^e,
    //   b(n) = b(1) * prod B(p^e),
    // with B(p^e) = a(oo,p)^e for p | d, conj(a(oo,p))^e for p | N/d, and for
    // p coprime to N the twisted recursion B(p) = conj(chi_{N/d}(p)) a(oo,p),
    // B(p^e) = B(p) B(p^{e-1}) - chi'(p) B(p^{e-2}) with chi' = conj(chi_{N/d}) chi_d.
    CuspExpansion expansion_at(const Cusp& cu) const {
        i64 d = hall_divisor_of(cu);
        if (!cu.mu.is_zero())
            throw std::logic_error("Hall cusp with nonzero cusp parameter");
        CBall b1 = (d == N) ? CBall(Ball(1)) : hall_unit(d);
        auto [chi_d, chi_nd] = chi.crt_decompose(d);
        CuspExpansion out;
        out.mu = cu.mu;
        CBall u = unit();
        for (const auto& [n, unused] : infinity_table) {
            (void)unused;
            CBall b = b1;
            for (const auto& pp : factorize(n)) b = b * hall_block(d, chi_d, chi_nd, pp);
            out.terms.push_back({n, b});
            out.terms.push_back({-n, u * b});
        }
        return out;
    }

    CBall hall_unit(i64 d) const {
        auto it = hall_units.find(d);
        if (it == hall_units.end())
            throw std::invalid_argument("missing cusp unit a(1/" + std::to_string(d) + ",1)");
        return it->second;
    }

  private:
    CBall hall_block(i64 d, const DirichletCharacter& chi_d, const DirichletCharacter& chi_nd,
                     const PrimePower& pp) const {
        const CBall& ap = prime_coeffs.at(pp.p);
        if (d % pp.p == 0) {
            CBall v(Ball(1));
            for (int e = 0; e < pp.e; ++e) v = v * ap;
            return v;
        }
        if ((N / d) % pp.p == 0) {
            CBall v(Ball(1));
            for (int e = 0; e < pp.e; ++e) v = v * conj(ap);
            return v;
        }
        CBall Bp = conj(chi_nd.value(pp.p)) * ap;
        CBall chip = conj(chi_nd.value(pp.p)) * chi_d.value(pp.p);
        CBall prev2(Ball(1)), prev1 = Bp;
        for (int e = 2; e <= pp.e; ++e) {
            CBall cur = Bp * prev1 - chip * prev2;
            prev2 = prev1;
            prev1 = cur;
        }
        return pp.e == 0 ? CBall(Ball(1)) : prev1;
    }
};

struct ValidationCheck {
    std::string name;
    bool ok = true;
    double residual = 0.0;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool passed = true;

    void add(const std::string& name, bool ok, double residual = 0.0) {
        checks.push_back({name, ok, residual});
        passed = passed && ok;
    }
};

inline ValidationReport validate_conditions(const PurportedForm& f, double tol) {
    ValidationReport rep;
    rep.add("character_even", f.chi.is_even());
    rep.add("conductor_divides_level", f.N % f.chi.conductor() == 0);
    rep.add("lambda_at_least_quarter",
            !f.lambda.certainly_less(Ball(1) / Ball(4)));
    // normalization a(oo,1) = 1
    {
        CBall a1 = f.infinity_table.at(1);
        double res = (a1 - CBall(Ball(1))).abs_upper_double();
        rep.add("normalization", res <= tol, res);
    }
    // Hecke relations among the stored table: multiplicativity across coprime
    // splits and the p^e recursion.
    double worst = 0.0;
    for (i64 n = 2; n <= f.M0; ++n) {
        auto fac = factorize(n);
        if (fac.size() > 1) {
            i64 m1 = fac[0].pe, m2 = n / fac[0].pe;
            CBall res = f.infinity_table.at(n) - f.infinity_table.at(m1) * f.infinity_table.at(m2);
            worst = std::max(worst, res.abs_upper_double());
        } else if (fac[0].e >= 2) {
            i64 p = fac[0].p;
            CBall res = f.infinity_table.at(n) -
                        (f.infinity_table.at(p) * f.infinity_table.at(n / p) -
                         f.chi.value(p) * f.infinity_table.at(n / (p * p)));
            worst = std::max(worst, res.abs_upper_double());
        }
    }
    rep.add("hecke_relations", worst <= tol, worst);
    // Unit coefficients at Hall cusps have absolute value 1; measure the
    // defect of |u|^2 in ball arithmetic so the residual is not floored at
    // double rounding error.
    double worst_unit = 0.0;
    for (const auto& [d, u] : f.hall_units) {
        double res = abs(abs_sq(u) - Ball(1)).upper_double();
        worst_unit = std::max(worst_unit, res);
    }
    rep.add("hall_units_unimodular", worst_unit <= tol, worst_unit);
    return rep;
}

// Certified evaluation of one cusp expansion and its (x, y)-partials.
class ExpansionEvaluator {
  public:
    ExpansionEvaluator(const CuspExpansion& exp, const WhittakerEvaluator& ev)
        : exp_(exp), ev_(ev) {}

    // alpha_n = 2 pi (n + mu), signed; beta_n = |alpha_n|.
    Ball alpha(i64 n) const {
        Ball mu = Ball(exp_.mu.num) / Ball(exp_.mu.den);
        return Ball(2) * Ball::pi() * (Ball(n) + mu);
    }

    CBall evaluate(const Ball& x, const Ball& y) const { return evaluate_partials(x, y, 0, 0); }

    // d^{k+l} f / dx^k dy^l of the truncated sum.
    CBall evaluate_partials(const Ball& x, const Ball& y, int k, int l) const {
        if (!y.is_positive()) throw domain_error("evaluate: y must be strictly positive");
        CBall total;
        std::map<i64, std::vector<Ball>> wcache;  // |n+mu| key via n for mu=0; general: per |alpha|
        for (const auto& term : exp_.terms) {
            Ball a = alpha(term.n);
            Ball beta = abs(a);
            std::vector<Ball>* derivs;
            i64 key = term.n >= 0 ? term.n : (exp_.mu.is_zero() ? -term.n : term.n);
            auto it = wcache.find(key);
            if (it == wcache.end())
                it = wcache.emplace(key, ev_.derivatives(beta * y, l)).first;
            derivs = &it->second;
            // (i alpha)^k  e^{i alpha x}  beta^l W^(l)(beta y) / sqrt(beta)
            CBall factor = CBall::exp_i(a * x);
            CBall ia_k(Ball(1));
            for (int j = 0; j < k; ++j) ia_k = ia_k * CBall(Ball(0), a);
            Ball radial = pow_ui(beta, static_cast<unsigned long>(l)) *
                          (*derivs)[static_cast<size_t>(l)] / sqrt(beta);
            total += term.c * ia_k * factor * radial;
        }
        return total;
    }

  private:
    const CuspExpansion& exp_;
    const WhittakerEvaluator& ev_;
};

}  // namespace mcert

#endif
