#ifndef MCERT_CHARACTERS_HPP
#define MCERT_CHARACTERS_HPP

// Dirichlet characters mod N with exact root-of-unity values e(num/den),
// Conrey labels, conductor computation, CRT decomposition, and the
// certification-specific selection of the auxiliary integer m and the
// character set Psi.

#include "arith.hpp"
#include "cball.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace mcert {

// An exact rational exponent k/d in Q/Z representing the value e(k/d).
struct Rat {
    i64 num = 0;
    i64 den = 1;

    static Rat make(i64 n, i64 d) {
        if (d <= 0) throw std::invalid_argument("Rat: nonpositive denominator");
        n = mod_pos(n, d);
        i64 g = std::gcd(n == 0 ? d : n, d);
        return Rat{n / g, d / g};
    }
    Rat operator+(const Rat& o) const { return make(num * o.den + o.num * den, den * o.den); }
    Rat operator-() const { return make(-num, den); }
    Rat operator-(const Rat& o) const { return *this + (-o); }
    Rat operator*(i64 k) const { return make(num * mod_pos(k, den), den); }
    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
    bool is_zero() const { return num == 0; }

    CBall to_cball() const { return CBall::root_of_unity(num, den); }
};

class DirichletCharacter {
  public:
    // Conrey character mod N with index q (q coprime to N, 1 <= q <= N; q=1 trivial).
    static DirichletCharacter conrey(i64 N, i64 q) {
        if (N < 1) throw std::invalid_argument("character: modulus must be >= 1");
        q = N == 1 ? 1 : mod_pos(q, N);
        if (q == 0 || gcd_i(q, N) != 1)
            throw std::invalid_argument("character: Conrey index not coprime to modulus");
        DirichletCharacter chi;
        chi.modulus_ = N;
        chi.values_.assign(static_cast<size_t>(N == 1 ? 1 : N), std::nullopt);
        if (N == 1) {
            chi.values_[0] = Rat{0, 1};
        } else {
            for (i64 r = 1; r < N; ++r)
                if (gcd_i(r, N) == 1) chi.values_[static_cast<size_t>(r)] = conrey_exponent(N, q, r);
        }
        chi.conrey_index_ = (N == 1) ? 1 : q;
        chi.finish();
        return chi;
    }

    // Explicit value table: entries (r, num, den) meaning chi(r) = e(num/den).
    static DirichletCharacter from_table(i64 N, const std::vector<std::array<i64, 3>>& entries) {
        if (N < 1) throw std::invalid_argument("character: modulus must be >= 1");
        DirichletCharacter chi;
        chi.modulus_ = N;
        chi.values_.assign(static_cast<size_t>(N == 1 ? 1 : N), std::nullopt);
        if (N == 1) {
            chi.values_[0] = Rat{0, 1};
        } else {
            for (const auto& e : entries) {
                i64 r = mod_pos(e[0], N);
                if (gcd_i(r, N) != 1)
                    throw std::invalid_argument("character table: residue not coprime to modulus");
                chi.values_[static_cast<size_t>(r)] = Rat::make(e[1], e[2]);
            }
            for (i64 r = 1; r < N; ++r)
                if (gcd_i(r, N) == 1 && !chi.values_[static_cast<size_t>(r)])
                    throw std::invalid_argument("character table: missing residue " + std::to_string(r));
            chi.verify_homomorphism();
        }
        chi.conrey_index_ = chi.find_conrey_index();
        chi.finish();
        return chi;
    }

    i64 modulus() const { return modulus_; }
    i64 conductor() const { return conductor_; }
    i64 conrey_index() const { return conrey_index_; }
    bool is_even() const { return even_; }
    bool is_trivial() const { return conductor_ == 1; }
    bool is_real() const {
        for (const auto& v : values_)
            if (v && v->den > 2) return false;
        return true;
    }

    // Exponent of chi(n); nullopt when gcd(n, N) > 1 (value 0).
    std::optional<Rat> exponent(i64 n) const {
        if (modulus_ == 1) return Rat{0, 1};
        n = mod_pos(n, modulus_);
        if (n == 0 || gcd_i(n, modulus_) != 1) return std::nullopt;
        return values_[static_cast<size_t>(n)];
    }

    CBall value(i64 n) const {
        auto e = exponent(n);
        return e ? e->to_cball() : CBall(Ball(0), Ball(0));
    }

    // Value as an exact small integer when the character is real: -1, 0, or 1.
    int real_value(i64 n) const {
        auto e = exponent(n);
        if (!e) return 0;
        if (e->is_zero()) return 1;
        if (e->den == 2) return -1;
        throw std::logic_error("real_value on non-real character");
    }

    // chi(gamma) := chi(d) for gamma in Gamma0(N); rejects other matrices.
    std::optional<Rat> matrix_exponent(i64 a, i64 b, i64 c, i64 d) const {
        if (a * d - b * c != 1) throw std::invalid_argument("matrix not in SL2(Z)");
        if (mod_pos(c, modulus_) != 0)
            throw std::invalid_argument("matrix not in Gamma0(N)");
        return exponent(d);
    }

    DirichletCharacter conjugate() const {
        DirichletCharacter chi = *this;
        for (auto& v : chi.values_)
            if (v) v = -*v;
        chi.conrey_index_ = chi.find_conrey_index();
        return chi;
    }

    DirichletCharacter operator*(const DirichletCharacter& o) const {
        if (modulus_ != o.modulus_) throw std::invalid_argument("character product: modulus mismatch");
        DirichletCharacter chi = *this;
        for (size_t r = 0; r < values_.size(); ++r)
            if (chi.values_[r]) chi.values_[r] = *chi.values_[r] + *o.values_[r];
        chi.conductor_ = chi.compute_conductor();
        chi.even_ = chi.compute_even();
        chi.conrey_index_ = chi.find_conrey_index();
        return chi;
    }

    bool operator==(const DirichletCharacter& o) const {
        return modulus_ == o.modulus_ && values_ == o.values_;
    }

    // Restriction to modulus d for a Hall divisor d | N: chi_d(r) = chi(x),
    // x = r mod d, x = 1 mod N/d. Returns (chi_d, chi_{N/d}).
    std::pair<DirichletCharacter, DirichletCharacter> crt_decompose(i64 d) const {
        i64 N = modulus_;
        if (d <= 0 || N % d != 0 || gcd_i(d, N / d) != 1)
            throw std::invalid_argument("crt_decompose: not a Hall divisor");
        return {restrict_to(d), restrict_to(N / d)};
    }

    static std::vector<DirichletCharacter> all_characters(i64 N) {
        std::vector<DirichletCharacter> out;
        if (N == 1) { out.push_back(conrey(1, 1)); return out; }
        for (i64 q = 1; q <= N; ++q)
            if (gcd_i(q, N) == 1) out.push_back(conrey(N, q));
        return out;
    }

  private:
    DirichletCharacter() = default;

    void finish() {
        conductor_ = compute_conductor();
        even_ = compute_even();
    }

    bool compute_even() const {
        auto e = exponent(-1);
        return e && e->is_zero();
    }

    // Smallest f | N with chi trivial on {a = 1 mod f, gcd(a,N)=1}.
    i64 compute_conductor() const {
        for (i64 f : divisors(modulus_)) {
            bool ok = true;
            for (i64 a = 1; a < modulus_ && ok; ++a)
                if (a % f == 1 % f && gcd_i(a, modulus_) == 1) {
                    auto e = exponent(a);
                    if (!e || !e->is_zero()) ok = false;
                }
            if (ok) return f;
        }
        return modulus_;
    }

    void verify_homomorphism() const {
        for (i64 a = 1; a < modulus_; ++a) {
            if (gcd_i(a, modulus_) != 1) continue;
            for (i64 b = a; b < modulus_; ++b) {
                if (gcd_i(b, modulus_) != 1) continue;
                Rat lhs = *values_[static_cast<size_t>(mod_pos(a * b, modulus_))];
                Rat rhs = *values_[static_cast<size_t>(a)] + *values_[static_cast<size_t>(b)];
                if (!(lhs == rhs))
                    throw std::invalid_argument("character table is not multiplicative");
            }
        }
    }

    i64 find_conrey_index() const {
        i64 N = modulus_;
        if (N == 1) return 1;
        for (i64 q = 1; q <= N; ++q) {
            if (gcd_i(q, N) != 1) continue;
            bool match = true;
            for (i64 r = 1; r < N && match; ++r)
                if (gcd_i(r, N) == 1 && !(conrey_exponent(N, q, r) == *values_[static_cast<size_t>(r)]))
                    match = false;
            if (match) return q;
        }
        throw std::logic_error("character not matched by any Conrey index");
    }

    DirichletCharacter restrict_to(i64 d) const {
        DirichletCharacter chi;
        chi.modulus_ = d;
        chi.values_.assign(static_cast<size_t>(d == 1 ? 1 : d), std::nullopt);
        if (d == 1) {
            chi.values_[0] = Rat{0, 1};
        } else {
            i64 N = modulus_;
            for (i64 r = 1; r < d; ++r) {
                if (gcd_i(r, d) != 1) continue;
                i64 x = crt({r, 1}, {d, N / d});
                chi.values_[static_cast<size_t>(r)] = *exponent(x);
            }
        }
        chi.conrey_index_ = chi.find_conrey_index();
        chi.finish();
        return chi;
    }

    // Exponent of the Conrey character chi_{N,q} at r (both coprime to N).
    static Rat conrey_exponent(i64 N, i64 q, i64 r) {
        Rat total{0, 1};
        for (const auto& pp : factorize(N)) {
            i64 pe = pp.pe;
            i64 qq = mod_pos(q, pe), rr = mod_pos(r, pe);
            if (pp.p != 2) {
                i64 g = odd_conrey_generator(pp.p, pp.e);
                i64 phi = euler_phi(pe);
                i64 nu = discrete_log(qq, g, phi, pe);
                i64 a = discrete_log(rr, g, phi, pe);
                total = total + Rat::make(nu * a, phi);
            } else if (pp.e == 1) {
                // trivial group
            } else if (pp.e == 2) {
                i64 s = (qq == 3) ? 1 : 0, sigma = (rr == 3) ? 1 : 0;
                total = total + Rat::make(s * sigma, 2);
            } else {
                auto [s, t] = two_power_log(qq, pe);
                auto [sig, tau] = two_power_log(rr, pe);
                i64 half = pe / 4;  // 2^{e-2}
                total = total + Rat::make(s * sig, 2) + Rat::make(t * tau, half);
            }
        }
        return total;
    }

    // Generator for (Z/p^e)*: least primitive root mod p^2 (works for all e >= 1).
    static i64 odd_conrey_generator(i64 p, int e) {
        i64 g = primitive_root(p, p);
        if (mod_pow(g, p - 1, p * p) == 1) g += p;  // lift to a root mod p^2
        return g;
    }

    // Write r = (-1)^s 5^t mod 2^e (e >= 3); returns (s, t).
    static std::pair<i64, i64> two_power_log(i64 r, i64 pe) {
        i64 half = pe / 4;
        for (i64 s = 0; s <= 1; ++s) {
            i64 target = mod_pos(s ? -r : r, pe);
            i64 cur = 1;
            for (i64 t = 0; t < half; ++t) {
                if (cur == target) return {s, t};
                cur = (cur * 5) % pe;
            }
        }
        throw std::logic_error("two_power_log: decomposition failed");
    }

    i64 modulus_ = 1;
    i64 conductor_ = 1;
    i64 conrey_index_ = 1;
    bool even_ = true;
    std::vector<std::optional<Rat>> values_;
};

// The auxiliary Hecke index m and the separating character set Psi.

inline i64 select_m(i64 N, const DirichletCharacter& chi) {
    auto pf = factorize(N);
    for (i64 m = 2;; ++m) {
        if (gcd_i(m, N) != 1) continue;
        bool ok = true;
        for (const auto& pp : pf) {
            i64 e = pp.e;
            i64 s = valuation(chi.conductor(), pp.p);
            i64 k = std::min(e / 2, e - s);
            i64 mod = 1;
            for (i64 i = 0; i < k; ++i) mod *= pp.p;
            if (mod_pos(m - 1, mod) != 0) { ok = false; break; }
        }
        if (ok) return m;
    }
}

struct PsiSet {
    std::vector<DirichletCharacter> members;
    i64 m = 2;
    std::vector<Rat> values_at_m;
};

// Maximal set of characters psi mod N with f(psi) f(chi psibar) | N and
// pairwise distinct psi(m); deterministic tie-break by conductor then
// Conrey index.
inline PsiSet build_psi_set(i64 N, const DirichletCharacter& chi, i64 m) {
    if (gcd_i(m, N) != 1 || m < 2) throw std::invalid_argument("build_psi_set: bad m");
    auto chibar = chi.conjugate();
    std::vector<DirichletCharacter> eligible;
    for (const auto& psi : DirichletCharacter::all_characters(N)) {
        i64 f1 = psi.conductor();
        i64 f2 = (chi * psi.conjugate()).conductor();
        if (N % (f1 * f2) == 0) eligible.push_back(psi);
    }
    std::sort(eligible.begin(), eligible.end(),
              [](const DirichletCharacter& a, const DirichletCharacter& b) {
                  if (a.conductor() != b.conductor()) return a.conductor() < b.conductor();
                  return a.conrey_index() < b.conrey_index();
              });
    PsiSet out;
    out.m = m;
    for (const auto& psi : eligible) {
        Rat v = *psi.exponent(m);
        bool dup = false;
        for (const auto& w : out.values_at_m)
            if (w == v) { dup = true; break; }
        if (!dup) {
            out.members.push_back(psi);
            out.values_at_m.push_back(v);
        }
    }
    return out;
}

}  // namespace mcert

#endif
