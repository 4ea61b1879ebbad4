#ifndef MCERT_ARITH_HPP
#define MCERT_ARITH_HPP

// Elementary integer number theory for small moduli: factorization,
// divisors, totient, extended Euclid, primitive roots, discrete logs.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mcert {

using i64 = std::int64_t;

inline i64 gcd_i(i64 a, i64 b) { return std::gcd(a, b); }

inline i64 mod_pos(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

// Extended Euclid: returns g and x,y with a x + b y = g.
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) { x = (a >= 0) ? 1 : -1; y = 0; return a >= 0 ? a : -a; }
    i64 x1, y1;
    i64 g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

inline i64 mod_inverse(i64 a, i64 m) {
    i64 x, y;
    i64 g = ext_gcd(mod_pos(a, m), m, x, y);
    if (g != 1) throw std::invalid_argument("mod_inverse: not coprime");
    return mod_pos(x, m);
}

inline i64 mod_pow(i64 base, i64 e, i64 m) {
    i64 r = 1 % m;
    base = mod_pos(base, m);
    while (e > 0) {
        if (e & 1) r = (r * base) % m;
        base = (base * base) % m;
        e >>= 1;
    }
    return r;
}

struct PrimePower {
    i64 p;
    int e;
    i64 pe;  // p^e
};

inline std::vector<PrimePower> factorize(i64 n) {
    if (n <= 0) throw std::invalid_argument("factorize: n must be positive");
    std::vector<PrimePower> out;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            PrimePower pp{p, 0, 1};
            while (n % p == 0) { n /= p; ++pp.e; pp.pe *= p; }
            out.push_back(pp);
        }
    }
    if (n > 1) out.push_back({n, 1, n});
    return out;
}

inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

inline i64 smallest_prime_factor(i64 n) {
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return p;
    return n;
}

inline int omega(i64 n) { return static_cast<int>(factorize(n).size()); }

inline i64 euler_phi(i64 n) {
    i64 r = n;
    for (const auto& pp : factorize(n)) r = r / pp.p * (pp.p - 1);
    return n == 1 ? 1 : r;
}

inline std::vector<i64> divisors(i64 n) {
    std::vector<i64> out{1};
    for (const auto& pp : factorize(n)) {
        size_t sz = out.size();
        i64 q = 1;
        for (int e = 1; e <= pp.e; ++e) {
            q *= pp.p;
            for (size_t i = 0; i < sz; ++i) out.push_back(out[i] * q);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// d | n with gcd(d, n/d) = 1.
inline std::vector<i64> hall_divisors(i64 n) {
    std::vector<i64> out;
    for (i64 d : divisors(n))
        if (gcd_i(d, n / d) == 1) out.push_back(d);
    return out;
}

inline i64 valuation(i64 n, i64 p) {
    i64 v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

// Smallest primitive root mod p^e (p odd prime) or mod p.
inline i64 primitive_root(i64 pe, i64 p) {
    i64 phi = (pe / p) * (p - 1);
    auto pf = factorize(phi);
    for (i64 g = 2; g < pe; ++g) {
        if (gcd_i(g, pe) != 1) continue;
        bool ok = true;
        for (const auto& q : pf)
            if (mod_pow(g, phi / q.p, pe) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root: none found");
}

// Discrete log of a to base g mod m, where g has order ord; brute force.
inline i64 discrete_log(i64 a, i64 g, i64 ord, i64 m) {
    i64 cur = 1 % m;
    a = mod_pos(a, m);
    for (i64 k = 0; k < ord; ++k) {
        if (cur == a) return k;
        cur = (cur * g) % m;
    }
    throw std::invalid_argument("discrete_log: not in subgroup");
}

// CRT for pairwise coprime moduli: x = r_i mod m_i.
inline i64 crt(const std::vector<i64>& rems, const std::vector<i64>& mods) {
    i64 x = 0, M = 1;
    for (i64 m : mods) M *= m;
    for (size_t i = 0; i < rems.size(); ++i) {
        i64 Mi = M / mods[i];
        x = mod_pos(x + rems[i] % mods[i] * Mi % M * mod_inverse(Mi, mods[i]), M);
    }
    return x;
}

inline std::vector<i64> primes_up_to(i64 n) {
    std::vector<i64> out;
    for (i64 p = 2; p <= n; ++p)
        if (is_prime(p)) out.push_back(p);
    return out;
}

}  // namespace mcert

#endif
