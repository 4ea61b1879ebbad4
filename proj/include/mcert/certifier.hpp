#ifndef MCERT_CERTIFIER_HPP
#define MCERT_CERTIFIER_HPP

// Assembly of the certified eigenvalue bound: automorphy-defect regions and
// their Taylor-based sup bounds, the Hecke-norm factor N(T_m), the
// Eisenstein-separating product over the character set Psi, and the final
// certificate.

#include "forms.hpp"
#include "geometry.hpp"
#include "whittaker.hpp"

#include <atomic>
#include <chrono>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace mcert {

// ---------- small shared tables ----------

struct CombinatoricsTables {
    int d;
    std::vector<std::vector<Ball>> stirling;  // S(n,k), 0 <= k <= n <= d
    std::vector<std::vector<Ball>> binom;     // C(n,k)
    std::vector<Ball> factorial;              // n!

    explicit CombinatoricsTables(int degree) : d(degree) {
        stirling.resize(static_cast<size_t>(d) + 1);
        binom.resize(static_cast<size_t>(d) + 1);
        for (int n = 0; n <= d; ++n) {
            stirling[n].assign(static_cast<size_t>(n) + 1, Ball(0));
            binom[n].assign(static_cast<size_t>(n) + 1, Ball(1));
            if (n == 0) {
                stirling[0][0] = Ball(1);
            } else {
                for (int k = 1; k < n; ++k)
                    stirling[n][k] = Ball(k) * stirling[n - 1][k] + stirling[n - 1][k - 1];
                stirling[n][n] = stirling[n - 1][n - 1];
                for (int k = 1; k < n; ++k) binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
            }
        }
        factorial.push_back(Ball(1));
        for (int n = 1; n <= d; ++n) factorial.push_back(factorial.back() * Ball(n));
    }
};

// ---------- region problems ----------

// One side of an automorphy-defect difference: the expansion f evaluated at
// Z(w) = (e^w + a)/h (sigma = +1) or Z(w) = (a - e^{-w})/h (sigma = -1),
// where w = t + i theta.
struct RegionSide {
    CuspExpansion expansion;
    i64 a = 0;
    i64 h = 1;
    int sigma = +1;
};

struct RegionProblem {
    std::string label;
    std::vector<size_t> rep_indices;  // entries of A whose E(M) this bound covers
    RegionSide side1, side2;
    CBall phase{Ball(1)};             // E = f1(Z1) - phase * f2(Z2)
    Ball t0;                          // log-radius of the sample arc
    std::vector<Rat> theta0s;         // sample angles as exact multiples of pi
    int multiplier = 1;               // 1 generic, 3 for the B' problem
};

namespace rg {

inline CBall side_point(const RegionSide& s, const Ball& t0, const Ball& th0) {
    Ball A = Ball(s.a), H = Ball(s.h);
    if (s.sigma > 0) {
        CBall ew = exp(t0) * CBall::exp_i(th0);
        return (ew + CBall(A)) / H;
    }
    CBall emw = exp(-t0) * CBall::exp_i(-th0);
    return (CBall(A) - emw) / H;
}

// Upper bound on sup |Z - a/h| over the box |t - t0| <= rho.
inline Ball side_radius_sup(const RegionSide& s, const Ball& t0, const Ball& rho) {
    Ball ex = (s.sigma > 0) ? exp(t0 + rho) : exp(-(t0 - rho));
    return ex / Ball(s.h);
}

// Lower bound on Im Z over the box.
inline Ball side_ylo(const RegionSide& s, const Ball& t0, const Ball& th0, const Ball& rho) {
    Ball s1 = sin(th0 - rho), s2 = sin(th0 + rho);
    Ball msin = Ball::from_double(std::min(s1.lower_double(), s2.lower_double()));
    if (!msin.is_positive()) throw domain_error("region box leaves the upper half-plane");
    Ball ex = (s.sigma > 0) ? exp(t0 - rho) : exp(-(t0 + rho));
    return ex * msin / Ball(s.h);
}

// Derivative grid A[p][q] ~ d_w^p d_wbar^q f(Z(w)) at the base point, for
// p + q <= dmax, plus magnitude data for the remainder bound.
struct SideData {
    std::vector<std::vector<CBall>> A;  // A[p][q], p+q <= dmax
    std::vector<Ball> Ghat;             // Ghat[i] >= sup_box |G_{j,k}|, i = j+k, 0..dsup
    Ball RZ;                            // sup_box |Z - a/h|
};

inline SideData side_derivatives(const RegionSide& s, const WhittakerEvaluator& ev,
                                 const CombinatoricsTables& tab, const Ball& t0, const Ball& th0,
                                 const Ball& rho, int dmax, int dsup) {
    SideData out;
    CBall Z = side_point(s, t0, th0);
    Ball x = Z.re, y = Z.im;
    if (!y.is_positive()) throw domain_error("region base point not in the upper half-plane");
    Ball c = Ball(s.a) / Ball(s.h);
    out.RZ = side_radius_sup(s, t0, rho);
    Ball ylo = side_ylo(s, t0, th0, rho);

    // G[j][k] = sum_n ctilde_n e^{i alpha_n x} (i/2)^{j+k} sum_l p^{(j,k)}_l V_l(n)
    std::vector<std::vector<CBall>> G(static_cast<size_t>(dmax) + 1);
    for (int j = 0; j <= dmax; ++j) G[j].assign(static_cast<size_t>(dmax - j) + 1, CBall());
    out.Ghat.assign(static_cast<size_t>(dsup) + 1, Ball(0));

    // (i/2)^i table
    std::vector<CBall> half_i(static_cast<size_t>(dmax) + 1, CBall(Ball(1)));
    CBall i_half(Ball(0), Ball(1) / Ball(2));
    for (int i = 1; i <= dmax; ++i) half_i[i] = half_i[i - 1] * i_half;

    std::map<std::string, std::vector<Ball>> vtab;  // |alpha| key -> V_l table
    for (const auto& term : s.expansion.terms) {
        Ball mu = Ball(s.expansion.mu.num) / Ball(s.expansion.mu.den);
        Ball alpha = Ball(2) * Ball::pi() * (Ball(term.n) + mu);
        Ball beta = abs(alpha);
        std::string key = beta.mid_string(40);
        auto it = vtab.find(key);
        if (it == vtab.end()) {
            auto derivs = ev.derivatives(beta * y, dmax);
            std::vector<Ball> V(derivs.size());
            Ball bp(1);
            for (size_t l = 0; l < derivs.size(); ++l) {
                V[l] = bp * derivs[l];
                bp = bp * beta;
            }
            it = vtab.emplace(key, std::move(V)).first;
        }
        const std::vector<Ball>& V = it->second;
        Ball sbeta = sqrt(beta);
        CBall cfac = (term.c / sbeta) * CBall::exp_i(alpha * x);

        // polynomial p^{(j,k)}(X) = (alpha - X)^j (alpha + X)^k, built row by row
        std::vector<Ball> pj{Ball(1)};  // (alpha - X)^j
        for (int j = 0; j <= dmax; ++j) {
            std::vector<Ball> p = pj;
            for (int k = 0; k + j <= dmax; ++k) {
                Ball dot(0);
                for (size_t l = 0; l < p.size(); ++l) dot += p[l] * V[l];
                G[j][k] += cfac * (half_i[static_cast<size_t>(j + k)] * dot);
                if (k + j < dmax) {
                    // multiply by (alpha + X)
                    std::vector<Ball> q(p.size() + 1, Ball(0));
                    for (size_t l = 0; l < p.size(); ++l) {
                        q[l] += alpha * p[l];
                        q[l + 1] += p[l];
                    }
                    p = std::move(q);
                }
            }
            if (j < dmax) {
                // pj *= (alpha - X)
                std::vector<Ball> q(pj.size() + 1, Ball(0));
                for (size_t l = 0; l < pj.size(); ++l) {
                    q[l] += alpha * pj[l];
                    q[l + 1] -= pj[l];
                }
                pj = std::move(q);
            }
        }

        // magnitude: |ctilde| 2^-i sum_l C(i,l) |alpha|^{i-l} Vhat_l with
        // Vhat_l >= beta^l sup_{u >= beta ylo} |W^(l)(u)|, minimized over a
        // grid of Cauchy radii theta u (the e^{-u(1-theta)} decay is what
        // keeps high Fourier modes from dominating the remainder).
        Ball cmag = abs(term.c) / sbeta;
        std::vector<Ball> apow(static_cast<size_t>(dsup) + 1, Ball(1));
        for (int i = 1; i <= dsup; ++i) apow[i] = apow[i - 1] * beta;  // |alpha| = beta
        Ball u0 = beta * ylo;
        static const double kThetas[] = {0.25, 0.5, 0.75, 0.9, 0.99};
        std::vector<Ball> Vhat(static_cast<size_t>(dsup) + 1, Ball(0));
        bool first_theta = true;
        for (double th : kThetas) {
            Ball theta = Ball::from_double(th);
            Ball pref = sqrt(Ball::pi() * (Ball(1) + theta) / (Ball(2) * (Ball(1) - theta)));
            Ball invr = Ball(1) / (theta * ylo);
            Ball cur = pref * exp(-(u0 * (Ball(1) - theta)));  // l! (theta ylo)^-l ..., l = 0
            for (int l = 0; l <= dsup; ++l) {
                if (first_theta || cur.upper_double() < Vhat[l].upper_double()) Vhat[l] = cur;
                if (l < dsup) cur = cur * Ball(l + 1) * invr;
            }
            first_theta = false;
        }
        Ball half(1);
        Ball one_half = Ball(1) / Ball(2);
        for (int i = 0; i <= dsup; ++i) {
            Ball ssum(0);
            for (int l = 0; l <= i; ++l) ssum += tab.binom[i][l] * apow[i - l] * Vhat[l];
            out.Ghat[i] += cmag * half * ssum;
            half = half * one_half;
        }
    }

    // H[j][k] = (Z-c)^j (Zbar-c)^k G[j][k]; then
    // A[p][q] = sigma^{p+q} sum_{j<=p,k<=q} S(p,j) S(q,k) H[j][k].
    std::vector<CBall> ZP(static_cast<size_t>(dmax) + 1, CBall(Ball(1)));
    std::vector<CBall> ZbP(static_cast<size_t>(dmax) + 1, CBall(Ball(1)));
    CBall Zc = Z - CBall(c), Zbc = conj(Z) - CBall(c);
    for (int j = 1; j <= dmax; ++j) {
        ZP[j] = ZP[j - 1] * Zc;
        ZbP[j] = ZbP[j - 1] * Zbc;
    }
    std::vector<std::vector<CBall>> H(static_cast<size_t>(dmax) + 1);
    for (int j = 0; j <= dmax; ++j) {
        H[j].assign(static_cast<size_t>(dmax - j) + 1, CBall());
        for (int k = 0; k + j <= dmax; ++k) H[j][k] = ZP[j] * ZbP[k] * G[j][k];
    }
    out.A.resize(static_cast<size_t>(dmax) + 1);
    for (int p = 0; p <= dmax; ++p) {
        out.A[p].assign(static_cast<size_t>(dmax - p) + 1, CBall());
        for (int q = 0; q + p <= dmax; ++q) {
            CBall acc;
            for (int j = (p > 0 ? 1 : 0); j <= p; ++j)
                for (int k = (q > 0 ? 1 : 0); k <= q; ++k)
                    acc += (tab.stirling[p][j] * tab.stirling[q][k]) * H[j][k];
            if (s.sigma < 0 && (p + q) % 2 == 1) acc = -acc;
            out.A[p][q] = acc;
        }
    }
    return out;
}

// Upper bound on sup |E| over the coordinate box of half-width rho centered
// at (t0, theta0).
inline Ball point_bound(const RegionProblem& prob, const WhittakerEvaluator& ev,
                        const CombinatoricsTables& tab, const Ball& th0, const Ball& rho, int d,
                        int subdiv) {
    int dmax = d - 1;  // exact derivatives for Taylor terms 0..d-1
    SideData s1 = side_derivatives(prob.side1, ev, tab, prob.t0, th0, rho, dmax, d);
    SideData s2 = side_derivatives(prob.side2, ev, tab, prob.t0, th0, rho, dmax, d);

    // A_E[p][q] = A1 - phase * A2
    std::vector<std::vector<CBall>> AE(static_cast<size_t>(dmax) + 1);
    for (int p = 0; p <= dmax; ++p) {
        AE[p].assign(static_cast<size_t>(dmax - p) + 1, CBall());
        for (int q = 0; q + p <= dmax; ++q) AE[p][q] = s1.A[p][q] - prob.phase * s2.A[p][q];
    }

    // Complex Taylor coefficients about the base point,
    // P[r][s] = (d_t^r d_th^s E) / (r! s!).
    const CBall i_pows[4] = {CBall(Ball(1)), CBall(Ball(0), Ball(1)), CBall(Ball(-1)),
                             CBall(Ball(0), Ball(-1))};
    std::vector<std::vector<CBall>> P(static_cast<size_t>(dmax) + 1);
    for (int r = 0; r <= dmax; ++r) {
        P[r].assign(static_cast<size_t>(dmax - r) + 1, CBall());
        for (int s = 0; s + r <= dmax; ++s) {
            CBall der;
            for (int j = 0; j <= r; ++j)
                for (int k = 0; k <= s; ++k) {
                    CBall contrib = (tab.binom[r][j] * tab.binom[s][k]) * AE[j + k][r + s - j - k];
                    if ((s - k) % 2 == 1) contrib = -contrib;
                    der += contrib;
                }
            P[r][s] = i_pows[s % 4] * der / (tab.factorial[r] * tab.factorial[s]);
        }
    }

    // Sup of the polynomial over the box by re-centering on a subdiv x subdiv
    // grid of sub-boxes; keeping complex coefficients through the shifts
    // preserves the phase cancellation a single absolute sum would lose.
    int k = subdiv < 1 ? 1 : subdiv;
    Ball rho_k = rho / Ball(k);
    Ball total(0);
    std::vector<std::vector<CBall>> Q1(P), Q2(P);
    std::vector<Ball> pw(static_cast<size_t>(dmax) + 1, Ball(1));
    for (int a = 0; a < k; ++a) {
        Ball dt = rho * Ball(2 * a + 1 - k) / Ball(k);
        pw[0] = Ball(1);
        for (int j = 1; j <= dmax; ++j) pw[j] = pw[j - 1] * dt;
        for (int s = 0; s <= dmax; ++s)
            for (int r = 0; r + s <= dmax; ++r) {
                CBall acc;
                for (int j = r; j + s <= dmax; ++j) acc += tab.binom[j][r] * P[j][s] * pw[j - r];
                Q1[r][s] = acc;
            }
        for (int b = 0; b < k; ++b) {
            Ball dth = rho * Ball(2 * b + 1 - k) / Ball(k);
            pw[0] = Ball(1);
            for (int j = 1; j <= dmax; ++j) pw[j] = pw[j - 1] * dth;
            Ball sub(0);
            std::vector<Ball> rkp(static_cast<size_t>(dmax) + 1, Ball(1));
            for (int j = 1; j <= dmax; ++j) rkp[j] = rkp[j - 1] * rho_k;
            for (int r = 0; r <= dmax; ++r)
                for (int s = 0; s + r <= dmax; ++s) {
                    CBall acc;
                    for (int j = s; j + r <= dmax; ++j)
                        acc += tab.binom[j][s] * Q1[r][j] * pw[j - s];
                    Q2[r][s] = acc;
                    sub += abs(Q2[r][s]) * rkp[r + s];
                }
            total = max_ball(total, sub);
        }
    }
    Ball rho_pow(1);
    for (int i = 0; i < d; ++i) rho_pow = rho_pow * rho;

    // Remainder: rho^d (2^d/d!) sum_p C(d,p) (Ahat1[p] + Ahat2[p]) with
    // Ahat_s[p] = sum_{j<=p,k<=d-p} S(p,j) S(d-p,k) RZ^{j+k} Ghat[j+k].
    Ball rem(0);
    for (const SideData* sd : {&s1, &s2}) {
        std::vector<Ball> RZp(static_cast<size_t>(d) + 1, Ball(1));
        for (int i = 1; i <= d; ++i) RZp[i] = RZp[i - 1] * sd->RZ;
        for (int p = 0; p <= d; ++p) {
            int q = d - p;
            Ball ahat(0);
            for (int j = (p > 0 ? 1 : 0); j <= p; ++j)
                for (int k = (q > 0 ? 1 : 0); k <= q; ++k)
                    ahat += tab.stirling[p][j] * tab.stirling[q][k] * RZp[j + k] *
                            sd->Ghat[j + k];
            rem += tab.binom[d][p] * ahat;
        }
    }
    rem = rem * rho_pow * pow_ui(Ball(2), static_cast<unsigned long>(d)) / tab.factorial[d];
    return total + rem;
}

}  // namespace rg

// Certified upper bound on E(M) for the problem: multiplier * (sup |E|)^2.
// Base points are distributed across `threads` workers; the reduction order
// is fixed so results are schedule-independent.
inline Ball region_sup_bound(const RegionProblem& prob, const WhittakerEvaluator& ev,
                             const CombinatoricsTables& tab, const Ball& rho, int d, int subdiv,
                             int threads = 1) {
    size_t npts = prob.theta0s.size();
    std::vector<Ball> bounds(npts, Ball(0));
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= npts) break;
            Ball th0 = Ball::pi() * Ball(prob.theta0s[i].num) / Ball(prob.theta0s[i].den);
            bounds[i] = rg::point_bound(prob, ev, tab, th0, rho, d, subdiv);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    Ball sup = bounds[0];
    for (size_t i = 1; i < npts; ++i) sup = max_ball(sup, bounds[i]);
    if (sup.is_negative()) sup = Ball(0);
    return Ball(prob.multiplier) * sqr(sup);
}

// ---------- scalar pieces of the bound ----------

inline Ball n_tm(i64 m) {
    if (m < 1) throw std::invalid_argument("n_tm: m >= 1 required");
    if (m == 1) return Ball(1);
    i64 p = smallest_prime_factor(m);
    Ball e = Ball(7) / Ball(64);
    Ball pe = exp(e * log(Ball(p)));
    Ball factor = pe + Ball(1) / pe;
    Ball out = n_tm(m / p) * factor;
    if (m % (p * p) == 0) out += n_tm(m / (p * p));
    return out;
}

struct PsiProduct {
    Ball modulus;          // |prod (a(oo,m) - sum_{ab=m} psi(a/b) chi(b) (b/a)^{ir})|
    Ball modulus_variant;  // same with (a/b)^{ir}
};

inline PsiProduct psi_product(const PurportedForm& f, const PsiSet& psi, i64 m) {
    CBall am = f.infinity_table.at(m);
    CBall prod_main(Ball(1)), prod_var(Ball(1));
    for (const auto& ps : psi.members) {
        CBall eis_main, eis_var;
        for (i64 a = 1; a <= m; ++a) {
            if (m % a != 0) continue;
            i64 b = m / a;
            auto ea = ps.exponent(a), eb = ps.exponent(b);
            if (!ea || !eb) continue;  // psi vanishes
            CBall psiv = (*ea - *eb).to_cball();
            CBall chib = f.chi.value(b);
            Ball lg = log(Ball(b)) - log(Ball(a));  // ln(b/a)
            CBall pw_main = CBall::exp_i(f.r * lg);        // (b/a)^{ir}
            CBall pw_var = CBall::exp_i(-(f.r * lg));      // (a/b)^{ir}
            eis_main += psiv * chib * pw_main;
            eis_var += psiv * chib * pw_var;
        }
        prod_main = prod_main * (am - eis_main);
        prod_var = prod_var * (am - eis_var);
    }
    PsiProduct out{abs(prod_main), abs(prod_var)};
    if (out.modulus.contains_zero())
        throw domain_error(
            "cannot certify: purported form too close to the Eisenstein spectrum at m; choose a "
            "different m");
    return out;
}

// Distance from lambda to the nearest level-5 CM eigenvalue
// (n pi / (sqrt5 + 1))^2 + 1/4.
struct CmExclusion {
    i64 nearest_n = 0;
    Ball distance;
};

inline CmExclusion cm_exclusion_check(const Ball& lambda) {
    Ball base = Ball::pi() / (sqrt(Ball(5)) + Ball(1));
    Ball quarter = Ball(1) / Ball(4);
    CmExclusion out;
    bool first = true;
    for (i64 n = 0;; ++n) {
        Ball lcm = sqr(base * Ball(n)) + quarter;
        Ball dist = abs(lambda - lcm);
        if (first || dist.upper_double() < out.distance.upper_double()) {
            out.nearest_n = n;
            out.distance = dist;
            first = false;
        }
        if (lcm.lower_double() > lambda.upper_double() + 1.0) break;
    }
    return out;
}

// ---------- region construction ----------

struct RegionSet {
    std::vector<RegionProblem> problems;
    std::vector<size_t> zero_rep_indices;  // reps with E(M) = 0 by construction
};

namespace rg {

inline CuspExpansion truncated(const PurportedForm& f, const Cusp& cu) { return f.expansion_at(cu); }

inline std::vector<Rat> arc_angles(bool bprime, int n_samples) {
    std::vector<Rat> out;
    if (!bprime) {
        for (int j = 0; j <= n_samples; ++j)
            out.push_back(Rat::make(n_samples + j, 3 * n_samples));  // theta = pi (N+j)/(3N)
    } else {
        for (int j = 0; j <= 2 * n_samples; ++j)
            out.push_back(Rat::make(n_samples + 2 * j, 6 * n_samples));  // pi (N+2j)/(6N)
    }
    return out;
}

}  // namespace rg

inline RegionSet build_regions(const CosetSystem& sys, const PurportedForm& form, int n_samples) {
    i64 N = sys.N;
    RegionSet out;
    Mat S = Mat::S(), ST = S * Mat::T(1), STi = S * Mat::T(-1);

    if (N < 3) {
        if (N != 1)
            throw std::invalid_argument("level 2 region construction is not supported");
        // Level 1: A = {I}; the defect on B(delta) compares f_oo(z) with the
        // pullback branch f_oo(Sz).
        RegionProblem p;
        p.label = "I";
        p.rep_indices = {0};
        const Cusp& inf = sys.cusp_of(0);
        p.side1 = RegionSide{rg::truncated(form, inf), 0, 1, +1};
        p.side2 = RegionSide{rg::truncated(form, inf), 0, 1, -1};
        p.phase = CBall(Ball(1));
        p.t0 = Ball(0);
        p.theta0s = rg::arc_angles(false, n_samples);
        out.problems.push_back(std::move(p));
        return out;
    }

    for (size_t i = 0; i < sys.reps.size(); ++i) {
        const Mat& M1 = sys.reps[i];
        if (M1.is_identity() || M1 == S) continue;  // covered by the B' problem
        if (M1 == ST || M1 == STi) {
            out.zero_rep_indices.push_back(i);
            continue;
        }
        const Cusp& cu1 = sys.cusp_of(i);
        // duplicate-discard hypothesis f(chi) | N/v for this matrix's cusp
        i64 c_of = gcd_i(M1.c < 0 ? -M1.c : M1.c, N);
        if (c_of == 0) c_of = N;
        i64 v = gcd_i(c_of, N / c_of);
        std::vector<CBall> phase_variants;
        Companion comp = companion_matrix(N, sys, M1);
        auto we = form.chi.exponent(comp.omega_arg);
        if (!we) throw domain_error("companion phase argument not coprime to N");
        CBall base_phase = conj(we->to_cball());
        if ((N / v) % form.chi.conductor() == 0) {
            phase_variants.push_back(base_phase);
        } else {
            // Conservative fallback: the translation-duplicate sections may
            // carry an extra unitary twist chi(1 - aN/v); cover both it and
            // its conjugate and keep the worst bound downstream.
            auto te = form.chi.exponent(1 - M1.a * (N / v));
            if (!te)
                throw domain_error("duplicate-section twist not coprime to N; unsupported input");
            phase_variants.push_back(base_phase);
            phase_variants.push_back(base_phase * te->to_cball());
            phase_variants.push_back(base_phase * conj(te->to_cball()));
        }
        size_t m2_idx = *sys.find_rep(comp.M2);
        const Cusp& cu2 = sys.cusp_of(m2_idx);
        i64 tau1 = triangularize(cu1, M1);
        i64 tau2 = triangularize(cu2, comp.M2);
        int variant = 0;
        for (const CBall& ph : phase_variants) {
            RegionProblem p;
            p.label = M1.str() + (variant ? "#v" + std::to_string(variant) : "");
            p.rep_indices = {i};
            p.side1 = RegionSide{rg::truncated(form, cu1), tau1, cu1.width, +1};
            p.side2 = RegionSide{rg::truncated(form, cu2), tau2, cu2.width, -1};
            p.phase = ph;
            p.t0 = Ball(0);
            p.theta0s = rg::arc_angles(false, n_samples);
            out.problems.push_back(std::move(p));
            ++variant;
        }
    }

    // B'(delta) problem covering E(I) = E(S) = 3 sup^2 |f_oo(z) - f_0(Sz/N)|.
    {
        RegionProblem p;
        p.label = "B'";
        for (size_t i = 0; i < sys.reps.size(); ++i)
            if (sys.reps[i].is_identity() || sys.reps[i] == S) p.rep_indices.push_back(i);
        size_t inf_idx = 0, zero_idx = 0;
        bool have_zero = false;
        for (size_t i = 0; i < sys.cusps.size(); ++i) {
            if (sys.cusps[i].is_infinity()) inf_idx = i;
            if (sys.cusps[i].same_fraction(0, 1)) { zero_idx = i; have_zero = true; }
        }
        if (!have_zero) throw std::logic_error("cusp 0 missing from coset system");
        p.side1 = RegionSide{rg::truncated(form, sys.cusps[inf_idx]), 0, 1, +1};
        p.side2 = RegionSide{rg::truncated(form, sys.cusps[zero_idx]), 0, N, -1};
        p.phase = CBall(Ball(1));
        p.t0 = -log(Ball(3)) / Ball(2);
        p.theta0s = rg::arc_angles(true, n_samples);
        p.multiplier = 3;
        out.problems.push_back(std::move(p));
    }
    return out;
}

// ---------- certificate ----------

struct RegionResult {
    Mat matrix;
    Ball bound_sq;   // certified enclosure of the E(M) contribution
    bool exact_zero = false;
};

struct Certificate {
    i64 level = 1;
    std::string lambda_mid;
    i64 m = 2;
    int psi_count = 1;
    Ball delta;
    Ball D;
    Ball NTm;
    Ball psi_modulus;
    Ball psi_modulus_variant;
    bool psi_variants_differ = false;
    std::vector<RegionResult> regions;  // one entry per representative in A
    Ball maxE;
    bool cm_checked = false;
    i64 cm_nearest_n = 0;
    Ball cm_distance;
    Ball bound_ball;
    std::string bound;  // certified upper endpoint, decimal
    int taylor_degree = 0;
    int n_samples = 0;
    i64 M0 = 0;
    long precision_bits = 0;
    double seconds_total = 0, seconds_regions = 0, seconds_d = 0;
};

struct CertifyOptions {
    int taylor_degree = 45;
    int n_samples = 100;
    std::optional<i64> m_override;
    std::optional<i64> M0_override;  // truncate the coefficient tables
    std::optional<double> delta_cap;
    int threads = 1;
    int d_pieces = 768;
    int subdivisions = 0;  // sub-boxes per axis for the polynomial sup; 0 = auto
};

inline Certificate certify(const PurportedForm& input_form, const CertifyOptions& opt) {
    auto tstart = std::chrono::steady_clock::now();
    if (opt.taylor_degree < 2 || opt.n_samples < 4)
        throw std::invalid_argument("certify: need taylor degree >= 2 and >= 4 samples");
    PurportedForm form = input_form;
    if (opt.M0_override) {
        if (*opt.M0_override < 1 || *opt.M0_override > form.M0)
            throw std::invalid_argument("certify: M0 override out of range");
        form.M0 = *opt.M0_override;
        for (auto it = form.prime_coeffs.begin(); it != form.prime_coeffs.end();)
            it = it->first > form.M0 ? form.prime_coeffs.erase(it) : std::next(it);
        form.finalize();
    }
    ValidationReport rep = validate_conditions(form, 1e-12);
    if (!rep.passed) {
        std::string msg = "input validation failed:";
        for (const auto& c : rep.checks)
            if (!c.ok) msg += " " + c.name;
        throw std::invalid_argument(msg);
    }

    CosetSystem sys = coset_representatives(form.N, form.chi);
    WhittakerEvaluator ev(form.lambda, form.r);
    CombinatoricsTables tab(opt.taylor_degree);

    Certificate cert;
    cert.level = form.N;
    cert.lambda_mid = form.lambda.mid_string(40);
    cert.taylor_degree = opt.taylor_degree;
    cert.n_samples = opt.n_samples;
    cert.M0 = form.M0;
    cert.precision_bits = precision();

    // delta: below the corner imaginary parts and the sample coverage limit.
    Ball corner = corner_delta_limit(sys);
    double dcorner = 0.9 * corner.lower_double();
    double dcover = (Ball::pi() / Ball(6 * opt.n_samples)).lower_double();
    double ddelta = std::min(dcorner, dcover);
    if (opt.delta_cap) ddelta = std::min(ddelta, *opt.delta_cap);
    if (!(ddelta > 0)) throw domain_error("certify: no positive delta available");
    Ball delta = Ball::from_double(ddelta);
    cert.delta = delta;

    cert.m = opt.m_override ? *opt.m_override : select_m(form.N, form.chi);
    if (gcd_i(cert.m, form.N) != 1 || cert.m < 2)
        throw std::invalid_argument("certify: m override invalid");
    PsiSet psi = build_psi_set(form.N, form.chi, cert.m);
    cert.psi_count = static_cast<int>(psi.members.size());

    auto td0 = std::chrono::steady_clock::now();
    DParameters dp{form.N, omega(form.N), cert.m, cert.psi_count, delta};
    cert.D = compute_D(ev, dp, opt.d_pieces);
    cert.seconds_d = std::chrono::duration<double>(std::chrono::steady_clock::now() - td0).count();

    cert.NTm = n_tm(cert.m);
    PsiProduct pp = psi_product(form, psi, cert.m);
    cert.psi_modulus = pp.modulus;
    cert.psi_modulus_variant = pp.modulus_variant;
    {
        Ball diff = abs(pp.modulus - pp.modulus_variant);
        cert.psi_variants_differ =
            diff.lower_double() > 0 && !pp.modulus.contains(pp.modulus_variant);
    }

    // Region bounds. rho is the coverage half-spacing pi/(6 n_samples).
    auto tr0 = std::chrono::steady_clock::now();
    Ball rho = Ball::pi() / Ball(6 * opt.n_samples);
    RegionSet regions = build_regions(sys, form, opt.n_samples);
    std::vector<Ball> per_rep(sys.reps.size(), Ball(0));
    std::vector<bool> covered(sys.reps.size(), false), exact_zero(sys.reps.size(), false);
    for (size_t i : regions.zero_rep_indices) {
        covered[i] = true;
        exact_zero[i] = true;
    }
    int subdiv = opt.subdivisions > 0 ? opt.subdivisions : (opt.taylor_degree <= 30 ? 8 : 4);
    Ball maxE(0);
    for (const auto& prob : regions.problems) {
        Ball e = region_sup_bound(prob, ev, tab, rho, opt.taylor_degree, subdiv, opt.threads);
        for (size_t i : prob.rep_indices) {
            per_rep[i] = covered[i] && !exact_zero[i] ? max_ball(per_rep[i], e) : e;
            covered[i] = true;
            exact_zero[i] = false;
        }
        maxE = max_ball(maxE, e);
    }
    for (size_t i = 0; i < sys.reps.size(); ++i) {
        if (!covered[i]) throw std::logic_error("coset representative without a region bound");
        cert.regions.push_back({sys.reps[i], per_rep[i], exact_zero[i]});
    }
    cert.maxE = maxE;
    cert.seconds_regions =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tr0).count();

    if (form.N == 5) {
        CmExclusion cm = cm_exclusion_check(form.lambda);
        cert.cm_checked = true;
        cert.cm_nearest_n = cm.nearest_n;
        cert.cm_distance = cm.distance;
    }

    // 40 (N(T_m)+2)^{#Psi} sqrt(maxE) / (delta^{3/2} |Psi product| sqrt(D))
    Ball numer = Ball(40) * pow_ui(cert.NTm + Ball(2), static_cast<unsigned long>(cert.psi_count)) *
                 sqrt(max_ball(maxE, Ball(0)));
    Ball denom = sqrt(pow_ui(delta, 3)) * cert.psi_modulus * sqrt(cert.D);
    cert.bound_ball = numer / denom;
    cert.bound = cert.bound_ball.upper_string(20);
    cert.seconds_total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tstart).count();
    return cert;
}

}  // namespace mcert

#endif
