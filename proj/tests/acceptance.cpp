// Acceptance suite: one pass/fail line per criterion.
//
//  1. certification of the shipped level-5 form at full and smoke parameters
//  2. coset representative suite for all levels 1..50
//  3. 20x20 Whittaker grid against frozen values plus ODE residuals
//  4. Hecke extension reproduces a(oo, 4)
//  5. expansion partials against 4th-order finite differences
//  6. bound sensitivity to a coefficient perturbation
//  7. positivity and delta-monotonicity of the D-integral
//
// Usage: acceptance <form.json>

#include <mcert/certifier.hpp>
#include <mcert/io.hpp>

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

using namespace mcert;

namespace {

struct Result {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---------- criterion 2: coset suite for 1 <= N <= 50 ----------

Result coset_suite() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(20260823);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<i64> shift(-3, 3);
    std::vector<Mat> pool;
    pool.reserve(10000);
    for (int i = 0; i < 10000; ++i) {
        Mat g;
        for (int w = 0; w < 12; ++w) g = g * (coin(rng) ? Mat::S() : Mat::T(shift(rng)));
        pool.push_back(g);
    }
    for (i64 N = 1; N <= 50; ++N) {
        auto sys = coset_representatives(N, DirichletCharacter::conrey(N, 1));
        i64 index = N;
        for (const auto& pp : factorize(N)) index = index / pp.p * (pp.p + 1);
        if (static_cast<i64>(sys.reps.size()) != index)
            return {false, "N=" + std::to_string(N) + ": |A|=" + std::to_string(sys.reps.size()) +
                               " expected " + std::to_string(index)};
        for (size_t i = 0; i < sys.reps.size(); ++i)
            for (size_t j = i + 1; j < sys.reps.size(); ++j) {
                Mat q = sys.reps[i] * sys.reps[j].inverse();
                if (q.in_gamma0(N) || q.neg().in_gamma0(N))
                    return {false, "N=" + std::to_string(N) + ": representatives " +
                                       std::to_string(i) + "," + std::to_string(j) +
                                       " share a coset"};
            }
        for (const Mat& g : pool)
            if (!sys.coset_of(g))
                return {false, "N=" + std::to_string(N) + ": matrix " + g.str() +
                                   " not covered by any coset"};
        for (size_t i = 0; i < sys.cusps.size(); ++i)
            for (size_t j = i + 1; j < sys.cusps.size(); ++j)
                if (cusps_equivalent(N, sys.cusps[i].num, sys.cusps[i].den, sys.cusps[j].num,
                                     sys.cusps[j].den))
                    return {false, "N=" + std::to_string(N) + ": cusps " + sys.cusps[i].str() +
                                       " and " + sys.cusps[j].str() + " are equivalent"};
    }
    double el = seconds_since(t0);
    if (el >= 60.0) return {false, "suite took " + fmt(el) + "s (limit 60s)"};
    return {true, "levels 1..50, 10000 random SL2 matrices, " + fmt(el) + "s"};
}

// ---------- criterion 3: Whittaker grid ----------

Result whittaker_grid() {
    auto t0 = std::chrono::steady_clock::now();
    int checked = 0;
    for (int i = 0; i < kGridN; ++i) {
        Ball r = Ball(15) * Ball(i) / Ball(19);
        Ball lambda = sqr(r) + Ball(1) / Ball(4);
        WhittakerEvaluator ev(lambda, r);
        for (int j = 0; j < kGridN; ++j) {
            Ball y = Ball::from_string("0.1") + Ball::from_string("29.9") * Ball(j) / Ball(19);
            Ball oracle = Ball::from_string(kGridW[i][j], 1e-33);
            auto d = ev.derivatives(y, 2);
            if (!d[0].contains(oracle))
                return {false, "grid (" + std::to_string(i) + "," + std::to_string(j) +
                                   "): oracle outside the returned ball " + d[0].str()};
            Ball res = d[2] - (Ball(1) - lambda / sqr(y)) * d[0];
            if (!res.contains_zero())
                return {false, "grid (" + std::to_string(i) + "," + std::to_string(j) +
                                   "): ODE residual excludes 0: " + res.str()};
            ++checked;
        }
    }
    double el = seconds_since(t0);
    if (el >= 120.0) return {false, "grid took " + fmt(el) + "s (limit 120s)"};
    return {true, std::to_string(checked) + " cells enclosed, ODE residuals contain 0, " +
                      fmt(el) + "s"};
}

// ---------- criterion 4: a(oo, 4) ----------

Result hecke_a4(const PurportedForm& f) {
    CBall a4 = f.infinity_table.at(4);
    Ball target = Ball::from_string("-0.481481902375692542713");
    double dre = (a4.re - target).abs_upper_double();
    double dim = a4.im.abs_upper_double();
    if (dre <= 1e-18 && dim <= 1e-18)
        return {true, "a(oo,4) matches to " + fmt(std::max(dre, dim))};
    return {false, "a(oo,4) off by re " + fmt(dre) + ", im " + fmt(dim)};
}

// ---------- criterion 5: partials vs finite differences ----------

Result partials_fd(const PurportedForm& f) {
    auto chi = f.chi;
    CuspExpansion exp_inf = f.expansion_at(cusp_data(f.N, chi, 1, 0));
    WhittakerEvaluator ev(f.lambda, f.r);
    ExpansionEvaluator fe(exp_inf, ev);

    // 4th-order central difference weights on offsets -3..3, scaled by den.
    struct Stencil {
        i64 w[7];
        i64 den;
    };
    const Stencil st[4] = {
        {{0, 0, 0, 1, 0, 0, 0}, 1},        // value
        {{0, 1, -8, 0, 8, -1, 0}, 12},     // f'
        {{0, -1, 16, -30, 16, -1, 0}, 12}, // f''
        {{1, -8, 13, 0, -13, 8, -1}, 8},   // f'''
    };

    Ball h = Ball(1) / Ball(128);  // exact binary step
    Ball h4 = pow_ui(h, 4);
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> ux(-0.4, 0.4), uy(0.8, 1.6);

    for (int pt = 0; pt < 20; ++pt) {
        Ball x = Ball::from_double(ux(rng));
        Ball y = Ball::from_double(uy(rng));
        CBall grid[7][7];
        for (int i = -3; i <= 3; ++i)
            for (int j = -3; j <= 3; ++j)
                grid[i + 3][j + 3] = fe.evaluate(x + h * Ball(i), y + h * Ball(j));
        for (int k = 0; k <= 3; ++k)
            for (int l = 0; l <= 3; ++l) {
                CBall fd;
                for (int i = 0; i < 7; ++i) {
                    if (st[k].w[i] == 0) continue;
                    CBall row;
                    for (int j = 0; j < 7; ++j) {
                        if (st[l].w[j] == 0) continue;
                        row += Ball(st[l].w[j]) * grid[i][j];
                    }
                    fd += Ball(st[k].w[i]) * row;
                }
                fd = fd / (Ball(st[k].den) * Ball(st[l].den));
                for (int q = 0; q < k + l; ++q) fd = fd / h;
                CBall p = fe.evaluate_partials(x, y, k, l);
                // leading truncation error ~ h^4 (c1 d^{k+4,l} + c2 d^{k,l+4}),
                // with stencil constants well below 1; allow a safety factor 4
                Ball a_hi = abs(fe.evaluate_partials(x, y, k + 4, l));
                Ball b_hi = abs(fe.evaluate_partials(x, y, k, l + 4));
                double tol = (Ball(4) * h4 * (a_hi + b_hi)).upper_double() + 1e-25;
                Ball diff = abs(fd - p);
                if (diff.lower_double() > tol)
                    return {false, "point " + std::to_string(pt) + " order (" + std::to_string(k) +
                                       "," + std::to_string(l) + "): |fd - partial| >= " +
                                       fmt(diff.lower_double()) + " > tol " + fmt(tol)};
            }
    }
    return {true, "20 points, all orders k,l <= 3 agree to O(h^4)"};
}

// ---------- criteria 1 and 6: certification runs ----------

Certificate run_certify(const PurportedForm& f, int d, int samples, std::optional<i64> M0) {
    CertifyOptions opt;
    opt.taylor_degree = d;
    opt.n_samples = samples;
    opt.M0_override = M0;
    return certify(f, opt);
}

Result sensitivity(const PurportedForm& f) {
    Certificate base = run_certify(f, 12, 12, 12);
    PurportedForm g = f;
    g.prime_coeffs[3] = g.prime_coeffs[3] + CBall(Ball::from_string("0.001"));
    g.finalize();
    Certificate pert = run_certify(g, 12, 12, 12);
    double b0 = base.bound_ball.upper_double();
    double b1 = pert.bound_ball.upper_double();
    if (b1 > b0)
        return {true, "perturbed bound " + fmt(b1) + " > unperturbed " + fmt(b0)};
    return {false, "perturbed bound " + fmt(b1) + " not above unperturbed " + fmt(b0)};
}

Result d_integral(const PurportedForm& f) {
    WhittakerEvaluator ev(f.lambda, f.r);
    // flagship delta: min(0.9 * corner margin, pi / (6 * 100))
    CosetSystem sys = coset_representatives(f.N, f.chi);
    double dd = std::min(0.9 * corner_delta_limit(sys).lower_double(),
                         (Ball::pi() / Ball(600)).lower_double());
    DParameters p{f.N, omega(f.N), 2, 2, Ball::from_double(dd)};
    Ball Dflag;
    try {
        Dflag = compute_D(ev, p);
    } catch (const domain_error& e) {
        return {false, std::string("D at flagship delta not positive: ") + e.what()};
    }
    if (!Dflag.is_positive()) return {false, "D at flagship delta not certified positive"};

    const char* deltas[3] = {"0.005", "0.01", "0.02"};
    Ball D[3];
    for (int i = 0; i < 3; ++i) {
        p.delta = Ball::from_string(deltas[i]);
        D[i] = compute_D(ev, p);
    }
    for (int i = 0; i + 1 < 3; ++i)
        if (D[i].upper_double() < D[i + 1].lower_double())
            return {false, std::string("D increased from delta ") + deltas[i] + " to " +
                               deltas[i + 1]};
    // require the decrease to be certified, not merely non-contradicted
    for (int i = 0; i + 1 < 3; ++i)
        if (!(D[i].lower_double() > D[i + 1].upper_double()))
            return {false, std::string("D not certifiably nonincreasing at delta ") + deltas[i]};
    return {true, "D(flagship) in [" + Dflag.lower_string(6) + ", " + Dflag.upper_string(6) +
                      "], nonincreasing over {0.005, 0.01, 0.02}"};
}

Result flagship_and_smoke(const PurportedForm& f) {
    auto t0 = std::chrono::steady_clock::now();
    Certificate smoke = run_certify(f, 20, 40, 25);
    double smoke_s = seconds_since(t0);
    double smoke_bound = smoke.bound_ball.upper_double();
    if (!smoke.bound_ball.is_finite() || !(smoke_bound <= 1.0))
        return {false, "smoke bound " + fmt(smoke_bound) + " exceeds 1"};
    if (smoke_s >= 300.0)
        return {false, "smoke run took " + fmt(smoke_s) + "s (limit 300s)"};

    std::fprintf(stderr, "  smoke: bound %s in %ss; starting full run\n",
                 fmt(smoke_bound).c_str(), fmt(smoke_s).c_str());
    auto t1 = std::chrono::steady_clock::now();
    Certificate full = run_certify(f, 45, 100, std::nullopt);
    double full_s = seconds_since(t1);
    double full_bound = full.bound_ball.upper_double();
    if (!full.bound_ball.is_finite() || !(full_bound <= 1e-2))
        return {false, "full bound " + fmt(full_bound) + " exceeds 1e-2"};
    return {true, "full bound " + fmt(full_bound) + " (<= 1e-2) in " + fmt(full_s) +
                      "s; smoke bound " + fmt(smoke_bound) + " (<= 1) in " + fmt(smoke_s) + "s"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <form.json>\n");
        return 2;
    }
    set_precision(128);
    PurportedForm form;
    try {
        form = load_form(argv[1]);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "cannot load %s: %s\n", argv[1], e.what());
        return 2;
    }

    Result res[8];
    auto timed = [&](int idx, const char* name, auto&& fn) {
        std::fprintf(stderr, "running criterion %d (%s)...\n", idx, name);
        try {
            res[idx] = fn();
        } catch (const std::exception& e) {
            res[idx] = {false, std::string("exception: ") + e.what()};
        }
    };

    timed(2, "coset suite", [] { return coset_suite(); });
    timed(3, "Whittaker grid", [] { return whittaker_grid(); });
    timed(4, "Hecke extension", [&] { return hecke_a4(form); });
    timed(5, "partials vs finite differences", [&] { return partials_fd(form); });
    timed(6, "bound sensitivity", [&] { return sensitivity(form); });
    timed(7, "D-integral", [&] { return d_integral(form); });
    timed(1, "certification", [&] { return flagship_and_smoke(form); });

    int failures = 0;
    for (int i = 1; i <= 7; ++i) {
        std::printf("criterion %d: %s - %s\n", i, res[i].pass ? "PASS" : "FAIL",
                    res[i].detail.c_str());
        if (!res[i].pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
