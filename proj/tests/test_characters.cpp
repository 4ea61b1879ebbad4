// Dirichlet characters: Conrey labels, value tables, conductors, parity,
// CRT restriction, and the auxiliary m / Psi-set selection.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mcert/characters.hpp>

using namespace mcert;

TEST_CASE("rational exponents normalize into [0,1)") {
    CHECK(Rat::make(5, 4) == Rat::make(1, 4));
    CHECK(Rat::make(-1, 4) == Rat::make(3, 4));
    CHECK(Rat::make(2, 4) == Rat::make(1, 2));
    CHECK(Rat::make(0, 7) == Rat::make(0, 1));
    CHECK((Rat::make(1, 3) + Rat::make(1, 3) + Rat::make(1, 3)).is_zero());
    CHECK((Rat::make(1, 4) - Rat::make(1, 2)) == Rat::make(3, 4));
    CHECK((Rat::make(1, 6) * 3) == Rat::make(1, 2));
    CHECK_THROWS_AS(Rat::make(1, 0), std::invalid_argument);
}

TEST_CASE("trivial characters") {
    auto one = DirichletCharacter::conrey(1, 1);
    CHECK(one.modulus() == 1);
    CHECK(one.conductor() == 1);
    CHECK(one.is_trivial());
    CHECK(one.is_even());
    CHECK(one.real_value(7) == 1);

    auto triv8 = DirichletCharacter::conrey(8, 1);
    CHECK(triv8.conductor() == 1);
    CHECK(triv8.real_value(3) == 1);
    CHECK(triv8.real_value(4) == 0);  // gcd(4,8) > 1
}

TEST_CASE("the quadratic character mod 5") {
    auto chi = DirichletCharacter::conrey(5, 4);
    CHECK(chi.modulus() == 5);
    CHECK(chi.conductor() == 5);
    CHECK(chi.conrey_index() == 4);
    CHECK(chi.is_real());
    CHECK(chi.is_even());
    CHECK(!chi.is_trivial());
    // Legendre symbol mod 5: residues {1,4}, nonresidues {2,3}
    CHECK(chi.real_value(1) == 1);
    CHECK(chi.real_value(2) == -1);
    CHECK(chi.real_value(3) == -1);
    CHECK(chi.real_value(4) == 1);
    CHECK(chi.real_value(5) == 0);
    CHECK(chi.real_value(7) == -1);  // periodicity
    CHECK(chi.value(2).re.contains(Ball(-1)));
    CHECK(chi.value(2).im.contains_zero());
}

TEST_CASE("an order-4 character mod 5") {
    auto chi = DirichletCharacter::conrey(5, 2);
    CHECK(!chi.is_real());
    CHECK(!chi.is_even());  // chi(-1) = chi(4) = -1
    CHECK_THROWS_AS(chi.real_value(2), std::logic_error);
    // chi(2)^4 = chi(16) = chi(1) = 1 and chi(2)^2 = chi(4) = -1
    Rat e2 = *chi.exponent(2);
    CHECK(e2.den == 4);
    CHECK((e2 * 2) == Rat::make(1, 2));
}

TEST_CASE("characters are multiplicative in the argument") {
    auto chi = DirichletCharacter::conrey(7, 3);
    for (i64 a = 1; a <= 6; ++a)
        for (i64 b = 1; b <= 6; ++b) {
            CBall lhs = chi.value(a * b);
            CBall rhs = chi.value(a) * chi.value(b);
            CHECK((lhs - rhs).contains_zero());
        }
}

TEST_CASE("value tables round-trip against Conrey labels") {
    auto chi = DirichletCharacter::conrey(5, 4);
    auto tab = DirichletCharacter::from_table(
        5, {{1, 0, 1}, {2, 1, 2}, {3, 1, 2}, {4, 0, 1}});
    CHECK(tab == chi);
    CHECK(tab.conrey_index() == 4);
    // non-multiplicative table rejected
    CHECK_THROWS_AS(DirichletCharacter::from_table(
                        5, {{1, 0, 1}, {2, 1, 2}, {3, 0, 1}, {4, 0, 1}}),
                    std::invalid_argument);
    // incomplete table rejected
    CHECK_THROWS_AS(DirichletCharacter::from_table(5, {{1, 0, 1}}),
                    std::invalid_argument);
    // residue not coprime rejected
    CHECK_THROWS_AS(DirichletCharacter::from_table(4, {{2, 0, 1}}),
                    std::invalid_argument);
}

TEST_CASE("imprimitive characters have proper conductors") {
    // chi mod 15 induced by the quadratic character mod 3: q = 1 mod 5, 2 mod 3
    auto chi = DirichletCharacter::conrey(15, 11);
    CHECK(chi.conductor() == 3);
    CHECK(chi.real_value(2) == -1);
    CHECK(chi.real_value(5) == 0);
    CHECK(!chi.is_even());
}

TEST_CASE("conjugation and products") {
    auto chi = DirichletCharacter::conrey(5, 2);
    auto prod = chi * chi.conjugate();
    CHECK(prod.is_trivial());
    CHECK(prod.conductor() == 1);
    auto sq = chi * chi;
    CHECK(sq == DirichletCharacter::conrey(5, 4));
    CHECK_THROWS_AS(chi * DirichletCharacter::conrey(7, 1), std::invalid_argument);
}

TEST_CASE("CRT decomposition across Hall divisors") {
    auto chi = DirichletCharacter::conrey(15, 2);
    auto [chi3, chi5] = chi.crt_decompose(3);
    CHECK(chi3.modulus() == 3);
    CHECK(chi5.modulus() == 5);
    // chi(n) = chi3(n) chi5(n) for all n coprime to 15
    for (i64 n = 1; n <= 15; ++n) {
        if (gcd_i(n, 15) != 1) continue;
        CBall lhs = chi.value(n);
        CBall rhs = chi3.value(n) * chi5.value(n);
        CHECK((lhs - rhs).contains_zero());
    }
    CHECK_THROWS_AS(chi.crt_decompose(4), std::invalid_argument);
    auto chi12 = DirichletCharacter::conrey(12, 5);
    CHECK_THROWS_AS(chi12.crt_decompose(2), std::invalid_argument);  // gcd(2,6)=2
}

TEST_CASE("matrix values live on the lower-right entry") {
    auto chi = DirichletCharacter::conrey(5, 4);
    // [[1,0],[5,1]] in Gamma0(5), chi(1) = 1
    CHECK(chi.matrix_exponent(1, 0, 5, 1)->is_zero());
    // [[2,1],[5,3]] in Gamma0(5), chi(3) = -1
    CHECK(*chi.matrix_exponent(2, 1, 5, 3) == Rat::make(1, 2));
    CHECK_THROWS_AS(chi.matrix_exponent(1, 1, 1, 1), std::invalid_argument);  // det 0
    CHECK_THROWS_AS(chi.matrix_exponent(1, 0, 1, 1), std::invalid_argument);  // c not 0 mod 5
}

TEST_CASE("character group sizes and orthogonality") {
    for (i64 N : {1, 2, 5, 8, 12, 15}) {
        auto all = DirichletCharacter::all_characters(N);
        CHECK(static_cast<i64>(all.size()) == (N == 1 ? 1 : euler_phi(N)));
    }
    // column orthogonality at a != 1 mod N
    auto all = DirichletCharacter::all_characters(12);
    for (i64 a : {5, 7, 11}) {
        CBall s;
        for (const auto& chi : all) s += chi.value(a);
        CHECK(s.contains_zero());
    }
}

TEST_CASE("auxiliary Hecke index selection") {
    CHECK(select_m(5, DirichletCharacter::conrey(5, 4)) == 2);
    CHECK(select_m(1, DirichletCharacter::conrey(1, 1)) == 2);
    // N = 9 trivial: m = 1 mod 3 and coprime to 3 -> 4
    CHECK(select_m(9, DirichletCharacter::conrey(9, 1)) == 4);
    // N = 8 trivial: m odd and m = 1 mod 2 -> 3
    CHECK(select_m(8, DirichletCharacter::conrey(8, 1)) == 3);
    // N = 9 with a primitive character: conductor 9 -> k = min(1, 0) = 0 -> m = 2
    CHECK(select_m(9, DirichletCharacter::conrey(9, 2)) == 2);
}

TEST_CASE("Psi set for the shipped level") {
    auto chi = DirichletCharacter::conrey(5, 4);
    PsiSet psi = build_psi_set(5, chi, 2);
    REQUIRE(psi.members.size() == 2);
    // trivial first (conductor 1), then the quadratic character itself
    CHECK(psi.members[0].is_trivial());
    CHECK(psi.members[1] == chi);
    CHECK(psi.values_at_m[0].is_zero());
    CHECK(psi.values_at_m[1] == Rat::make(1, 2));
    CHECK_THROWS_AS(build_psi_set(5, chi, 5), std::invalid_argument);  // m not coprime
}

TEST_CASE("Psi values at m are pairwise distinct for a range of levels") {
    for (i64 N : {1, 3, 5, 7, 9, 12, 15}) {
        for (const auto& chi : DirichletCharacter::all_characters(N)) {
            if (!chi.is_even()) continue;
            i64 m = select_m(N, chi);
            PsiSet psi = build_psi_set(N, chi, m);
            CHECK(!psi.members.empty());
            for (size_t i = 0; i < psi.values_at_m.size(); ++i)
                for (size_t j = i + 1; j < psi.values_at_m.size(); ++j)
                    CHECK(!(psi.values_at_m[i] == psi.values_at_m[j]));
            // eligibility: f(psi) f(chi psibar) | N
            for (const auto& p : psi.members) {
                i64 f1 = p.conductor();
                i64 f2 = (chi * p.conjugate()).conductor();
                CHECK(N % (f1 * f2) == 0);
            }
        }
    }
}
