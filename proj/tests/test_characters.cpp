#include "thetacusp/characters.hpp"
#include "thetacusp/weil_local.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace thetacusp;

namespace {

// Every character modulo p^f with chi(g) = zeta_phi^k, g a primitive root mod p^f.
std::vector<DirichletCharacter> characters_mod_prime_power(long p, int f)
{
    long q = 1;
    for (int e = 0; e < f; ++e)
        q *= p;
    long phi = q / p * (p - 1), g = 0;
    for (long c = 2; c < q && g == 0; ++c) {
        if (c % p == 0)
            continue;
        long o = 1, x = c;
        while (x != 1) {
            x = x * c % q;
            ++o;
        }
        if (o == phi)
            g = c;
    }
    std::vector<DirichletCharacter> out;
    for (long k = 0; k < phi; ++k) {
        std::vector<long> e(static_cast<std::size_t>(q), -1);
        long x = 1;
        for (long t = 0; t < phi; ++t) {
            e[static_cast<std::size_t>(x)] = k * t % phi;
            x = x * g % q;
        }
        out.push_back(DirichletCharacter::from_exponents(q, phi, e));
    }
    return out;
}

}  // namespace

TEST(Characters, Chi12Values)
{
    auto chi2 = char_chi2(), chi3 = char_chi3(), chi = char_chi12();
    EXPECT_EQ(chi2(3L), Cyclo(-1));
    EXPECT_EQ(chi(5L), Cyclo(-1));
    EXPECT_EQ(chi(6L), Cyclo(0));
    EXPECT_EQ(chi(1L), Cyclo(1));
    EXPECT_EQ(chi(7L), Cyclo(-1));
    EXPECT_EQ(chi(11L), Cyclo(1));
    EXPECT_EQ(chi.modulus(), 12);
    EXPECT_TRUE(chi.is_even());
    EXPECT_TRUE(chi.is_primitive());
    EXPECT_FALSE(chi2.is_even());
    EXPECT_FALSE(chi3.is_even());
}

TEST(Characters, PsiJ)
{
    auto psi1 = psi_j(5, 2, 1);
    EXPECT_EQ(psi1(2L), Cyclo(-1));
    EXPECT_EQ(psi1(4L), Cyclo(1));
    EXPECT_EQ(psi1(5L), Cyclo(0));
    EXPECT_EQ(psi_j(5, 2, 0)(3L), Cyclo(1));
    EXPECT_EQ(least_primitive_root(5), 2);
    EXPECT_EQ(least_primitive_root(7), 3);
    for (long p : {5L, 7L, 11L, 13L})
        for (long j = 0; j <= (p - 3) / 2; ++j)
            EXPECT_EQ(psi_j(p, j)(-1L), Cyclo(1)) << p << " " << j;
    EXPECT_THROW(psi_j(7, 2, 1), std::invalid_argument);
}

TEST(Characters, PsiJCoversEvenCharacters)
{
    for (long p : {5L, 7L, 11L, 13L}) {
        auto all = characters_mod_prime_power(p, 1);
        std::vector<DirichletCharacter> even;
        for (auto& c : all)
            if (c.is_even())
                even.push_back(c);
        std::vector<DirichletCharacter> psis;
        for (long j = 0; j <= (p - 3) / 2; ++j)
            psis.push_back(psi_j(p, j));
        ASSERT_EQ(even.size(), psis.size());
        for (auto& e : even) {
            int hits = 0;
            for (auto& s : psis)
                hits += e == s;
            EXPECT_EQ(hits, 1);
        }
    }
}

TEST(Characters, MultiplicativeAndPeriodic)
{
    std::mt19937 rng(12);
    std::uniform_int_distribution<long> n(-500, 500);
    std::vector<DirichletCharacter> chars{char_chi12(), psi_j(5, 1), psi_j(7, 2), char_chi12() * psi_j(11, 3)};
    for (auto& c : characters_mod_prime_power(5, 2))
        chars.push_back(c);
    for (auto& c : chars)
        for (int k = 0; k < 200; ++k) {
            long a = n(rng), b = n(rng);
            ASSERT_EQ(c(a * b), c(a) * c(b));
            ASSERT_EQ(c(a + c.modulus() * 3), c(a));
        }
}

TEST(Characters, LocalComponents)
{
    auto comps = local_components(char_chi12());
    ASSERT_EQ(comps.size(), 2u);
    EXPECT_EQ(comps[0].first, 2);
    EXPECT_EQ(comps[0].second, char_chi2());
    EXPECT_EQ(comps[1].first, 3);
    EXPECT_EQ(comps[1].second, char_chi3());
    auto c5 = local_components(psi_j(5, 1));
    ASSERT_EQ(c5.size(), 1u);
    EXPECT_EQ(c5[0].first, 5);
    EXPECT_TRUE(local_components(DirichletCharacter::principal(1)).empty());
    // the product of the components gives back the character
    auto chi = char_chi12() * psi_j(7, 1);
    auto parts = local_components(chi);
    DirichletCharacter prod = DirichletCharacter::principal(1);
    for (auto& [p, c] : parts)
        prod = prod * c;
    EXPECT_EQ(prod, chi);
}

TEST(Characters, GaussSums)
{
    Cyclo i = imaginary_unit();
    EXPECT_EQ(tau(char_chi3(), 3), -i * sqrt_of_prime(3));
    EXPECT_EQ(tau(psi_j(5, 1), 5), sqrt_of_prime(5));
    EXPECT_THROW(tau(char_chi12(), 3), std::invalid_argument);
}

TEST(Characters, GaussSumMagnitudeAndDuality)
{
    for (auto [p, f] : std::vector<std::pair<long, int>>{{3, 1}, {5, 1}, {7, 1}, {11, 1}, {3, 2}, {5, 2}, {7, 2}, {3, 3}}) {
        long q = 1;
        for (int e = 0; e < f; ++e)
            q *= p;
        int primitive = 0;
        for (auto& mu : characters_mod_prime_power(p, f)) {
            if (!mu.is_primitive())
                continue;
            ++primitive;
            Cyclo t = tau(mu, p);
            EXPECT_EQ(t * t.conj(), Cyclo(q));
            EXPECT_EQ(t * tau(mu.conj(), p), mu(-1L) * Cyclo(q));
            // the flip scalar is a root of unity
            Cyclo s = flip_on_phi_mu(p, mu).scalar;
            EXPECT_EQ(s * s.conj(), Cyclo(1));
        }
        EXPECT_GT(primitive, 0);
    }
}

TEST(Characters, Conductor)
{
    EXPECT_EQ(char_chi12().conductor(), 12);
    EXPECT_EQ((char_chi3() * DirichletCharacter::principal(4)).conductor(), 3);
    EXPECT_FALSE((char_chi3() * DirichletCharacter::principal(4)).is_primitive());
}
