#include "thetacusp/cyclo_matrix.hpp"
#include "thetacusp/cyclotomic.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace thetacusp;

namespace {

// Random element of Q(zeta_N) with small coefficients.
Cyclo random_cyclo(std::mt19937& rng, std::uint64_t N)
{
    std::uniform_int_distribution<int> c(-4, 4), d(1, 3);
    std::vector<Rational> v(N);
    for (auto& x : v)
        x = Rational(c(rng), d(rng));
    return Cyclo::from_coefficients(N, v);
}

constexpr double kEps = 1e-10;

}  // namespace

TEST(Cyclo, RootsOfUnity)
{
    EXPECT_EQ(root_of_unity(4, 1), imaginary_unit());
    EXPECT_EQ(root_of_unity(8, 1).pow(8), Cyclo(1));
    EXPECT_EQ(root_of_unity(3, 1) + root_of_unity(3, 2), Cyclo(-1));
    EXPECT_EQ(root_of_unity(8, 3).inverse(), root_of_unity(8, 5));
    EXPECT_EQ(root_of_unity(5, 1).conj(), root_of_unity(5, 4));
    EXPECT_EQ(root_of_unity(12, 3), imaginary_unit());
    for (long k = -30; k <= 30; ++k)
        EXPECT_EQ(root_of_unity(15, k), root_of_unity(15, k + 15 * 7));
}

TEST(Cyclo, EpAndEinf)
{
    EXPECT_EQ(e_p(Rational(1, 5), 5), root_of_unity(5, -1));
    EXPECT_EQ(e_p(Rational(2), 5), Cyclo(1));
    EXPECT_EQ(e_p(Rational(1, 2), 2), Cyclo(-1));
    EXPECT_EQ(e_p(Rational(1, 3), 5), Cyclo(1));
    EXPECT_EQ(e_inf_rat(Rational(1, 4)), imaginary_unit());
}

TEST(Cyclo, SquareRoots)
{
    EXPECT_EQ(sqrt_of_prime(5) * sqrt_of_prime(5), Cyclo(5));
    EXPECT_EQ(sqrt_of_prime(3) * sqrt_of_prime(3), Cyclo(3));
    EXPECT_EQ(sqrt_of_prime(2) * sqrt_of_prime(2), Cyclo(2));
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        auto z = sqrt_of_prime(p).embed();
        EXPECT_NEAR(z.real(), std::sqrt(double(p)), 1e-12);
        EXPECT_NEAR(z.imag(), 0.0, 1e-12);
    }
    EXPECT_NEAR(sqrt_of_prime(5).embed().real(), 2.2360679774997896, 1e-12);
    EXPECT_EQ(sqrt_rational(Rational(12, 5)) * sqrt_rational(Rational(12, 5)), Cyclo(Rational(12, 5)));
    EXPECT_NEAR(sqrt_rational(Rational(6)).embed().real(), std::sqrt(6.0), 1e-12);
}

TEST(Cyclo, EpsD)
{
    EXPECT_EQ(eps_d(Integer(1)), Cyclo(1));
    EXPECT_EQ(eps_d(Integer(3)), imaginary_unit());
    EXPECT_EQ(eps_d(Integer(-1)), imaginary_unit());
    EXPECT_EQ(eps_d(Integer(-3)), Cyclo(1));
    EXPECT_THROW(eps_d(Integer(2)), std::invalid_argument);
}

TEST(Cyclo, Embedding)
{
    EXPECT_NEAR(std::abs(imaginary_unit().embed() - std::complex<double>(0, 1)), 0, 1e-15);
    EXPECT_NEAR(std::abs(Cyclo(-1).embed() - std::complex<double>(-1, 0)), 0, 1e-15);
    auto z = root_of_unity(8, 1).embed();
    EXPECT_NEAR(z.real(), 0.7071067811865476, 1e-14);
    EXPECT_NEAR(z.imag(), 0.7071067811865476, 1e-14);
}

TEST(Cyclo, EmbedIsRingHomomorphism)
{
    std::mt19937 rng(1);
    const std::uint64_t orders[] = {3, 4, 5, 8, 12, 15, 20, 24, 40, 60};
    for (int k = 0; k < 200; ++k) {
        Cyclo x = random_cyclo(rng, orders[k % 10]), y = random_cyclo(rng, orders[(k * 7 + 3) % 10]);
        EXPECT_LT(std::abs((x * y).embed() - x.embed() * y.embed()), kEps);
        EXPECT_LT(std::abs((x + y).embed() - (x.embed() + y.embed())), kEps);
        EXPECT_LT(std::abs((x - y).embed() - (x.embed() - y.embed())), kEps);
        if (!y.is_zero()) {
            EXPECT_LT(std::abs((x / y).embed() - x.embed() / y.embed()), 1e-8 * (1 + std::abs(x.embed() / y.embed())));
        }
    }
}

TEST(Cyclo, Conjugation)
{
    std::mt19937 rng(2);
    for (int k = 0; k < 100; ++k) {
        Cyclo x = random_cyclo(rng, 24);
        EXPECT_EQ(x.conj().conj(), x);
        EXPECT_LT(std::abs(x.conj().embed() - std::conj(x.embed())), kEps);
        EXPECT_TRUE((x * x.conj()).conj() == x * x.conj());
    }
}

TEST(Cyclo, PromotionEquality)
{
    std::mt19937 rng(4);
    for (int k = 0; k < 100; ++k) {
        Cyclo x = random_cyclo(rng, 5);
        // the same value reached through different orders
        Cyclo y = (x * root_of_unity(8, 1)) * root_of_unity(8, 7);
        Cyclo z = (x + root_of_unity(12, 1)) - root_of_unity(12, 1);
        EXPECT_EQ(x, x);
        EXPECT_EQ(x, y);
        EXPECT_EQ(y, x);
        EXPECT_EQ(y, z);
        EXPECT_EQ(x, z);
        EXPECT_LE(y.order(), 40u);
    }
}

TEST(Cyclo, InverseAndNormalization)
{
    std::mt19937 rng(6);
    for (int k = 0; k < 50; ++k) {
        Cyclo x = random_cyclo(rng, 20);
        if (x.is_zero())
            continue;
        EXPECT_EQ(x * x.inverse(), Cyclo(1));
    }
    // i * i is rational again
    Cyclo m = imaginary_unit() * imaginary_unit();
    EXPECT_TRUE(m.is_rational());
    EXPECT_EQ(m.to_rational(), Rational(-1));
    // zeta_10 lives in Q(zeta_5)
    EXPECT_EQ(root_of_unity(10, 1).order(), 5u);
    EXPECT_THROW(Cyclo(0).inverse(), std::domain_error);
}

TEST(Cyclo, OrderCap)
{
    EXPECT_THROW(root_of_unity((1LL << 21) + 1, 1), std::exception);
}

TEST(CycloMatrix, InverseAndConjTranspose)
{
    CycloMatrix m(2, 2);
    m(0, 0) = Cyclo(1);
    m(0, 1) = imaginary_unit();
    m(1, 0) = root_of_unity(5, 1);
    m(1, 1) = Cyclo(2);
    EXPECT_EQ(m * m.inverse(), CycloMatrix::identity(2));
    auto h = m.conj_transpose();
    EXPECT_EQ(h(0, 1), root_of_unity(5, 4));
    EXPECT_EQ(h(1, 0), -imaginary_unit());
}
