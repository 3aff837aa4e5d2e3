#include "support.hpp"
#include "thetacusp/theta_engine.hpp"
#include "thetacusp/weil_local.hpp"

#include <gtest/gtest.h>

using namespace thetacusp;
namespace tt = thetacusp::testing;

namespace {

// Random element of K_p^(M) from a word in FlipM and UpperM(x).
Mat2Q random_word_element(std::mt19937& rng, long p, long M, int len = 5)
{
    std::uniform_int_distribution<int> pick(0, 1);
    GeneratorWord gw{p, Integer(M), {}};
    for (int t = 0; t < len; ++t)
        gw.tokens.push_back(pick(rng) ? Token::flip() : Token::upper(tt::random_p_integral(rng, p)));
    return gw.product();
}

CycloMatrix gram(long p)
{
    std::vector<Cyclo> d;
    for (auto& r : gram_B1(p))
        d.emplace_back(r);
    return CycloMatrix::diagonal(d);
}

}  // namespace

TEST(GaussGamma, Examples)
{
    Cyclo i = imaginary_unit();
    EXPECT_EQ(gauss_gamma(3, Rational(1, 3)), -i);
    EXPECT_EQ(gauss_gamma(2, Rational(1)), (Cyclo(1) - i) / sqrt_of_prime(2));
    for (long p : {3L, 5L, 7L, 11L})
        for (Rational a : {Rational(1), Rational(p * p), Rational(2, p * p), Rational(-3)}) {
            if (vp(a, p) % 2 == 0) {
                EXPECT_EQ(gauss_gamma(p, a), Cyclo(1));
            }
        }
    EXPECT_EQ(gauss_gamma_inf(Rational(3)), root_of_unity(8, 1));
    EXPECT_EQ(gauss_gamma_inf(Rational(-1, 2)), root_of_unity(8, -1));
    EXPECT_THROW(gauss_gamma(5, Rational(0)), std::domain_error);
}

TEST(GaussGamma, EighthRootOfUnity)
{
    std::mt19937 rng(1);
    std::uniform_int_distribution<int> pi(0, 5);
    const long primes[] = {2, 3, 5, 7, 11, 13};
    for (int k = 0; k < 100; ++k) {
        long p = primes[pi(rng)];
        Rational a = tt::random_nonzero_rational(rng, 500, 500);
        EXPECT_EQ(gauss_gamma(p, a).pow(8), Cyclo(1)) << p << " " << a.str();
    }
}

TEST(GaussGamma, PrecisionInvariance)
{
    std::mt19937 rng(2);
    std::uniform_int_distribution<int> t(-20, 20);
    for (long p : {2L, 3L, 5L, 7L})
        for (int k = 0; k < 50; ++k) {
            Rational a = tt::random_nonzero_rational(rng, 200, 50);
            Rational b = a * (Rational(1) + Rational(p * p * p * t(rng)));
            if (b.is_zero())
                continue;
            EXPECT_EQ(gauss_gamma(p, a), gauss_gamma(p, b)) << p << " " << a.str();
        }
}

TEST(AlphaNorm, Examples)
{
    EXPECT_EQ(alpha_norm(Place::prime(5), Rational(1)), Cyclo(1));
    EXPECT_EQ(alpha_norm(Place::prime(2), Rational(1)), sqrt_of_prime(2).inverse());
    EXPECT_EQ(alpha_norm(Place::infinity(), Rational(3)), sqrt_of_prime(2) * sqrt_of_prime(3));
    EXPECT_EQ(alpha_norm(Place::prime(3), Rational(1, 9)), Cyclo(3));
}

TEST(FlipAction, Scalars)
{
    EXPECT_EQ(flip_on_phi_mu(3, char_chi3()).scalar, Cyclo(1));
    auto a = flip_on_phi_mu(5, psi_j(5, 1));
    EXPECT_EQ(a.scalar, Cyclo(-1));
    EXPECT_EQ(a.result, psi_j(5, 1));
    for (long p : {7L, 11L, 13L})
        for (long j = 1; j <= (p - 3) / 2; ++j) {
            auto s = flip_on_phi_mu(p, psi_j(p, j)).scalar;
            EXPECT_EQ(s * s.conj(), Cyclo(1));
        }
    EXPECT_THROW(flip_on_phi_mu(5, DirichletCharacter::principal(5)), std::invalid_argument);
}

TEST(Gram, Examples)
{
    auto g = gram_B1(5);
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(g[0], Rational(2, 5));
    EXPECT_EQ(g[1], Rational(2, 5));
    EXPECT_EQ(g[2], Rational(1, 5));
    for (long p : {5L, 7L, 11L, 13L}) {
        Rational tr(0);
        for (auto& x : gram_B1(p)) {
            EXPECT_GT(x.sign(), 0);
            tr += x;
        }
        EXPECT_EQ(tr, Rational(1));
    }
}

TEST(ChangeOfBasis, P5)
{
    auto c = change_of_basis(5);
    CycloMatrix want(3, 3);
    want(0, 0) = Cyclo(1);
    want(0, 1) = Cyclo(1);
    want(1, 0) = Cyclo(-1);
    want(1, 1) = Cyclo(1);
    want(2, 1) = Cyclo(1);
    want(2, 2) = Cyclo(1);
    EXPECT_EQ(c, want);
    for (long p : {7L, 11L, 13L}) {
        auto m = change_of_basis(p);
        auto h = static_cast<std::size_t>((p - 1) / 2);
        for (std::size_t i = 0; i < h; ++i)
            EXPECT_EQ(m(i, h - 1), Cyclo(1));
        EXPECT_EQ(m * m.inverse(), CycloMatrix::identity(h + 1));
    }
}

TEST(RhoGenerators, Examples)
{
    auto ctx = weil_context(5);
    EXPECT_EQ(ctx->generator(), 2);
    EXPECT_EQ(ctx->rho_B1(Mat2Q::upper(Rational(1, 5))).entries,
              CycloMatrix::diagonal({e_p(Rational(1, 5), 5), e_p(Rational(4, 5), 5), Cyclo(1)}));
    CycloMatrix flip(3, 3);
    flip(0, 0) = Cyclo(-1);
    flip(1, 2) = sqrt_of_prime(5).inverse();
    flip(2, 1) = sqrt_of_prime(5);
    EXPECT_EQ(to_B2(ctx->rho_B1(Mat2Q::flip(Rational(5)))).entries, flip);
    for (long p : {5L, 7L, 11L}) {
        auto c = weil_context(p);
        EXPECT_EQ(c->rho_B1(Mat2Q::identity(), -1).entries, Cyclo(-1) * CycloMatrix::identity(c->dim()));
        Mat2Q f = Mat2Q::flip(Rational(p));
        auto lhs = c->rho_B1(f * f).entries;
        auto rhs = Cyclo(beta_v(f, f, Place::prime(p))) * c->rho_B1(f).entries * c->rho_B1(f).entries;
        EXPECT_EQ(lhs, rhs);
        // diagonal generator acts by psi_j(u) on phi^{psi_j} and trivially on the last two
        for (long u = 2; u < p; ++u) {
            auto d = to_B2(c->rho_B1(Mat2Q::diag(Rational(u)))).entries;
            for (long j = 1; j <= (p - 3) / 2; ++j)
                EXPECT_EQ(d(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(j - 1)), psi_j(p, j)(u));
            EXPECT_EQ(d(c->dim() - 1, c->dim() - 1), Cyclo(1));
            EXPECT_EQ(d(c->dim() - 2, c->dim() - 2), Cyclo(1));
        }
    }
}

TEST(RhoGenerators, IntroTablesP5)
{
    auto ctx = weil_context(5, 2);
    Cyclo i = imaginary_unit(), one(1);
    for (long a = -6; a <= 12; ++a) {
        Rational x(a, 5);
        Cyclo c = cos5(x), s = sin5(x);
        CycloMatrix m(3, 3);
        m(0, 0) = c;
        m(0, 1) = -i * s;
        m(1, 0) = -i * s;
        m(1, 1) = c;
        m(2, 0) = i * s;
        m(2, 1) = one - c;
        m(2, 2) = one;
        EXPECT_EQ(to_B2(ctx->rho_B1(Mat2Q::upper(x))).entries, m) << a;
    }
    auto chi5 = psi_j(5, 2, 1);
    for (long a : {1L, 2L, 3L, 4L, 6L, -7L})
        EXPECT_EQ(to_B2(ctx->rho_B1(Mat2Q::diag(Rational(a)))).entries,
                  CycloMatrix::diagonal({chi5(a), one, one}));
}

TEST(RhoGenerators, WordIndependence)
{
    std::mt19937 rng(3);
    for (long p : {5L, 7L}) {
        auto ctx = weil_context(p);
        std::uniform_int_distribution<int> pick(0, 1);
        for (int k = 0; k < 30; ++k) {
            GeneratorWord gw{p, Integer(p), {}};
            for (int t = 0; t < 6; ++t)
                gw.tokens.push_back(pick(rng) ? Token::flip() : Token::upper(tt::random_p_integral(rng, p)));
            EXPECT_EQ(ctx->rho_of_word(gw).entries, ctx->rho_B1(gw.product()).entries);
        }
    }
}

TEST(RhoGenerators, ProjectiveLaw)
{
    std::mt19937 rng(4);
    for (long p : {5L, 7L, 11L}) {
        auto ctx = weil_context(p);
        Place v = Place::prime(p);
        for (int k = 0; k < 100; ++k) {
            Mat2Q g1 = tt::random_Kp(rng, p), g2 = tt::random_Kp(rng, p);
            ASSERT_EQ(ctx->rho_B1(g1).entries * ctx->rho_B1(g2).entries,
                      Cyclo(beta_v(g1, g2, v)) * ctx->rho_B1(g1 * g2).entries)
                << p << " " << g1.str() << " " << g2.str();
        }
    }
}

TEST(RhoGenerators, GramUnitarity)
{
    std::mt19937 rng(5);
    for (long p : {5L, 7L, 11L}) {
        auto ctx = weil_context(p);
        CycloMatrix G = gram(p);
        auto check = [&](const Mat2Q& g) {
            auto m = ctx->rho_B1(g).entries;
            EXPECT_EQ(m.conj_transpose() * G * m, G) << p << " " << g.str();
        };
        check(Mat2Q::flip(Rational(p)));
        for (long a = 0; a < p; ++a)
            check(Mat2Q::upper(Rational(a, p)));
        for (long u = 1; u < p; ++u)
            check(Mat2Q::diag(Rational(u)));
        for (int k = 0; k < 50; ++k)
            check(tt::random_Kp(rng, p, 6));
    }
}

TEST(Xi, GeneratorValues)
{
    Cyclo i = imaginary_unit(), one(1);
    EXPECT_EQ(xi2(Mat2Q::flip(Rational(8))), -(one + i) / sqrt_of_prime(2));
    EXPECT_EQ(xi3(Mat2Q::identity(), -1), Cyclo(-1));
    EXPECT_EQ(xi2(Mat2Q::identity(), -1), Cyclo(-1));
    EXPECT_EQ(xi3(Mat2Q::diag(Rational(2))), Cyclo(-1));
    EXPECT_EQ(xi3(Mat2Q::flip(Rational(3))), one);
    EXPECT_EQ(xi2(Mat2Q::upper(Rational(1, 8))), e_p(Rational(1, 8), 2));
    EXPECT_EQ(xi3(Mat2Q::upper(Rational(1, 3))), e_p(Rational(1, 3), 3));
    EXPECT_THROW(xi2(Mat2Q::upper(Rational(1, 16))), std::domain_error);
}

TEST(Xi, DiagonalClosedForms)
{
    for (long a : {1L, 3L, 5L, 7L, -1L, -3L, 9L, 15L, 17L, -21L}) {
        Rational x(a);
        Integer r = mod(Integer(a), Integer(8));
        EXPECT_EQ(xi2(Mat2Q::diag(x)), xi2_diagonal(x)) << a;
        // cross-check against the gamma quotient
        EXPECT_EQ(xi2_diagonal(x), gauss_gamma(2, Rational(1)) / gauss_gamma(2, x) * char_chi2()(r)) << a;
    }
    for (Rational x : {Rational(1, 3), Rational(5, 7), Rational(-9, 5)})
        EXPECT_EQ(xi2(Mat2Q::diag(x)), xi2_diagonal(x)) << x.str();
    for (Rational x : {Rational(1), Rational(2), Rational(-1), Rational(4, 5), Rational(7, 2)})
        EXPECT_EQ(xi3(Mat2Q::diag(x)), xi3_diagonal(x)) << x.str();
}

TEST(Xi, ProjectiveLaw)
{
    std::mt19937 rng(6);
    for (auto [p, M] : std::vector<std::pair<long, long>>{{2, 8}, {3, 3}}) {
        Place v = Place::prime(p);
        auto xi = [&](const Mat2Q& g) { return p == 2 ? xi2(g) : xi3(g); };
        for (int k = 0; k < 100; ++k) {
            Mat2Q g1 = random_word_element(rng, p, M), g2 = random_word_element(rng, p, M);
            Cyclo a = xi(g1), b = xi(g2);
            ASSERT_EQ(a * b, Cyclo(beta_v(g1, g2, v)) * xi(g1 * g2));
            ASSERT_EQ(a * a.conj(), Cyclo(1));
        }
    }
}
