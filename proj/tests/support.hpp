// Shared helpers for the unit tests and the acceptance binary: random
// generators and brute-force reference implementations.
#pragma once

#include "thetacusp/metaplectic.hpp"
#include "thetacusp/numeric_base.hpp"

#include <map>
#include <numeric>
#include <random>
#include <vector>

namespace thetacusp::testing {

inline Rational random_rational(std::mt19937& rng, int num_bound = 12, int den_bound = 12)
{
    std::uniform_int_distribution<int> n(-num_bound, num_bound), d(1, den_bound);
    return Rational(n(rng), d(rng));
}

inline Rational random_nonzero_rational(std::mt19937& rng, int num_bound = 12, int den_bound = 12)
{
    Rational x;
    do
        x = random_rational(rng, num_bound, den_bound);
    while (x.is_zero());
    return x;
}

// Random element of SL(2,Q) as a word in upper, lower and diagonal matrices.
inline Mat2Q random_sl2q(std::mt19937& rng, int len = 3)
{
    std::uniform_int_distribution<int> pick(0, 3);
    Mat2Q g;
    for (int i = 0; i < len; ++i) {
        switch (pick(rng)) {
        case 0: g = g * Mat2Q::upper(random_rational(rng)); break;
        case 1: g = g * Mat2Q::lower(random_rational(rng)); break;
        case 2: g = g * Mat2Q::diag(random_nonzero_rational(rng, 9, 9)); break;
        default: g = g * Mat2Q::flip(Rational(1)); break;
        }
    }
    return g;
}

// Random p-integral rational with denominator prime to p.
inline Rational random_p_integral(std::mt19937& rng, long p, int bound = 30)
{
    std::uniform_int_distribution<int> n(-bound, bound), d(1, 9);
    long den;
    do
        den = d(rng);
    while (den % p == 0);
    return Rational(n(rng), den);
}

inline Rational random_p_unit(std::mt19937& rng, long p)
{
    Rational x;
    do
        x = random_p_integral(rng, p, 20);
    while (x.is_zero() || vp(x, p) != 0);
    return x;
}

// Random element of K_p^(p): words in Flip_p, Upper_p(x) and diag(u).
inline Mat2Q random_Kp(std::mt19937& rng, long p, int len = 4)
{
    std::uniform_int_distribution<int> pick(0, 2);
    Rational P(p);
    Mat2Q g;
    for (int i = 0; i < len; ++i) {
        switch (pick(rng)) {
        case 0: g = g * Mat2Q::flip(P); break;
        case 1: g = g * Mat2Q::upper(random_p_integral(rng, p) / P); break;
        default: g = g * Mat2Q::diag(random_p_unit(rng, p)); break;
        }
    }
    return g;
}

// Random element of Gamma^(24): words in [[1, x/24], [0, 1]], [[1, 0], [24 y, 1]] and [[0, -1/24], [24, 0]].
inline Mat2Q random_gamma24(std::mt19937& rng, int len = 4)
{
    std::uniform_int_distribution<int> pick(0, 2), x(-3, 3);
    Mat2Q g;
    for (int i = 0; i < len; ++i) {
        switch (pick(rng)) {
        case 0: g = g * Mat2Q::upper(Rational(x(rng), 24)); break;
        case 1: g = g * Mat2Q::lower(Rational(24 * x(rng))); break;
        default: g = g * Mat2Q(0, Rational(-1, 24), 24, 0); break;
        }
    }
    return g;
}

// Solubility of z^2 = a x^2 + b y^2 over Q_p, decided by search modulo p^5.
// Even powers of p are stripped first so v_p(a), v_p(b) <= 1; then a
// primitive solution has x or y a unit, which can be scaled to 1, and any
// solution mod p^5 of that shape lifts by Hensel's lemma.
class HilbertBruteForce {
public:
    explicit HilbertBruteForce(long p) : p_(p), P_(1)
    {
        for (int i = 0; i < 5; ++i)
            P_ *= p;
        is_sq_.assign(static_cast<std::size_t>(P_), false);
        for (long z = 0; z < P_; ++z)
            is_sq_[static_cast<std::size_t>(z * z % P_)] = true;
        for (long s = 0; s < P_; ++s)
            if (is_sq_[static_cast<std::size_t>(s)])
                squares_.push_back(s);
    }

    int operator()(long a, long b)
    {
        a = strip(a);
        b = strip(b);
        auto key = std::make_pair(a, b);
        if (auto it = cache_.find(key); it != cache_.end())
            return it->second;
        long ar = ((a % P_) + P_) % P_, br = ((b % P_) + P_) % P_;
        int out = (soluble(ar, br) || soluble(br, ar)) ? 1 : -1;
        cache_[key] = out;
        return out;
    }

private:
    long strip(long a) const
    {
        while (a % (p_ * p_) == 0)
            a /= p_ * p_;
        return a;
    }
    // exists y with a + b y^2 a square mod p^5
    bool soluble(long a, long b) const
    {
        for (long s : squares_)
            if (is_sq_[static_cast<std::size_t>((a + b * s) % P_)])
                return true;
        return false;
    }

    long p_, P_;
    std::vector<bool> is_sq_;
    std::vector<long> squares_;
    std::map<std::pair<long, long>, int> cache_;
};

// Real Hilbert symbol straight from the definition.
inline int hilbert_real_brute(long a, long b) { return (a < 0 && b < 0) ? -1 : 1; }

// Orbit labels of the double cosets Gamma0(N) \ SL2(Z) / <T, -I>, via points
// (c : d) of P^1(Z/N) under (c : d) -> (c : c + d).
class CuspOrbits {
public:
    explicit CuspOrbits(long N) : N_(N)
    {
        for (long u = 1; u < N; ++u)
            if (std::gcd(u, N) == 1)
                units_.push_back(u);
        if (N == 1)
            units_ = {0};
        label_.assign(static_cast<std::size_t>(N * N), -1);
        for (long c = 0; c < N; ++c)
            for (long d = 0; d < N; ++d) {
                if (std::gcd(std::gcd(c, d), N) != 1 || label_[idx(c, d)] != -1)
                    continue;
                // flood fill one orbit
                std::vector<std::pair<long, long>> stack{{c, d}};
                while (!stack.empty()) {
                    auto [x, y] = stack.back();
                    stack.pop_back();
                    if (label_[idx(x, y)] != -1)
                        continue;
                    for (long u : units_)
                        label_[idx(x * u % N_, y * u % N_)] = count_;
                    stack.push_back({x, (x + y) % N_});
                }
                ++count_;
            }
    }

    long count() const { return count_; }
    // orbit of the cusp a/c (a/c with c = 0 is infinity)
    long label_of(long a, long c) const
    {
        // bottom row (c, d) of a matrix [[a, b], [c, d]] in SL2(Z)
        Integer d = c == 0 ? Integer(1) : std::abs(c) == 1 ? Integer(0) : inverse_mod(Integer(a), Integer(std::abs(c)));
        long dd = to_long(mod(d, Integer(N_)));
        long cc = ((c % N_) + N_) % N_;
        return label_[idx(cc, dd)];
    }

private:
    std::size_t idx(long c, long d) const { return static_cast<std::size_t>(((c % N_) * N_) + (d % N_)); }

    long N_;
    long count_ = 0;
    std::vector<long> units_;
    std::vector<long> label_;
};

}  // namespace thetacusp::testing
