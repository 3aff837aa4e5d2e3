// Dirichlet characters with exact values.
#pragma once

#include "thetacusp/cyclotomic.hpp"

#include <complex>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace thetacusp {

// chi(n) = zeta_order^exps[n mod q], or 0 where exps is -1.
class DirichletCharacter {
public:
    DirichletCharacter() : DirichletCharacter(principal(1)) {}

    static DirichletCharacter principal(long q)
    {
        if (q < 1)
            throw std::invalid_argument("character modulus must be positive");
        std::vector<long> e(static_cast<std::size_t>(q));
        for (long n = 0; n < q; ++n)
            e[static_cast<std::size_t>(n)] = std::gcd(n, q) == 1 ? 0 : -1;
        return DirichletCharacter(q, 1, std::move(e));
    }

    // Validates the table: values on units only, chi(1) = 1, multiplicative.
    static DirichletCharacter from_exponents(long q, long order, std::vector<long> exps)
    {
        if (q < 1 || order < 1 || exps.size() != static_cast<std::size_t>(q))
            throw std::invalid_argument("bad character table shape");
        for (long n = 0; n < q; ++n) {
            auto& e = exps[static_cast<std::size_t>(n)];
            bool unit = std::gcd(n, q) == 1;
            if (unit != (e >= 0))
                throw std::invalid_argument("character table must be supported on units");
            if (e >= 0)
                e %= order;
        }
        if (exps[static_cast<std::size_t>(1 % q)] != 0)
            throw std::invalid_argument("character must send 1 to 1");
        for (long m = 1; m < q; ++m)
            for (long n = m; n < q; ++n) {
                long em = exps[static_cast<std::size_t>(m)], en = exps[static_cast<std::size_t>(n)];
                if (em < 0 || en < 0)
                    continue;
                if (exps[static_cast<std::size_t>(m * n % q)] != (em + en) % order)
                    throw std::invalid_argument("character table is not multiplicative");
            }
        return DirichletCharacter(q, order, std::move(exps));
    }

    long modulus() const { return q_; }
    long value_order() const { return order_; }

    std::optional<long> exponent(long n) const
    {
        long r = ((n % q_) + q_) % q_;
        long e = exps_[static_cast<std::size_t>(r)];
        if (e < 0)
            return std::nullopt;
        return e;
    }
    std::optional<long> exponent(const Integer& n) const { return exponent(to_long(mod(n, Integer(q_)))); }

    Cyclo operator()(long n) const
    {
        auto e = exponent(n);
        return e ? root_of_unity(order_, *e) : Cyclo(0);
    }
    Cyclo operator()(const Integer& n) const { return (*this)(to_long(mod(n, Integer(q_)))); }

    std::complex<double> value_complex(long n) const
    {
        auto e = exponent(n);
        if (!e)
            return 0.0;
        if (*e == 0)
            return 1.0;
        if (2 * *e == order_)
            return -1.0;
        return std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(*e) / static_cast<double>(order_));
    }

    bool is_even() const { return *exponent(-1) == 0; }

    bool is_principal() const
    {
        for (long e : exps_)
            if (e > 0)
                return false;
        return true;
    }

    DirichletCharacter conj() const
    {
        auto e = exps_;
        for (auto& x : e)
            if (x > 0)
                x = order_ - x;
        return DirichletCharacter(q_, order_, std::move(e));
    }

    // Product, as a character modulo lcm of the moduli.
    friend DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b)
    {
        long q = std::lcm(a.q_, b.q_);
        long order = std::lcm(a.order_, b.order_);
        std::vector<long> e(static_cast<std::size_t>(q));
        for (long n = 0; n < q; ++n) {
            auto x = a.exponent(n), y = b.exponent(n);
            e[static_cast<std::size_t>(n)] = (x && y) ? (*x * (order / a.order_) + *y * (order / b.order_)) % order : -1;
        }
        return DirichletCharacter(q, order, std::move(e));
    }

    // Smallest modulus through which the character factors.
    long conductor() const
    {
        long f = q_;
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto ell : detail::distinct_primes(static_cast<std::uint64_t>(f))) {
                long d = f / static_cast<long>(ell);
                if (trivial_on_kernel(d)) {
                    f = d;
                    changed = true;
                    break;
                }
            }
        }
        return f;
    }

    bool is_primitive() const { return conductor() == q_; }

    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b)
    {
        if (a.q_ != b.q_)
            return false;
        for (long n = 0; n < a.q_; ++n) {
            auto x = a.exponent(n), y = b.exponent(n);
            if (x.has_value() != y.has_value())
                return false;
            if (x && *x * b.order_ != *y * a.order_)
                return false;
        }
        return true;
    }

private:
    DirichletCharacter(long q, long order, std::vector<long> exps) : q_(q), order_(order), exps_(std::move(exps))
    {
        long g = 0;
        for (long e : exps_)
            if (e > 0)
                g = std::gcd(g, e);
        g = g == 0 ? order_ : std::gcd(g, order_);
        if (g > 1) {
            order_ /= g;
            for (auto& e : exps_)
                if (e > 0)
                    e /= g;
        }
    }

    // chi(n) = 1 for every unit n = 1 mod d (d | q)?
    bool trivial_on_kernel(long d) const
    {
        for (long n = 1; n < q_; n += d)
            if (std::gcd(n, q_) == 1 && *exponent(n) != 0)
                return false;
        return true;
    }

    long q_ = 1, order_ = 1;
    std::vector<long> exps_;
};

inline DirichletCharacter char_chi2() { return DirichletCharacter::from_exponents(4, 2, {-1, 0, -1, 1}); }
inline DirichletCharacter char_chi3() { return DirichletCharacter::from_exponents(3, 2, {-1, 0, 1}); }
inline DirichletCharacter char_chi12() { return char_chi2() * char_chi3(); }

inline bool is_primitive_root(long g, long p)
{
    g = ((g % p) + p) % p;
    if (g == 0)
        return false;
    for (auto q : detail::distinct_primes(static_cast<std::uint64_t>(p - 1))) {
        Integer r;
        Integer base(g), mp(p);
        mpz_powm_ui(r.get_mpz_t(), base.get_mpz_t(), (p - 1) / static_cast<long>(q), mp.get_mpz_t());
        if (r == 1)
            return false;
    }
    return true;
}

inline long least_primitive_root(long p)
{
    if (p == 2)
        return 1;
    for (long g = 2; g < p; ++g)
        if (is_primitive_root(g, p))
            return g;
    throw std::invalid_argument("no primitive root modulo " + std::to_string(p));
}

// psi_j(g) = e(2j/(p-1)); even, with values in mu_{(p-1)/2}.
inline DirichletCharacter psi_j(long p, long g, long j)
{
    if (p < 5 || !is_prime(Integer(p)))
        throw std::invalid_argument("psi_j needs a prime p >= 5");
    if (!is_primitive_root(g, p))
        throw std::invalid_argument(std::to_string(g) + " does not generate (Z/" + std::to_string(p) + ")^x");
    if (j < 0 || j > (p - 1) / 2)
        throw std::invalid_argument("psi_j index out of range");
    std::vector<long> e(static_cast<std::size_t>(p), -1);
    long x = 1;
    for (long k = 0; k < p - 1; ++k) {
        e[static_cast<std::size_t>(x)] = (2 * j * k) % (p - 1);
        x = x * (((g % p) + p) % p) % p;
    }
    return DirichletCharacter::from_exponents(p, p - 1, std::move(e));
}

inline DirichletCharacter psi_j(long p, long j) { return psi_j(p, least_primitive_root(p), j); }

// chi = prod chi_p with chi_p of modulus p^{v_p(q)}.
inline std::vector<std::pair<long, DirichletCharacter>> local_components(const DirichletCharacter& chi)
{
    std::vector<std::pair<long, DirichletCharacter>> out;
    long q = chi.modulus();
    for (auto pu : detail::distinct_primes(static_cast<std::uint64_t>(q))) {
        long p = static_cast<long>(pu), pe = 1;
        while (q % (pe * p) == 0)
            pe *= p;
        long rest = q / pe;
        std::vector<long> e(static_cast<std::size_t>(pe), -1);
        for (long n = 0; n < pe; ++n) {
            if (n % p == 0)
                continue;
            // n' = n mod p^e, n' = 1 mod rest
            Integer t = mod(Integer(n - 1) * inverse_mod(Integer(rest), Integer(pe)), Integer(pe));
            long np = to_long(Integer(1) + Integer(rest) * t);
            e[static_cast<std::size_t>(n)] = *chi.exponent(np);
        }
        out.emplace_back(p, DirichletCharacter::from_exponents(pe, chi.value_order(), std::move(e)));
    }
    return out;
}

// tau(mu) = sum_{i mod p^f, p not | i} mu(i) e_p(i/p^f)
inline Cyclo tau(const DirichletCharacter& mu, long p)
{
    long q = mu.modulus();
    long f = 0, pf = 1;
    while (q % (pf * p) == 0) {
        pf *= p;
        ++f;
    }
    if (f == 0 || pf != q)
        throw std::invalid_argument("tau needs a character of modulus p^f");
    if (!mu.is_primitive())
        throw std::invalid_argument("tau needs a primitive character");
    long o = mu.value_order();
    long L = std::lcm(o, pf);
    std::vector<Integer> a(static_cast<std::size_t>(L));
    for (long i = 1; i < pf; ++i) {
        auto e = mu.exponent(i);
        if (!e)
            continue;
        // zeta_o^e * zeta_pf^{-i}
        long k = ((*e * (L / o) - i * (L / pf)) % L + L) % L;
        a[static_cast<std::size_t>(k)] += 1;
    }
    return Cyclo::from_power_sum(static_cast<std::uint64_t>(L), std::move(a));
}

}  // namespace thetacusp
