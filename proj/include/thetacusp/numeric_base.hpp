// Exact rationals, p-adic helpers, quadratic symbols and Hilbert symbols.
#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace thetacusp {

using Integer = mpz_class;

inline long to_long(const Integer& n)
{
    if (!n.fits_slong_p())
        throw std::overflow_error("integer does not fit in a machine word: " + n.get_str());
    return n.get_si();
}

class Rational {
public:
    Rational() = default;
    Rational(int n) : q_(n) {}
    Rational(long n) : q_(n) {}
    Rational(long long n) : q_(Integer(std::to_string(n))) {}
    Rational(const Integer& n) : q_(n) {}
    Rational(const Integer& n, const Integer& d)
    {
        if (d == 0)
            throw std::domain_error("rational with zero denominator");
        q_ = mpq_class(n, d);
        q_.canonicalize();
    }
    Rational(long n, long d) : Rational(Integer(n), Integer(d)) {}
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    // Accepts "a", "-a", "a/b".
    static Rational parse(std::string_view s)
    {
        auto slash = s.find('/');
        try {
            if (slash == std::string_view::npos)
                return Rational(Integer(std::string(s)));
            return Rational(Integer(std::string(s.substr(0, slash))),
                            Integer(std::string(s.substr(slash + 1))));
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("not a rational number: " + std::string(s));
        }
    }

    Integer num() const { return q_.get_num(); }
    Integer den() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }
    double to_double() const { return q_.get_d(); }
    std::string str() const { return q_.get_str(); }

    Rational inverse() const
    {
        if (is_zero())
            throw std::domain_error("inverse of zero rational");
        return Rational(mpq_class(q_.get_den(), q_.get_num()));
    }
    Rational abs() const { return Rational(mpq_class(::abs(q_))); }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o)
    {
        if (o.is_zero())
            throw std::domain_error("division by zero rational");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class q_{0};
};

inline Integer gcd(const Integer& a, const Integer& b)
{
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer lcm(const Integer& a, const Integer& b)
{
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

// Nonnegative residue of a modulo m (m > 0).
inline Integer mod(const Integer& a, const Integer& m)
{
    Integer r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Integer inverse_mod(const Integer& a, const Integer& m)
{
    Integer r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::domain_error(a.get_str() + " is not invertible modulo " + m.get_str());
    return r;
}

inline Integer ipow(const Integer& b, unsigned long e)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline bool is_prime(const Integer& n)
{
    return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

// Prime factorization of |n| by trial division; n != 0.
inline std::vector<std::pair<Integer, int>> factorize(Integer n)
{
    if (n == 0)
        throw std::domain_error("factorize(0)");
    if (n < 0)
        n = -n;
    std::vector<std::pair<Integer, int>> out;
    auto strip = [&](const Integer& p) {
        int e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            n /= p;
            ++e;
        }
        if (e > 0)
            out.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    for (Integer p = 5; p * p <= n; p += 6) {
        if (p > 100000000)
            break;
        strip(p);
        Integer q = p + 2;
        strip(q);
    }
    if (n > 1) {
        if (!is_prime(n))
            throw std::runtime_error("factorize: cofactor too large for trial division");
        out.emplace_back(n, 1);
    }
    return out;
}

inline std::vector<Integer> prime_divisors(const Integer& n)
{
    std::vector<Integer> ps;
    for (auto& [p, e] : factorize(n))
        ps.push_back(p);
    return ps;
}

class Place {
public:
    static Place infinity() { return Place(); }
    static Place prime(long p)
    {
        if (!is_prime(Integer(p)))
            throw std::invalid_argument("place must be a prime, got " + std::to_string(p));
        Place v;
        v.p_ = p;
        return v;
    }

    bool is_infinite() const { return p_ == 0; }
    long p() const
    {
        if (is_infinite())
            throw std::logic_error("archimedean place has no prime");
        return p_;
    }
    std::string str() const { return is_infinite() ? "inf" : std::to_string(p_); }

    friend bool operator==(const Place&, const Place&) = default;

private:
    Place() = default;
    long p_ = 0;
};

inline int vp(const Integer& n, long p)
{
    if (n == 0)
        throw std::domain_error("valuation of zero");
    Integer m = n, pp = p;
    int v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), pp.get_mpz_t())) {
        m /= pp;
        ++v;
    }
    return v;
}

inline int vp(const Rational& x, long p)
{
    if (x.is_zero())
        throw std::domain_error("valuation of zero");
    return vp(x.num(), p) - vp(x.den(), p);
}

// Residue mod m (a power of p) of a p-integral rational.
inline Integer residue(const Rational& x, const Integer& m)
{
    return mod(x.num() * inverse_mod(x.den(), m), m);
}

// Unit part u of x = p^v u, returned as an integer representative modulo m.
inline Integer unit_residue(const Rational& x, long p, const Integer& m)
{
    int v = vp(x, p);
    Rational u = v >= 0 ? x / Rational(ipow(Integer(p), v)) : x * Rational(ipow(Integer(p), -v));
    return residue(u, m);
}

inline Rational frac_p(const Rational& x, long p)
{
    if (x.is_zero())
        return Rational(0);
    int v = vp(x, p);
    if (v >= 0)
        return Rational(0);
    Integer m = ipow(Integer(p), static_cast<unsigned long>(-v));
    return Rational(residue(x * Rational(m), m), m);
}

inline int kronecker(const Integer& a, const Integer& n)
{
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

inline int legendre(const Integer& a, long p)
{
    if (p == 2 || !is_prime(Integer(p)))
        throw std::invalid_argument("legendre symbol needs an odd prime");
    return kronecker(a, Integer(p));
}

inline int hilbert_symbol(const Rational& a, const Rational& b, const Place& v)
{
    if (a.is_zero() || b.is_zero())
        throw std::domain_error("hilbert symbol of zero");
    if (v.is_infinite())
        return (a.sign() < 0 && b.sign() < 0) ? -1 : 1;
    long p = v.p();
    int al = vp(a, p), be = vp(b, p);
    if (p != 2) {
        Integer pz(p);
        int u = kronecker(unit_residue(a, p, pz), pz);
        int w = kronecker(unit_residue(b, p, pz), pz);
        int r = ((al & 1) && (be & 1) && (p % 4 == 3)) ? -1 : 1;
        if (be & 1)
            r *= u;
        if (al & 1)
            r *= w;
        return r;
    }
    long u = to_long(unit_residue(a, 2, Integer(8)));
    long w = to_long(unit_residue(b, 2, Integer(8)));
    auto eps = [](long t) { return ((t - 1) / 2) & 1; };
    auto omega = [](long t) { return ((t * t - 1) / 8) & 1; };
    long e = eps(u) * eps(w) + al * omega(w) + be * omega(u);
    return (e & 1) ? -1 : 1;
}

}  // namespace thetacusp
