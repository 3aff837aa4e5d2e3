// Exact arithmetic in cyclotomic fields Q(zeta_N).
//
// A value is stored as num/den with num a vector of phi(N) integers: the
// canonical remainder modulo Phi_N in the power basis 1, z, ..., z^(phi-1).
// After every operation the order is lowered where this is cheap to detect
// (N = 2 mod 4, support on multiples of q when q^2 | N, rational values).
// Equality always compares at the lcm of the two orders.
#pragma once

#include "thetacusp/numeric_base.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

namespace thetacusp {

inline constexpr std::uint64_t kMaxCycloOrder = std::uint64_t{1} << 20;

namespace detail {

inline std::vector<std::uint64_t> distinct_primes(std::uint64_t n)
{
    std::vector<std::uint64_t> ps;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0)
                n /= p;
        }
    }
    if (n > 1)
        ps.push_back(n);
    return ps;
}

inline std::uint64_t euler_phi(std::uint64_t n)
{
    std::uint64_t r = n;
    for (auto p : distinct_primes(n))
        r = r / p * (p - 1);
    return r;
}

inline std::uint64_t gcd_u(std::uint64_t a, std::uint64_t b)
{
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

inline std::uint64_t checked_lcm(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t l = a / gcd_u(a, b) * b;
    if (l > kMaxCycloOrder)
        throw std::overflow_error("cyclotomic order " + std::to_string(l) + " exceeds the cap of " +
                                  std::to_string(kMaxCycloOrder));
    return l;
}

// Phi_N = x^deg + sum of low_terms.
struct CyclotomicPoly {
    std::uint64_t order = 1;
    std::size_t degree = 1;
    std::vector<std::pair<std::size_t, long long>> low_terms;
};

inline std::vector<long long> poly_exact_div(std::vector<long long> num, const std::vector<long long>& den)
{
    // den is monic
    std::size_t dn = den.size() - 1;
    std::vector<long long> q(num.size() - dn, 0);
    for (std::size_t k = num.size(); k-- > dn;) {
        long long c = num[k];
        q[k - dn] = c;
        if (c == 0)
            continue;
        for (std::size_t i = 0; i <= dn; ++i)
            num[k - dn + i] -= c * den[i];
    }
    return q;
}

inline std::unique_ptr<CyclotomicPoly> build_cyclotomic(std::uint64_t n)
{
    auto primes = distinct_primes(n);
    std::uint64_t rad = 1;
    std::vector<long long> P{-1, 1};
    for (auto q : primes) {
        std::vector<long long> Pq((P.size() - 1) * q + 1, 0);
        for (std::size_t i = 0; i < P.size(); ++i)
            Pq[i * q] = P[i];
        P = poly_exact_div(Pq, P);
        rad *= q;
    }
    std::uint64_t s = n / rad;
    auto out = std::make_unique<CyclotomicPoly>();
    out->order = n;
    out->degree = (P.size() - 1) * s;
    for (std::size_t i = 0; i + 1 < P.size(); ++i)
        if (P[i] != 0)
            out->low_terms.emplace_back(i * s, P[i]);
    return out;
}

inline const CyclotomicPoly& cyclotomic_poly(std::uint64_t n)
{
    static std::shared_mutex mu;
    static std::map<std::uint64_t, std::unique_ptr<CyclotomicPoly>> cache;
    {
        std::shared_lock lock(mu);
        auto it = cache.find(n);
        if (it != cache.end())
            return *it->second;
    }
    auto poly = build_cyclotomic(n);
    std::unique_lock lock(mu);
    auto [it, inserted] = cache.emplace(n, std::move(poly));
    return *it->second;
}

// Reduces sum a_k z^k (any length) to the canonical phi(n) coefficients.
inline std::vector<Integer> reduce_power_sum(std::uint64_t n, std::vector<Integer> a)
{
    if (a.size() > n) {
        for (std::size_t k = n; k < a.size(); ++k)
            if (a[k] != 0)
                a[k % n] += a[k];
        a.resize(n);
    }
    if (n % 2 == 0 && a.size() > n / 2) {
        for (std::size_t k = n / 2; k < a.size(); ++k)
            if (a[k] != 0)
                a[k - n / 2] -= a[k];
        a.resize(n / 2);
    }
    const auto& P = cyclotomic_poly(n);
    std::size_t deg = P.degree;
    for (std::size_t k = a.size(); k-- > deg;) {
        if (a[k] == 0)
            continue;
        Integer c = a[k];
        for (auto& [i, ci] : P.low_terms) {
            if (ci == 1)
                a[k - deg + i] -= c;
            else if (ci == -1)
                a[k - deg + i] += c;
            else
                a[k - deg + i] -= c * static_cast<long>(ci);
        }
        a[k] = 0;
    }
    a.resize(deg);
    return a;
}

}  // namespace detail

class Cyclo {
public:
    Cyclo() : n_(1), num_(1, Integer(0)), den_(1) {}
    Cyclo(int v) : Cyclo(Rational(v)) {}
    Cyclo(long v) : Cyclo(Rational(v)) {}
    Cyclo(const Integer& v) : Cyclo(Rational(v)) {}
    Cyclo(const Rational& r) : n_(1), num_(1, r.num()), den_(r.den()) {}

    // sum_k c[k] zeta_N^k for arbitrary length c.
    static Cyclo from_coefficients(std::uint64_t N, const std::vector<Rational>& c)
    {
        check_order(N);
        Integer den = 1;
        for (auto& x : c)
            den = lcm(den, x.den());
        std::vector<Integer> a(c.size());
        for (std::size_t i = 0; i < c.size(); ++i)
            a[i] = c[i].num() * (den / c[i].den());
        return from_power_sum(N, std::move(a), den);
    }

    static Cyclo from_power_sum(std::uint64_t N, std::vector<Integer> a, Integer den = 1)
    {
        check_order(N);
        if (den == 0)
            throw std::domain_error("cyclotomic value with zero denominator");
        Cyclo r;
        r.n_ = N;
        r.num_ = detail::reduce_power_sum(N, std::move(a));
        r.den_ = std::move(den);
        r.normalize();
        return r;
    }

    std::uint64_t order() const { return n_; }
    std::size_t degree() const { return num_.size(); }
    Rational coeff(std::size_t i) const { return Rational(num_.at(i), den_); }
    std::vector<Rational> coeffs() const
    {
        std::vector<Rational> out;
        out.reserve(num_.size());
        for (auto& x : num_)
            out.emplace_back(x, den_);
        return out;
    }

    bool is_zero() const { return n_ == 1 && num_[0] == 0; }
    bool is_rational() const { return n_ == 1; }
    Rational to_rational() const
    {
        if (!is_rational())
            throw std::domain_error("cyclotomic value is not rational");
        return Rational(num_[0], den_);
    }

    // Same value written at order L (a multiple of order()); not normalized.
    std::vector<Rational> coeffs_at(std::uint64_t L) const
    {
        std::vector<Rational> out;
        for (auto& x : promoted(L))
            out.emplace_back(x, den_);
        return out;
    }

    std::complex<double> embed() const
    {
        long double re = 0, im = 0;
        const long double tau = 2 * std::numbers::pi_v<long double>;
        for (std::size_t k = 0; k < num_.size(); ++k) {
            if (num_[k] == 0)
                continue;
            long double c = num_[k].get_d();
            long double ang = tau * static_cast<long double>(k) / static_cast<long double>(n_);
            re += c * std::cos(ang);
            im += c * std::sin(ang);
        }
        long double d = den_.get_d();
        return {static_cast<double>(re / d), static_cast<double>(im / d)};
    }

    Cyclo conj() const
    {
        if (n_ == 1)
            return *this;
        std::vector<Integer> a(n_);
        a[0] = num_[0];
        for (std::size_t k = 1; k < num_.size(); ++k)
            a[n_ - k] = num_[k];
        return from_power_sum(n_, std::move(a), den_);
    }

    Cyclo inverse() const;

    Cyclo pow(long long e) const
    {
        if (e < 0)
            return inverse().pow(-e);
        Cyclo r(1), b = *this;
        while (e) {
            if (e & 1)
                r *= b;
            e >>= 1;
            if (e)
                b *= b;
        }
        return r;
    }

    Cyclo& operator+=(const Cyclo& o) { return *this = add(*this, o, 1); }
    Cyclo& operator-=(const Cyclo& o) { return *this = add(*this, o, -1); }
    Cyclo& operator*=(const Cyclo& o) { return *this = mul(*this, o); }
    Cyclo& operator/=(const Cyclo& o) { return *this = mul(*this, o.inverse()); }

    friend Cyclo operator+(const Cyclo& a, const Cyclo& b) { return add(a, b, 1); }
    friend Cyclo operator-(const Cyclo& a, const Cyclo& b) { return add(a, b, -1); }
    friend Cyclo operator*(const Cyclo& a, const Cyclo& b) { return mul(a, b); }
    friend Cyclo operator/(const Cyclo& a, const Cyclo& b) { return mul(a, b.inverse()); }
    friend Cyclo operator-(const Cyclo& a)
    {
        Cyclo r = a;
        for (auto& x : r.num_)
            x = -x;
        return r;
    }

    friend bool operator==(const Cyclo& a, const Cyclo& b)
    {
        if (a.n_ == b.n_)
            return a.den_ == b.den_ && a.num_ == b.num_;
        std::uint64_t L = detail::checked_lcm(a.n_, b.n_);
        auto A = a.promoted(L), B = b.promoted(L);
        for (std::size_t i = 0; i < A.size(); ++i)
            if (A[i] * b.den_ != B[i] * a.den_)
                return false;
        return true;
    }

    std::string str() const
    {
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = 0; k < num_.size(); ++k) {
            if (num_[k] == 0)
                continue;
            Rational c(num_[k], den_);
            if (!first)
                os << (c.sign() < 0 ? " - " : " + ");
            else if (c.sign() < 0)
                os << "-";
            first = false;
            Rational a = c.abs();
            if (k == 0)
                os << a;
            else {
                if (a != Rational(1))
                    os << a << "*";
                os << "z" << n_;
                if (k > 1)
                    os << "^" << k;
            }
        }
        if (first)
            os << "0";
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Cyclo& x) { return os << x.str(); }

private:
    static void check_order(std::uint64_t N)
    {
        if (N == 0)
            throw std::invalid_argument("cyclotomic order must be positive");
        if (N > kMaxCycloOrder)
            throw std::overflow_error("cyclotomic order " + std::to_string(N) + " exceeds the cap of " +
                                      std::to_string(kMaxCycloOrder));
    }

    std::vector<Integer> promoted(std::uint64_t L) const
    {
        if (L == n_)
            return num_;
        if (L % n_ != 0)
            throw std::logic_error("promotion to an order that is not a multiple");
        std::uint64_t s = L / n_;
        std::vector<Integer> a((num_.size() - 1) * s + 1);
        for (std::size_t k = 0; k < num_.size(); ++k)
            a[k * s] = num_[k];
        return detail::reduce_power_sum(L, std::move(a));
    }

    void normalize();

    static Cyclo add(const Cyclo& a, const Cyclo& b, int sign)
    {
        std::uint64_t L = detail::checked_lcm(a.n_, b.n_);
        auto A = a.promoted(L);
        auto B = b.promoted(L);
        Cyclo r;
        r.n_ = L;
        r.den_ = lcm(a.den_, b.den_);
        Integer fa = r.den_ / a.den_, fb = r.den_ / b.den_;
        r.num_.resize(A.size());
        for (std::size_t i = 0; i < A.size(); ++i) {
            r.num_[i] = A[i] * fa;
            if (sign > 0)
                r.num_[i] += B[i] * fb;
            else
                r.num_[i] -= B[i] * fb;
        }
        r.normalize();
        return r;
    }

    static Cyclo mul(const Cyclo& a, const Cyclo& b)
    {
        if (a.n_ == 1 || b.n_ == 1) {
            const Cyclo& s = a.n_ == 1 ? a : b;
            const Cyclo& v = a.n_ == 1 ? b : a;
            Cyclo r = v;
            for (auto& x : r.num_)
                x *= s.num_[0];
            r.den_ *= s.den_;
            r.normalize();
            return r;
        }
        std::uint64_t L = detail::checked_lcm(a.n_, b.n_);
        auto A = a.promoted(L);
        auto B = b.promoted(L);
        std::vector<std::size_t> nzb;
        for (std::size_t j = 0; j < B.size(); ++j)
            if (B[j] != 0)
                nzb.push_back(j);
        std::vector<Integer> prod(A.size() + B.size() - 1);
        for (std::size_t i = 0; i < A.size(); ++i) {
            if (A[i] == 0)
                continue;
            for (auto j : nzb)
                mpz_addmul(prod[i + j].get_mpz_t(), A[i].get_mpz_t(), B[j].get_mpz_t());
        }
        Cyclo r;
        r.n_ = L;
        r.num_ = detail::reduce_power_sum(L, std::move(prod));
        r.den_ = a.den_ * b.den_;
        r.normalize();
        return r;
    }

    std::uint64_t n_;
    std::vector<Integer> num_;
    Integer den_;
};

inline void Cyclo::normalize()
{
    if (den_ < 0) {
        den_ = -den_;
        for (auto& x : num_)
            x = -x;
    }
    Integer g = den_;
    for (auto& x : num_) {
        if (x != 0)
            g = gcd(g, x);
        if (g == 1)
            break;
    }
    if (g != 1) {
        den_ /= g;
        for (auto& x : num_)
            x /= g;
    }
    for (;;) {
        bool only_const = true;
        for (std::size_t k = 1; k < num_.size(); ++k)
            if (num_[k] != 0) {
                only_const = false;
                break;
            }
        if (only_const) {
            num_.resize(1);
            n_ = 1;
            if (num_[0] == 0)
                den_ = 1;
            return;
        }
        if (n_ % 4 == 2) {
            // zeta_n = -zeta_m^((m+1)/2) with m = n/2 odd
            std::uint64_t m = n_ / 2, h = (m + 1) / 2;
            std::vector<Integer> a(m);
            for (std::size_t k = 0; k < num_.size(); ++k) {
                if (num_[k] == 0)
                    continue;
                std::size_t e = static_cast<std::size_t>((k * h) % m);
                if (k & 1)
                    a[e] -= num_[k];
                else
                    a[e] += num_[k];
            }
            num_ = detail::reduce_power_sum(m, std::move(a));
            n_ = m;
            continue;
        }
        bool descended = false;
        for (auto q : detail::distinct_primes(n_)) {
            if ((n_ / q) % q != 0)
                continue;
            bool ok = true;
            for (std::size_t k = 0; k < num_.size() && ok; ++k)
                if (k % q != 0 && num_[k] != 0)
                    ok = false;
            if (!ok)
                continue;
            std::vector<Integer> a(num_.size() / q);
            for (std::size_t j = 0; j < a.size(); ++j)
                a[j] = num_[j * q];
            num_ = std::move(a);
            n_ /= q;
            descended = true;
            break;
        }
        if (!descended)
            return;
    }
}

inline Cyclo Cyclo::inverse() const
{
    if (is_zero())
        throw std::domain_error("inverse of zero cyclotomic value");
    if (n_ == 1)
        return Cyclo(Rational(den_, num_[0]));
    const auto& P = detail::cyclotomic_poly(n_);
    std::size_t d = num_.size();
    // columns of multiplication-by-num: num * z^j
    std::vector<std::vector<mpq_class>> M(d, std::vector<mpq_class>(d + 1));
    std::vector<Integer> col = num_;
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i)
            M[i][j] = col[i];
        Integer top = col[d - 1];
        for (std::size_t i = d - 1; i > 0; --i)
            col[i] = col[i - 1];
        col[0] = 0;
        if (top != 0)
            for (auto& [i, ci] : P.low_terms)
                col[i] -= top * static_cast<long>(ci);
    }
    M[0][d] = 1;
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t piv = c;
        while (piv < d && sgn(M[piv][c]) == 0)
            ++piv;
        if (piv == d)
            throw std::logic_error("singular multiplication matrix in cyclotomic inverse");
        std::swap(M[piv], M[c]);
        mpq_class inv = 1 / M[c][c];
        for (std::size_t k = c; k <= d; ++k)
            M[c][k] *= inv;
        for (std::size_t r = 0; r < d; ++r) {
            if (r == c || sgn(M[r][c]) == 0)
                continue;
            mpq_class f = M[r][c];
            for (std::size_t k = c; k <= d; ++k)
                M[r][k] -= f * M[c][k];
        }
    }
    std::vector<Rational> y(d);
    for (std::size_t i = 0; i < d; ++i)
        y[i] = Rational(M[i][d]) * Rational(den_);
    return from_coefficients(n_, y);
}

inline Cyclo root_of_unity(long long N, long long k)
{
    if (N < 1)
        throw std::invalid_argument("root_of_unity needs N >= 1");
    k %= N;
    if (k < 0)
        k += N;
    if (k == 0)
        return Cyclo(1);
    auto g = static_cast<long long>(detail::gcd_u(static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(k)));
    N /= g;
    k /= g;
    std::vector<Integer> a(static_cast<std::size_t>(k) + 1);
    a[static_cast<std::size_t>(k)] = 1;
    return Cyclo::from_power_sum(static_cast<std::uint64_t>(N), std::move(a));
}

inline Cyclo imaginary_unit() { return root_of_unity(4, 1); }

// e^{2 pi i x}
inline Cyclo e_inf_rat(const Rational& x)
{
    Integer d = x.den();
    return root_of_unity(to_long(d), to_long(mod(x.num(), d)));
}

// e_p(x) = e^{-2 pi i {x}_p}
inline Cyclo e_p(const Rational& x, long p)
{
    Rational f = frac_p(x, p);
    if (f.is_zero())
        return Cyclo(1);
    return root_of_unity(to_long(f.den()), -to_long(f.num()));
}

inline Cyclo sqrt_of_prime(long p)
{
    if (!is_prime(Integer(p)))
        throw std::invalid_argument("sqrt_of_prime needs a prime, got " + std::to_string(p));
    if (p == 2)
        return root_of_unity(8, 1) + root_of_unity(8, 7);
    std::vector<Integer> a(static_cast<std::size_t>(p));
    for (long n = 1; n < p; ++n)
        a[static_cast<std::size_t>(n)] = kronecker(Integer(n), Integer(p));
    Cyclo g = Cyclo::from_power_sum(static_cast<std::uint64_t>(p), std::move(a));
    return p % 4 == 1 ? g : root_of_unity(4, 3) * g;
}

// Positive square root of a positive rational.
inline Cyclo sqrt_rational(const Rational& r)
{
    if (r.sign() <= 0)
        throw std::domain_error("sqrt_rational needs a positive argument");
    Integer n = r.num() * r.den();
    Integer sq = 1;
    Cyclo rad(1);
    if (n != 1)
        for (auto& [p, e] : factorize(n)) {
            sq *= ipow(p, static_cast<unsigned long>(e / 2));
            if (e % 2)
                rad *= sqrt_of_prime(to_long(p));
        }
    return rad * Cyclo(Rational(sq, r.den()));
}

// 1 if d = 1 mod 4, i if d = 3 mod 4.
inline Cyclo eps_d(const Integer& d)
{
    Integer r = mod(d, Integer(4));
    if (r == 1)
        return Cyclo(1);
    if (r == 3)
        return imaginary_unit();
    throw std::invalid_argument("eps_d needs an odd integer, got " + d.get_str());
}

inline std::complex<double> embed(const Cyclo& x) { return x.embed(); }

}  // namespace thetacusp
