// Local Weil-representation data: Weil indices, the flip on phi^mu, the
// finite-dimensional representation rho_p on V, and the characters xi_2, xi_3.
#pragma once

#include "thetacusp/characters.hpp"
#include "thetacusp/cyclo_matrix.hpp"
#include "thetacusp/metaplectic.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <utility>

namespace thetacusp {

// gamma(e_{p,a}) for a = alpha p^r, r of any sign.
inline Cyclo gauss_gamma(long p, const Rational& a)
{
    if (a.is_zero())
        throw std::domain_error("gauss_gamma of zero");
    if (!is_prime(Integer(p)))
        throw std::invalid_argument("gauss_gamma needs a prime");
    int r = vp(a, p);
    if (p != 2) {
        if (r % 2 == 0)
            return Cyclo(1);
        Integer alpha = unit_residue(a, p, ipow(Integer(p), 3));
        int leg = kronecker(-alpha, Integer(p));
        return p % 4 == 1 ? Cyclo(leg) : imaginary_unit() * Cyclo(leg);
    }
    Integer alpha = unit_residue(a, 2, Integer(16));
    Integer neg = mod(-alpha, Integer(16));
    Cyclo out = root_of_unity(8, 1) * eps_d(neg).conj();
    if (r % 2 != 0 && kronecker(Integer(2), neg) == -1)
        out = -out;
    return out;
}

inline Cyclo gauss_gamma_inf(const Rational& a)
{
    if (a.is_zero())
        throw std::domain_error("gauss_gamma_inf of zero");
    return root_of_unity(8, a.sign() > 0 ? 1 : -1);
}

// |2a|_v^{1/2}
inline Cyclo alpha_norm(const Place& v, const Rational& a)
{
    if (a.is_zero())
        throw std::domain_error("alpha_norm of zero");
    Rational two_a = Rational(2) * a;
    if (v.is_infinite())
        return sqrt_rational(two_a.abs());
    int e = vp(two_a, v.p());
    Rational norm = e >= 0 ? Rational(Integer(1), ipow(Integer(v.p()), e)) : Rational(ipow(Integer(v.p()), -e));
    return sqrt_rational(norm);
}

struct FlipAction {
    Cyclo scalar;
    DirichletCharacter result;
};

// r(flip_p) phi^mu = scalar * phi^{conj mu}
inline FlipAction flip_on_phi_mu(long p, const DirichletCharacter& mu)
{
    if (p == 2 || !is_prime(Integer(p)))
        throw std::invalid_argument("flip_on_phi_mu needs an odd prime");
    long q = mu.modulus(), f = 0, pf = 1;
    while (q % (pf * p) == 0) {
        pf *= p;
        ++f;
    }
    if (f == 0 || pf != q || !mu.is_primitive())
        throw std::invalid_argument("flip_on_phi_mu needs a primitive character of modulus p^f");
    int sign = (f % 2 == 1 && p % 4 == 3) ? -1 : 1;
    Cyclo num = tau(mu, p) * mu.conj()(2) * Cyclo(sign);
    Cyclo den = sqrt_rational(Rational(Integer(pf))) * gauss_gamma(p, Rational(Integer(1), Integer(pf)));
    return {num / den, mu.conj()};
}

enum class BasisTag { B1, B2 };

inline const char* basis_name(BasisTag b) { return b == BasisTag::B1 ? "B1" : "B2"; }

struct WeilMatrix {
    long p = 5;
    BasisTag basis = BasisTag::B1;
    CycloMatrix entries;

    friend bool operator==(const WeilMatrix&, const WeilMatrix&) = default;
};

// Product of generator images along a word, with the accumulated cocycle sign.
template <class T, class Mul>
std::pair<T, int> evaluate_word(const GeneratorWord& w, T one, Mul mul)
{
    Place v = Place::prime(w.p);
    Mat2Q prefix;
    int sign = 1;
    T val = std::move(one);
    for (auto& t : w.tokens) {
        Mat2Q tm = t.matrix(w.M);
        sign *= beta_v(prefix, tm, v);
        val = mul(std::move(val), t);
        prefix = prefix * tm;
    }
    return {std::move(val), sign};
}

// rho_p on V for p >= 5 and a fixed generator g of (Z/p)^x.
class WeilContext {
public:
    WeilContext(long p, long g) : p_(p), g_(g)
    {
        if (p < 5 || !is_prime(Integer(p)))
            throw std::invalid_argument("the representation on V needs a prime p >= 5");
        if (!is_primitive_root(g, p))
            throw std::invalid_argument(std::to_string(g) + " does not generate (Z/" + std::to_string(p) + ")^x");
        h_ = (p - 1) / 2;
        for (long j = 1; j < h_; ++j)
            psi_.push_back(psi_j(p, g, j));
        build_change_of_basis();
        build_flip();
    }

    long p() const { return p_; }
    long generator() const { return g_; }
    std::size_t dim() const { return static_cast<std::size_t>(h_ + 1); }
    const DirichletCharacter& psi(long j) const { return psi_.at(static_cast<std::size_t>(j - 1)); }

    const CycloMatrix& change_of_basis() const { return C_; }
    const CycloMatrix& change_of_basis_inverse() const { return Cinv_; }
    const CycloMatrix& flip_B2() const { return flip2_; }
    const CycloMatrix& flip_B1() const { return flip1_; }

    // Upper(a) = [[1, a/p], [0, 1]], a p-integral: diag(e_p(i^2 a / p), 1) in B1.
    std::vector<Cyclo> upper_diagonal(const Rational& a) const
    {
        std::vector<Cyclo> d;
        for (long i = 1; i <= h_; ++i)
            d.push_back(e_p(Rational(i * i) * a / Rational(p_), p_));
        d.emplace_back(1);
        return d;
    }

    CycloMatrix generator_B1(const Token& t) const
    {
        return t.is_flip() ? flip1_ : CycloMatrix::diagonal(upper_diagonal(t.x));
    }

    // diag(u, 1/u) for a p-unit u: diag(psi_j(u), 1, 1) in B2.
    CycloMatrix diagonal_B2(const Rational& u) const
    {
        if (u.is_zero() || vp(u, p_) != 0)
            throw std::domain_error("diagonal generator needs a p-adic unit");
        Integer r = residue(u, Integer(p_));
        std::vector<Cyclo> d;
        for (auto& ps : psi_)
            d.push_back(ps(r));
        d.emplace_back(1);
        d.emplace_back(1);
        return CycloMatrix::diagonal(d);
    }
    CycloMatrix diagonal_B1(const Rational& u) const { return C_ * diagonal_B2(u) * Cinv_; }

    CycloMatrix to_B2(const CycloMatrix& m) const { return Cinv_ * m * C_; }
    CycloMatrix to_B1(const CycloMatrix& m) const { return C_ * m * Cinv_; }

    // rho_{B1,p}(g, zeta) via a generator word for g in K_p^(p).
    WeilMatrix rho_B1(const Mat2Q& g, int zeta = 1) const
    {
        return rho_of_word(decompose_in_Kp(g, p_, Integer(p_)), zeta);
    }

    WeilMatrix rho_of_word(const GeneratorWord& w, int zeta = 1) const
    {
        if (w.p != p_ || w.M != p_)
            throw std::invalid_argument("word is not a K_p^(p) word for this prime");
        auto [m, sign] = evaluate_word(w, CycloMatrix::identity(dim()), [&](CycloMatrix acc, const Token& t) {
            if (t.is_flip())
                return acc * flip1_;
            auto d = upper_diagonal(t.x);
            for (std::size_t i = 0; i < acc.rows(); ++i)
                for (std::size_t j = 0; j < acc.cols(); ++j)
                    if (!acc(i, j).is_zero())
                        acc(i, j) *= d[j];
            return acc;
        });
        if (sign * zeta == -1)
            m *= Cyclo(-1);
        return {p_, BasisTag::B1, std::move(m)};
    }

private:
    void build_change_of_basis()
    {
        std::size_t n = dim();
        C_ = CycloMatrix(n, n);
        for (long i = 1; i <= h_; ++i) {
            for (long j = 1; j < h_; ++j)
                C_(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = psi(j)(i);
            C_(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(h_ - 1)) = Cyclo(1);
        }
        C_(static_cast<std::size_t>(h_), static_cast<std::size_t>(h_ - 1)) = Cyclo(1);
        C_(static_cast<std::size_t>(h_), static_cast<std::size_t>(h_)) = Cyclo(1);
        Cinv_ = C_.inverse();
    }

    void build_flip()
    {
        std::size_t n = dim();
        auto hz = static_cast<std::size_t>(h_);
        Cyclo eps_sqrt = eps_d(Integer(p_)) * sqrt_of_prime(p_);
        flip2_ = CycloMatrix(n, n);
        for (long j = 1; j < h_; ++j) {
            auto act = flip_on_phi_mu(p_, psi(j));
            flip2_(static_cast<std::size_t>(h_ - j - 1), static_cast<std::size_t>(j - 1)) = act.scalar;
        }
        Cyclo inv = eps_sqrt.inverse();
        flip2_(hz, hz - 1) = Cyclo(p_) * inv;
        flip2_(hz - 1, hz) = inv;

        // In B1 the flip is kappa/p * S with S(k, i) = e_p(2ik/p) + e_p(-2ik/p) on unit
        // boxes, 2 in the box-0 row, 1 in the box-0 column; kappa is one of +-G, +-iG
        // for the quadratic Gauss sum G.  Pick the one consistent with the B2 matrix.
        CycloMatrix S(n, n);
        for (long k = 1; k <= h_; ++k)
            for (long i = 1; i <= h_; ++i)
                S(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(i - 1)) =
                    root_of_unity(p_, 2 * i * k) + root_of_unity(p_, -2 * i * k);
        for (long i = 1; i <= h_; ++i) {
            S(hz, static_cast<std::size_t>(i - 1)) = Cyclo(2);
            S(static_cast<std::size_t>(i - 1), hz) = Cyclo(1);
        }
        S(hz, hz) = Cyclo(1);
        Cyclo G = (p_ % 4 == 1 ? Cyclo(1) : imaginary_unit()) * sqrt_of_prime(p_);
        CycloMatrix target = C_ * flip2_;
        for (const Cyclo& kappa : {G, -G, imaginary_unit() * G, -(imaginary_unit() * G)}) {
            CycloMatrix cand = (kappa * Cyclo(Rational(Integer(1), Integer(p_)))) * S;
            if (cand * C_ == target) {
                flip1_ = std::move(cand);
                return;
            }
        }
        throw std::logic_error("flip matrix in B1 is inconsistent with its B2 form");
    }

    long p_, g_, h_;
    std::vector<DirichletCharacter> psi_;
    CycloMatrix C_, Cinv_, flip2_, flip1_;
};

// Shared contexts keyed by (p, g); g = 0 picks the least primitive root.
inline std::shared_ptr<const WeilContext> weil_context(long p, long g = 0)
{
    if (g == 0)
        g = least_primitive_root(p);
    static std::shared_mutex mu;
    static std::map<std::pair<long, long>, std::shared_ptr<const WeilContext>> cache;
    auto key = std::make_pair(p, g);
    {
        std::shared_lock lock(mu);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
    }
    auto ctx = std::make_shared<const WeilContext>(p, g);
    std::unique_lock lock(mu);
    return cache.emplace(key, ctx).first->second;
}

inline CycloMatrix change_of_basis(long p, long g = 0) { return weil_context(p, g)->change_of_basis(); }

inline WeilMatrix rho_generator(long p, const Token& t, long g = 0)
{
    return {p, BasisTag::B1, weil_context(p, g)->generator_B1(t)};
}

inline WeilMatrix rho_B1(long p, const Mat2Q& g, int zeta = 1, long gen = 0)
{
    return weil_context(p, gen)->rho_B1(g, zeta);
}

inline WeilMatrix to_B2(const WeilMatrix& m, long g = 0)
{
    if (m.basis == BasisTag::B2)
        return m;
    return {m.p, BasisTag::B2, weil_context(m.p, g)->to_B2(m.entries)};
}

inline std::vector<Rational> gram_B1(long p)
{
    if (p < 5 || !is_prime(Integer(p)))
        throw std::invalid_argument("gram_B1 needs a prime p >= 5");
    std::vector<Rational> d(static_cast<std::size_t>((p - 1) / 2), Rational(2, p));
    d.emplace_back(1, p);
    return d;
}

// ---------------------------------------------------------------------------
// xi_2 on K_2^(8) and xi_3 on K_3^(3).

inline Cyclo xi2_generator(const Token& t)
{
    return t.is_flip() ? -root_of_unity(8, 1) : e_p(t.x / Rational(8), 2);
}

inline Cyclo xi3_generator(const Token& t) { return t.is_flip() ? Cyclo(1) : e_p(t.x / Rational(3), 3); }

inline Cyclo xi_of_word(const GeneratorWord& w, int zeta)
{
    auto gen = w.p == 2 ? xi2_generator : xi3_generator;
    auto [v, sign] = evaluate_word(w, Cyclo(1), [&](Cyclo acc, const Token& t) { return acc * gen(t); });
    return sign * zeta == 1 ? v : -v;
}

inline Cyclo xi2(const Mat2Q& g, int zeta = 1) { return xi_of_word(decompose_in_Kp(g, 2, Integer(8)), zeta); }
inline Cyclo xi3(const Mat2Q& g, int zeta = 1) { return xi_of_word(decompose_in_Kp(g, 3, Integer(3)), zeta); }

// Closed forms on diag(a, 1/a) for a unit a.
inline Cyclo xi2_diagonal(const Rational& a)
{
    if (a.is_zero() || vp(a, 2) != 0)
        throw std::domain_error("xi2_diagonal needs a 2-adic unit");
    Integer r = residue(a, Integer(8));
    return -imaginary_unit() * eps_d(-r) * char_chi2()(r);
}

inline Cyclo xi3_diagonal(const Rational& a)
{
    if (a.is_zero() || vp(a, 3) != 0)
        throw std::domain_error("xi3_diagonal needs a 3-adic unit");
    return char_chi3()(residue(a, Integer(3)));
}

}  // namespace thetacusp
