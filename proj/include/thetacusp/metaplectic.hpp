// SL(2,Q) matrices, the Kubota cocycle, generator words in K_p^(M),
// scaling matrices and cusps of Gamma_0(N).
#pragma once

#include "thetacusp/numeric_base.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace thetacusp {

class Mat2Q {
public:
    Mat2Q() : a_(1), b_(0), c_(0), d_(1) {}
    Mat2Q(Rational a, Rational b, Rational c, Rational d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d))
    {
        if (a_ * d_ - b_ * c_ != Rational(1))
            throw std::invalid_argument("matrix " + str() + " does not have determinant 1");
    }

    static Mat2Q identity() { return Mat2Q(); }
    static Mat2Q upper(const Rational& x) { return Mat2Q(1, x, 0, 1); }
    static Mat2Q lower(const Rational& y) { return Mat2Q(1, 0, y, 1); }
    static Mat2Q diag(const Rational& x) { return Mat2Q(x, 0, 0, x.inverse()); }
    // [[0, 1/M], [-M, 0]]
    static Mat2Q flip(const Rational& M) { return Mat2Q(0, M.inverse(), -M, 0); }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    const Rational& c() const { return c_; }
    const Rational& d() const { return d_; }

    Mat2Q inverse() const { return Mat2Q(d_, -b_, -c_, a_, Unchecked{}); }

    friend Mat2Q operator*(const Mat2Q& x, const Mat2Q& y)
    {
        return Mat2Q(x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_, x.c_ * y.a_ + x.d_ * y.c_,
                     x.c_ * y.b_ + x.d_ * y.d_, Unchecked{});
    }
    friend bool operator==(const Mat2Q& x, const Mat2Q& y)
    {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
    }

    // Image of infinity; nullopt when it is infinity.
    std::optional<Rational> image_of_infinity() const
    {
        if (c_.is_zero())
            return std::nullopt;
        return a_ / c_;
    }

    std::string str() const
    {
        return "[[" + a_.str() + ", " + b_.str() + "], [" + c_.str() + ", " + d_.str() + "]]";
    }

private:
    struct Unchecked {};
    Mat2Q(Rational a, Rational b, Rational c, Rational d, Unchecked)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d))
    {
    }

    Rational a_, b_, c_, d_;
};

inline Rational kubota_x(const Mat2Q& g) { return g.c().is_zero() ? g.d() : g.c(); }

inline int s_v(const Mat2Q& g, const Place& v)
{
    if (v.is_infinite())
        return 1;
    if (g.c().is_zero() || g.d().is_zero())
        return 1;
    if (vp(g.c(), v.p()) % 2 == 0)
        return 1;
    return hilbert_symbol(g.c(), g.d(), v);
}

inline int beta_v(const Mat2Q& g1, const Mat2Q& g2, const Place& v)
{
    Mat2Q g12 = g1 * g2;
    Rational x1 = kubota_x(g1), x2 = kubota_x(g2), x12 = kubota_x(g12);
    return hilbert_symbol(x1, x2, v) * hilbert_symbol(-x1 * x2, x12, v) * s_v(g1, v) * s_v(g2, v) * s_v(g12, v);
}

struct MetaElem {
    Mat2Q g;
    int zeta = 1;

    MetaElem() = default;
    MetaElem(Mat2Q m, int z) : g(std::move(m)), zeta(z)
    {
        if (z != 1 && z != -1)
            throw std::invalid_argument("metaplectic sign must be +1 or -1");
    }
    friend bool operator==(const MetaElem&, const MetaElem&) = default;
};

inline MetaElem meta_mul(const MetaElem& x, const MetaElem& y, const Place& v)
{
    return MetaElem(x.g * y.g, beta_v(x.g, y.g, v) * x.zeta * y.zeta);
}

inline std::vector<long> primes_of(const Rational& x)
{
    std::set<long> ps;
    if (!x.is_zero()) {
        for (auto& p : prime_divisors(x.num()))
            ps.insert(to_long(p));
        for (auto& p : prime_divisors(x.den()))
            ps.insert(to_long(p));
    }
    return {ps.begin(), ps.end()};
}

// Primes at which s_p(g) may be nontrivial: those dividing 2cd.
inline std::vector<long> s_support(const Mat2Q& g)
{
    std::set<long> ps{2};
    if (!g.c().is_zero() && !g.d().is_zero()) {
        for (long p : primes_of(g.c()))
            ps.insert(p);
        for (long p : primes_of(g.d()))
            ps.insert(p);
    }
    return {ps.begin(), ps.end()};
}

inline int s_A(const Mat2Q& g)
{
    int r = 1;
    for (long p : s_support(g))
        r *= s_v(g, Place::prime(p));
    return r;
}

// Sign carried by i_f(gamma): the finite part of s_A times beta_inf(gamma^-1, gamma).
inline int i_f_sign(const Mat2Q& g) { return s_A(g) * beta_v(g.inverse(), g, Place::infinity()); }

// ---------------------------------------------------------------------------
// Generator words.

struct Token {
    enum class Kind { Flip, Upper };
    Kind kind = Kind::Flip;
    Rational x;  // parameter of Upper

    static Token flip() { return {Kind::Flip, Rational(0)}; }
    static Token upper(Rational x) { return {Kind::Upper, std::move(x)}; }

    bool is_flip() const { return kind == Kind::Flip; }

    // FlipM = [[0, 1/M], [-M, 0]], UpperM(x) = [[1, x/M], [0, 1]]
    Mat2Q matrix(const Integer& M) const
    {
        return is_flip() ? Mat2Q::flip(Rational(M)) : Mat2Q::upper(x / Rational(M));
    }

    std::string str() const { return is_flip() ? "Flip" : "Upper(" + x.str() + ")"; }
    friend bool operator==(const Token&, const Token&) = default;
};

struct GeneratorWord {
    long p = 2;
    Integer M = 1;
    std::vector<Token> tokens;

    Mat2Q product() const
    {
        Mat2Q g;
        for (auto& t : tokens)
            g = g * t.matrix(M);
        return g;
    }
};

inline constexpr std::size_t kMaxWordLength = 10000;

inline bool in_Kp(const Mat2Q& g, long p, const Integer& M)
{
    int m = vp(M, p);
    auto integral = [&](const Rational& x, int lo) { return x.is_zero() || vp(x, p) >= lo; };
    return integral(g.a(), 0) && integral(g.d(), 0) && integral(g.b(), -m) && integral(g.c(), m);
}

inline void require_Kp(const Mat2Q& g, long p, const Integer& M)
{
    int m = vp(M, p);
    auto check = [&](const Rational& x, int lo, const char* name) {
        if (!x.is_zero() && vp(x, p) < lo)
            throw std::domain_error(std::string("matrix ") + g.str() + " is not in K_" + std::to_string(p) + "^(" +
                                    M.get_str() + "): entry " + name + " = " + x.str() + " has " +
                                    std::to_string(p) + "-adic valuation " + std::to_string(vp(x, p)) +
                                    " < " + std::to_string(lo));
    };
    check(g.a(), 0, "a");
    check(g.b(), -m, "b");
    check(g.c(), m, "c");
    check(g.d(), 0, "d");
}

namespace detail {

// F = [[0,1],[-1,0]], U(x) = [[1,x],[0,1]] on SL(2, Z_p).  F^4 = I.
inline void push_L(std::vector<Token>& w, const Rational& y)
{
    // [[1,0],[y,1]] = F U(-y) F^3
    if (y.is_zero())
        return;
    w.push_back(Token::flip());
    w.push_back(Token::upper(-y));
    for (int i = 0; i < 3; ++i)
        w.push_back(Token::flip());
}

inline void push_diag(std::vector<Token>& w, const Rational& x)
{
    if (x == Rational(1))
        return;
    if (x == Rational(-1)) {
        w.push_back(Token::flip());
        w.push_back(Token::flip());
        return;
    }
    // diag(x, 1/x) = U(x-1) L(1) U(-(x-1)/x) L(-x)
    w.push_back(Token::upper(x - Rational(1)));
    push_L(w, Rational(1));
    w.push_back(Token::upper(-(x - Rational(1)) / x));
    push_L(w, -x);
}

inline std::vector<Token> simplify_word(const std::vector<Token>& in)
{
    std::vector<Token> out;
    for (auto& t : in) {
        if (!t.is_flip() && t.x.is_zero())
            continue;
        if (!out.empty() && !t.is_flip() && !out.back().is_flip()) {
            out.back().x += t.x;
            if (out.back().x.is_zero())
                out.pop_back();
            continue;
        }
        out.push_back(t);
        // collapse F^4
        std::size_t n = out.size();
        if (n >= 4 && out[n - 1].is_flip() && out[n - 2].is_flip() && out[n - 3].is_flip() && out[n - 4].is_flip())
            out.resize(n - 4);
    }
    return out;
}

}  // namespace detail

inline GeneratorWord decompose_in_Kp(const Mat2Q& g, long p, const Integer& M)
{
    if (M < 1)
        throw std::invalid_argument("scale M must be positive");
    if (!is_prime(Integer(p)))
        throw std::invalid_argument("decompose_in_Kp needs a prime");
    require_Kp(g, p, M);
    Rational Mq(M);
    // conjugate into SL(2, Z_p)
    Rational a = g.a(), b = g.b() * Mq, c = g.c() / Mq, d = g.d();
    std::vector<Token> w;
    bool flipped = false;
    if (d.is_zero() || vp(d, p) > 0) {
        // h F = [[-b, a], [-d, c]]; c is a unit since d is not
        Rational na = -b, nb = a, nc = -d, nd = c;
        a = na;
        b = nb;
        c = nc;
        d = nd;
        flipped = true;
    }
    // [[a,b],[c,d]] = U(b/d) diag(1/d, d) L(c/d)
    w.push_back(Token::upper(b / d));
    detail::push_diag(w, d.inverse());
    detail::push_L(w, c / d);
    if (flipped)
        for (int i = 0; i < 3; ++i)
            w.push_back(Token::flip());
    GeneratorWord out{p, M, detail::simplify_word(w)};
    if (out.tokens.size() > kMaxWordLength)
        throw std::runtime_error("generator word exceeds the length cap");
    if (!(out.product() == g))
        throw std::logic_error("decomposition does not reproduce " + g.str());
    return out;
}

// ---------------------------------------------------------------------------
// Scaling matrices.

struct ScalingData {
    Mat2Q sigma;
    Integer r;  // r'
    Integer s;  // s'
    Integer G;  // gcd(M, w)
    Integer L;  // lcm(M, w)
};

// sigma = [[L u/w, r'/M], [L, s']] with u M s' - r' w = gcd(M, w).
inline ScalingData scaling_data(const Integer& u, const Integer& w, const Integer& M)
{
    if (w <= 0 || M <= 0)
        throw std::invalid_argument("scaling_matrix needs w > 0 and M > 0");
    if (gcd(u, w) != 1)
        throw std::invalid_argument("cusp " + u.get_str() + "/" + w.get_str() + " is not reduced");
    Integer G = gcd(M, w), L = M * w / G;
    if (u == 0) {
        // cusp 0 = 0/1
        return {Mat2Q(0, Rational(-1) / Rational(M), Rational(M), 0), Integer(-1), Integer(0), G, L};
    }
    Integer m = abs(u * M / G);
    Integer r = 0;
    if (m != 1)
        r = mod(-inverse_mod(w / G, m), m);
    Integer num = G + r * w;
    Integer s = num / (u * M);
    if (s * u * M != num)
        throw std::logic_error("scaling_matrix: no integral s'");
    Mat2Q sigma(Rational(L * u, w), Rational(r, M), Rational(L), Rational(s));
    return {sigma, r, s, G, L};
}

inline Mat2Q scaling_matrix(const Integer& u, const Integer& w, const Integer& M)
{
    return scaling_data(u, w, M).sigma;
}

struct SigmaInverseFactors {
    bool five_factor = false;
    std::vector<Mat2Q> factors;

    Mat2Q product() const
    {
        Mat2Q g;
        for (auto& f : factors)
            g = g * f;
        return g;
    }
};

// sigma^-1 = U(-s'/L) J_L U(-u/w)                        if v_p(w) <= v_p(M)
//          = U(-r'w/(MLu)) diag(-w/(Lu)) J_M U(w/(uM^2)) J_M   otherwise
// with J_X = [[0, 1/X], [-X, 0]].
inline SigmaInverseFactors sigma_inverse_decomposition(const Integer& u, const Integer& w, const Integer& M, long p)
{
    auto sd = scaling_data(u, w, M);
    Rational ur(u), wr(w), Mr(M), Lr(sd.L);
    SigmaInverseFactors out;
    if (u == 0 || vp(w, p) <= vp(M, p)) {
        out.factors = {Mat2Q::upper(-Rational(sd.s) / Lr), Mat2Q::flip(Lr), Mat2Q::upper(-ur / wr)};
    } else {
        out.five_factor = true;
        out.factors = {Mat2Q::upper(-Rational(sd.r) * wr / (Mr * Lr * ur)), Mat2Q::diag(-wr / (Lr * ur)),
                       Mat2Q::flip(Mr), Mat2Q::upper(wr / (ur * Mr * Mr)), Mat2Q::flip(Mr)};
    }
    if (!(out.product() == sd.sigma.inverse()))
        throw std::logic_error("sigma inverse decomposition failed for " + u.get_str() + "/" + w.get_str());
    return out;
}

// ---------------------------------------------------------------------------
// Cusps.

struct Cusp {
    long u = 1;
    long w = 0;  // infinity is (1, 0)

    static Cusp infinity() { return {1, 0}; }
    bool is_infinity() const { return w == 0; }

    std::string str() const { return is_infinity() ? "inf" : std::to_string(u) + "/" + std::to_string(w); }

    static Cusp parse(const std::string& s)
    {
        if (s == "inf" || s == "oo" || s == "infinity")
            return infinity();
        auto slash = s.find('/');
        long u, w;
        try {
            std::size_t used = 0;
            if (slash == std::string::npos) {
                u = std::stol(s, &used);
                if (used != s.size())
                    throw std::invalid_argument(s);
                w = 1;
            } else {
                std::string us = s.substr(0, slash), ws = s.substr(slash + 1);
                u = std::stol(us, &used);
                if (used != us.size())
                    throw std::invalid_argument(s);
                w = std::stol(ws, &used);
                if (used != ws.size())
                    throw std::invalid_argument(s);
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse cusp '" + s + "'");
        }
        if (w <= 0)
            throw std::invalid_argument("cusp denominator must be positive in '" + s + "'");
        if (std::gcd(u, w) != 1)
            throw std::invalid_argument("cusp " + s + " is not reduced");
        return {u, w};
    }

    friend bool operator==(const Cusp&, const Cusp&) = default;
};

inline std::vector<long> divisors(long n)
{
    std::vector<long> d;
    for (long k = 1; k * k <= n; ++k)
        if (n % k == 0) {
            d.push_back(k);
            if (k * k != n)
                d.push_back(n / k);
        }
    std::sort(d.begin(), d.end());
    return d;
}

// Representatives u/w, w | N, u running over units mod gcd(w, N/w).
inline std::vector<Cusp> cusps_of_gamma0(long N)
{
    if (N < 1)
        throw std::invalid_argument("level must be positive");
    std::vector<Cusp> out;
    for (long w : divisors(N)) {
        if (w == N) {
            out.push_back(Cusp::infinity());
            continue;
        }
        long g = std::gcd(w, N / w);
        for (long u0 = 0; u0 < g; ++u0) {
            if (std::gcd(u0, g) != 1)
                continue;
            if (w == 1) {
                out.push_back({0, 1});
                continue;
            }
            long u = u0 == 0 ? g : u0;
            while (std::gcd(u, w) != 1)
                u += g;
            out.push_back({u, w});
        }
    }
    return out;
}

inline long cusp_width(const Cusp& c, long N)
{
    long w = c.is_infinity() ? N : c.w;
    return N / std::gcd(w * w, N);
}

// Scaling matrix for a cusp; the identity at infinity.
inline ScalingData scaling_for_cusp(const Cusp& c, const Integer& M)
{
    if (c.is_infinity())
        return {Mat2Q(), Integer(0), Integer(1), Integer(1), M};
    return scaling_data(Integer(c.u), Integer(c.w), M);
}

}  // namespace thetacusp
