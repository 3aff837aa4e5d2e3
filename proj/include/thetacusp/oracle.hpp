// Numerical ground truth: theta series, weight 1/2 slash, coefficient extraction.
#pragma once

#include "thetacusp/characters.hpp"
#include "thetacusp/metaplectic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace thetacusp {

using cdouble = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// THETA_THREADS caps the worker count; unset means hardware concurrency.
inline unsigned thread_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("THETA_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            n = static_cast<unsigned>(v);
    }
    return n;
}

// fn(i) for i in [0, n), split in contiguous blocks.
template <class Fn>
void parallel_for(std::size_t n, Fn fn)
{
    unsigned t = std::min<std::size_t>(thread_count(), std::max<std::size_t>(n, 1));
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t block = (n + t - 1) / t;
    for (unsigned k = 0; k < t; ++k) {
        std::size_t lo = k * block, hi = std::min(n, lo + block);
        if (lo >= hi)
            break;
        pool.emplace_back([=, &fn] {
            for (std::size_t i = lo; i < hi; ++i)
                fn(i);
        });
    }
    for (auto& th : pool)
        th.join();
}

struct SeriesSpec {
    DirichletCharacter chi = char_chi12();
    long n_max = 2000000;  // truncation budget
    double Y = 0.0;        // horocycle height; 0 picks one from the frequency range
    long K = 0;            // sample count; 0 picks one from the frequency range
};

namespace detail {

// x mod 1 as P/Q with 0 <= P < Q.
struct FracPhase {
    __int128 P = 0, Q = 1;

    explicit FracPhase(const Rational& x)
    {
        Integer q = x.den(), p = mod(x.num(), q);
        if (!q.fits_slong_p())
            throw std::domain_error("phase denominator too large for the oracle");
        Q = q.get_si();
        P = p.get_si();
    }

    // frac(n^2 x)
    double of_square(long n) const
    {
        __int128 nn = static_cast<__int128>(n) * n % Q;
        return static_cast<double>(nn * P % Q) / static_cast<double>(Q);
    }
    double of(long n) const
    {
        __int128 v = ((static_cast<__int128>(n) % Q + Q) % Q) * P % Q;
        return static_cast<double>(v) / static_cast<double>(Q);
    }
};

inline double frac(double x) { return x - std::floor(x); }

// sqrt with argument in [-pi/2, pi/2): negative reals go to -i sqrt|x|.
inline cdouble sqrt_half_open(cdouble x)
{
    if (x.imag() == 0.0 && x.real() < 0.0)
        return {0.0, -std::sqrt(-x.real())};
    return std::sqrt(x);
}

}  // namespace detail

// Character values as complex doubles, indexed by n mod q.
class ThetaSeries {
public:
    explicit ThetaSeries(SeriesSpec spec) : spec_(std::move(spec))
    {
        long q = spec_.chi.modulus();
        table_.resize(static_cast<std::size_t>(q));
        for (long n = 0; n < q; ++n)
            table_[static_cast<std::size_t>(n)] = spec_.chi.value_complex(n);
    }

    const SeriesSpec& spec() const { return spec_; }

    cdouble chi(long n) const { return table_[static_cast<std::size_t>(n % static_cast<long>(table_.size()))]; }

    // Number of terms after which e^{-2 pi n^2 y} < 1e-18.
    long cutoff(double y) const
    {
        if (!(y > 0.0))
            throw std::domain_error("theta needs Im z > 0");
        double n = std::ceil(std::sqrt(41.5 / (kTwoPi * y)));
        if (n > static_cast<double>(spec_.n_max))
            throw std::domain_error("height " + std::to_string(y) + " too small for the truncation budget");
        return static_cast<long>(n) + 1;
    }

    // sum chi(n) e(n^2 (shift + tau)), shift exact.
    cdouble eval(const detail::FracPhase& shift, cdouble tau) const
    {
        long N = cutoff(tau.imag());
        double tr = tau.real(), ti = tau.imag();
        cdouble acc = 0.0;
        for (long n = 1; n <= N; ++n) {
            cdouble c = chi(n);
            if (c == 0.0)
                continue;
            double n2 = static_cast<double>(n) * static_cast<double>(n);
            double ph = detail::frac(shift.of_square(n) + detail::frac(n2 * tr));
            acc += c * std::polar(std::exp(-kTwoPi * n2 * ti), kTwoPi * ph);
        }
        return acc;
    }

    cdouble eval(cdouble z) const { return eval(detail::FracPhase(Rational(0)), z); }

private:
    SeriesSpec spec_;
    std::vector<cdouble> table_;
};

inline cdouble theta_eval(const SeriesSpec& spec, cdouble z) { return ThetaSeries(spec).eval(z); }

// Points on a horocycle relative to sigma: z = -d/c + delta + iY when c != 0.
// Then sigma z = a/c - 1/(c^2 (delta + iY)) and j(sigma, z) = c (delta + iY).
class SlashEvaluator {
public:
    SlashEvaluator(const ThetaSeries& th, const Mat2Q& s) : th_(th), s_(s), shift_(Rational(0))
    {
        if (!s.c().is_zero()) {
            shift_ = detail::FracPhase(s.a() / s.c());
            c_ = s.c().to_double();
            d_over_c_ = s.d() / s.c();
        } else {
            a_ = s.a().to_double();
            b_ = s.b().to_double();
            d_ = s.d().to_double();
        }
    }

    bool has_c() const { return !s_.c().is_zero(); }
    const Rational& d_over_c() const { return d_over_c_; }

    // f|sigma at -d/c + w (c != 0) or at w (c = 0).
    cdouble at_offset(cdouble w) const
    {
        if (has_c()) {
            cdouble j = c_ * w;
            cdouble tau = -1.0 / (c_ * c_ * w);
            return th_.eval(shift_, tau) / detail::sqrt_half_open(j);
        }
        cdouble gz = (a_ * w + b_) / d_;
        return th_.eval(gz) / detail::sqrt_half_open(cdouble(d_, 0.0));
    }

    cdouble at(cdouble z) const
    {
        if (has_c())
            return at_offset(z + d_over_c_.to_double());
        return at_offset(z);
    }

private:
    const ThetaSeries& th_;
    Mat2Q s_;
    detail::FracPhase shift_;
    Rational d_over_c_;
    double c_ = 0, a_ = 1, b_ = 0, d_ = 1;
};

// j(sigma, z)^{-1/2} theta(sigma z)
inline cdouble hol_slash_half(const SeriesSpec& spec, const Mat2Q& s, cdouble z)
{
    ThetaSeries th(spec);
    return SlashEvaluator(th, s).at(z);
}

struct Extracted {
    Rational nu;
    cdouble value;
    double error = 0.0;  // rounding and aliasing estimate
};

struct ExtractionReport {
    double Y = 0.0;
    long K = 0;
    double periodicity_defect = 0.0;
    std::vector<Extracted> values;
};

// Y keeps the amplification e^{2 pi nu Y} below 1e4; K = 8 (nu_max + 1).
inline double default_height(double nu_max) { return std::log(1e4) / (kTwoPi * (nu_max + 1.0)); }
inline long default_samples(double nu_max) { return 8 * (static_cast<long>(std::ceil(nu_max)) + 1); }

// Discrete Fourier inversion on one period of the horocycle Im z = Y,
// centred on -d/c where the image heights are largest.
inline ExtractionReport fourier_extract(const SeriesSpec& spec, const Mat2Q& s, const std::vector<Rational>& freqs)
{
    ExtractionReport rep;
    if (freqs.empty())
        return rep;
    double nu_max = 0.0;
    for (auto& f : freqs)
        nu_max = std::max(nu_max, std::abs(f.to_double()));
    rep.Y = spec.Y > 0 ? spec.Y : default_height(nu_max);
    rep.K = spec.K > 0 ? spec.K : default_samples(nu_max);
    ThetaSeries th(spec);
    SlashEvaluator ev(th, s);
    const double Y = rep.Y;
    const long K = rep.K;
    // delta_k = -1/2 + k/K
    std::vector<cdouble> f(static_cast<std::size_t>(K));
    parallel_for(f.size(), [&](std::size_t k) {
        double delta = -0.5 + static_cast<double>(k) / static_cast<double>(K);
        f[k] = ev.at_offset({delta, Y});
    });
    double fmax = 0.0;
    for (auto& v : f)
        fmax = std::max(fmax, std::abs(v));
    {
        cdouble a = ev.at_offset({-0.5, Y}), b = ev.at_offset({0.5, Y});
        rep.periodicity_defect = std::abs(a - b) / std::max(1.0, std::abs(a));
    }
    for (auto& nu : freqs) {
        double n = nu.to_double();
        // e^{-2 pi i nu x_k} with x_k = -d/c + delta_k
        cdouble base = 1.0;
        if (ev.has_c()) {
            Rational t = nu * ev.d_over_c();
            base = std::polar(1.0, kTwoPi * detail::FracPhase(t).of(1));
        }
        cdouble acc = 0.0;
        for (long k = 0; k < K; ++k) {
            double delta = -0.5 + static_cast<double>(k) / static_cast<double>(K);
            double ph = detail::frac(-n * delta);
            acc += f[static_cast<std::size_t>(k)] * std::polar(1.0, kTwoPi * ph);
        }
        double amp = std::exp(kTwoPi * n * Y);
        cdouble v = amp * base * acc / static_cast<double>(K);
        double err = amp * fmax * 1e-14 + std::exp(-kTwoPi * static_cast<double>(K) * Y) * amp * fmax;
        rep.values.push_back({nu, v, err});
    }
    if (rep.periodicity_defect > 1e-8)
        throw std::runtime_error("slashed function is not 1-periodic (defect " +
                                 std::to_string(rep.periodicity_defect) + ")");
    return rep;
}

inline ExtractionReport fourier_extract(const SeriesSpec& spec, const Mat2Q& s, long nu_min, long nu_max)
{
    std::vector<Rational> fr;
    for (long n = nu_min; n <= nu_max; ++n)
        fr.emplace_back(n);
    return fourier_extract(spec, s, fr);
}

// ---------------------------------------------------------------------------
// Cusp parameter: the multiplier lambda in f(z + 1) = lambda f(z), lambda = e(kappa).

struct KappaScan {
    Rational kappa;
    double residual = 0.0;  // relative misfit of f(z+1) = e(kappa) f(z)
    double energy = 0.0;    // (1 + Re(conj e(kappa) lambda)) / 2, 1 for an exact fit
    double signal = 0.0;    // mean |f|^2 over the samples
    std::vector<double> residuals;  // per k/Q
};

// f_line(x) = f(x0 + x + iY) for x in [0, 2).
inline KappaScan cusp_parameter_scan(const std::function<cdouble(double)>& f_line, long Q, long K = 24)
{
    if (Q < 1 || Q > 24)
        throw std::invalid_argument("cusp_parameter_scan needs 1 <= Q <= 24");
    std::vector<cdouble> f0(static_cast<std::size_t>(K)), f1(static_cast<std::size_t>(K));
    parallel_for(2 * f0.size(), [&](std::size_t i) {
        std::size_t k = i % f0.size();
        double x = (static_cast<double>(k) + 0.5) / static_cast<double>(K);
        if (i < f0.size())
            f0[k] = f_line(x);
        else
            f1[k] = f_line(x + 1.0);
    });
    double norm = 0.0;
    cdouble cross = 0.0;
    for (std::size_t k = 0; k < f0.size(); ++k) {
        norm += std::norm(f0[k]);
        cross += f1[k] * std::conj(f0[k]);
    }
    KappaScan out;
    out.signal = norm / static_cast<double>(K);
    if (norm == 0.0)
        throw std::domain_error("cusp_parameter_scan: function vanishes on the samples");
    cdouble lambda = cross / norm;
    double best = INFINITY;
    long best_k = 0;
    for (long k = 0; k < Q; ++k) {
        cdouble e = std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(Q));
        double r = 0.0;
        for (std::size_t i = 0; i < f0.size(); ++i)
            r += std::norm(f1[i] - e * f0[i]);
        r = std::sqrt(r / norm);
        out.residuals.push_back(r);
        if (r < best) {
            best = r;
            best_k = k;
        }
    }
    out.kappa = Rational(best_k, Q);
    out.residual = best;
    cdouble e = std::polar(1.0, kTwoPi * static_cast<double>(best_k) / static_cast<double>(Q));
    out.energy = (1.0 + (std::conj(e) * lambda).real()) / 2.0;
    return out;
}

// Samples x in [-d/c - 1, -d/c + 1] so both x and x + 1 stay close to the pole.
inline KappaScan cusp_parameter_scan(const SeriesSpec& spec, const Mat2Q& s, long Q, double Y = 0.25, long K = 24)
{
    ThetaSeries th(spec);
    SlashEvaluator ev(th, s);
    return cusp_parameter_scan([&](double x) { return ev.at_offset({x - 1.0, Y}); }, Q, K);
}

// ---------------------------------------------------------------------------
// Real Fourier transform with the e_{inf,a} normalization:
// phi^(x) = |2a|^{1/2} int phi(y) e(2 a x y) dy, so phi^^(x) = phi(-x).

inline std::vector<cdouble> fourier_transform_inf(const std::function<cdouble(double)>& phi, double a,
                                                  const std::vector<double>& xs, double R = 8.0, double h = 0.005)
{
    long n = static_cast<long>(std::ceil(2 * R / h));
    std::vector<double> ys(static_cast<std::size_t>(n + 1));
    std::vector<cdouble> vals(ys.size());
    for (long k = 0; k <= n; ++k) {
        ys[static_cast<std::size_t>(k)] = -R + static_cast<double>(k) * h;
        vals[static_cast<std::size_t>(k)] = phi(ys[static_cast<std::size_t>(k)]);
    }
    double alpha = std::sqrt(std::abs(2 * a));
    std::vector<cdouble> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
        cdouble acc = 0.0;
        for (std::size_t k = 0; k < ys.size(); ++k) {
            double w = (k == 0 || k + 1 == ys.size()) ? 0.5 : 1.0;
            acc += w * vals[k] * std::polar(1.0, kTwoPi * 2 * a * xs[i] * ys[k]);
        }
        out[i] = alpha * h * acc;
    });
    return out;
}

// max |phi^^(x) - phi(-x)| over xs
inline double double_fourier_defect(const std::function<cdouble(double)>& phi, double a, const std::vector<double>& xs,
                                    double R = 8.0, double h = 0.005)
{
    long n = static_cast<long>(std::ceil(2 * R / h));
    std::vector<double> grid(static_cast<std::size_t>(n + 1));
    for (long k = 0; k <= n; ++k)
        grid[static_cast<std::size_t>(k)] = -R + static_cast<double>(k) * h;
    auto once = fourier_transform_inf(phi, a, grid, R, h);
    auto hat = [&](double y) {
        // grid lookup; the second transform only queries grid points
        long k = std::lround((y + R) / h);
        return once[static_cast<std::size_t>(std::clamp<long>(k, 0, n))];
    };
    auto twice = fourier_transform_inf(hat, a, xs, R, h);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        worst = std::max(worst, std::abs(twice[i] - phi(-xs[i])));
    return worst;
}

}  // namespace thetacusp
