// Command implementations behind tools/theta_cusp.
#pragma once

#include "thetacusp/io.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace thetacusp {

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitVerify = 2 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    long level = 0;  // 0: derived from p
    long p = 0;      // 0: first twist
    long j = 0;      // 0: default 1 for higher twists
    long g = 0;      // generator override
    std::vector<std::string> cusps;  // empty: every cusp (command permitting)
    long nu_min = 1;
    long nu_max = 100;
    std::string format = "json";
    std::string source = "engine";
    std::string path;  // empty: factored for verify-gg, direct elsewhere
    std::string gen;          // matrix: flip | upper | diag
    std::string a = "1";      // matrix: parameter of upper / diag
    std::string basis = "B2";
    long m_max = 10;
    double tol = 1e-6;
};

inline constexpr long kMaxNu = 400;

inline Twist resolve_twist(const RunConfig& c)
{
    long p = c.p;
    if (c.level != 0) {
        if (c.level == 576) {
            if (p != 0)
                throw UsageError("--level 576 is the first twist; drop --p");
        } else {
            long q = 0;
            for (long cand : {5L, 7L, 11L, 13L})
                if (c.level == 576 * cand * cand)
                    q = cand;
            if (q == 0)
                throw UsageError("unsupported level " + std::to_string(c.level) + " (use 576 or 576 p^2, p in 5,7,11,13)");
            if (p != 0 && p != q)
                throw UsageError("--level and --p disagree");
            p = q;
        }
    }
    if (p == 0) {
        if (c.j != 0)
            throw UsageError("--j needs --p");
        return Twist::first();
    }
    if (p != 5 && p != 7 && p != 11 && p != 13)
        throw UsageError("unsupported prime " + std::to_string(p) + " (use 5, 7, 11 or 13)");
    long j = c.j == 0 ? 1 : c.j;
    if (j < 1 || j > (p - 3) / 2)
        throw UsageError("--j must lie in 1.." + std::to_string((p - 3) / 2) + " for p = " + std::to_string(p));
    try {
        return Twist::higher(p, j, c.g);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

inline std::vector<Cusp> resolve_cusps(const RunConfig& c, const Twist& tw)
{
    if (c.cusps.empty())
        return cusps_of_gamma0(tw.level());
    std::vector<Cusp> out;
    for (auto& s : c.cusps) {
        Cusp cu;
        try {
            cu = Cusp::parse(s);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (!cu.is_infinity() && tw.level() % cu.w != 0)
            throw UsageError("cusp " + s + ": denominator does not divide the level " + std::to_string(tw.level()));
        out.push_back(cu);
    }
    return out;
}

inline void check_nu_range(const RunConfig& c)
{
    if (c.nu_min < 0)
        throw UsageError("--numin must be nonnegative");
    if (c.nu_max > kMaxNu)
        throw UsageError("--nmax is capped at " + std::to_string(kMaxNu));
}

inline void check_format(const RunConfig& c, std::initializer_list<const char*> allowed)
{
    for (auto f : allowed)
        if (c.format == f)
            return;
    throw UsageError("unsupported --format " + c.format);
}

inline EvalPath resolve_path(const RunConfig& c, EvalPath fallback = EvalPath::Direct)
{
    if (c.path.empty())
        return fallback;
    if (c.path == "direct")
        return EvalPath::Direct;
    if (c.path == "factored")
        return EvalPath::Factored;
    throw UsageError("--path must be direct or factored");
}

inline int cmd_coeffs(const RunConfig& c, std::ostream& out)
{
    Twist tw = resolve_twist(c);
    check_nu_range(c);
    check_format(c, {"json", "csv"});
    if (c.source != "engine" && c.source != "oracle")
        throw UsageError("--source must be engine or oracle");
    EvalPath path = resolve_path(c);
    auto cusps = resolve_cusps(c, tw);
    std::vector<CoeffTable> tables;
    for (auto& cu : cusps) {
        CuspEngine eng(tw, cu, path);
        tables.push_back(c.source == "engine" ? engine_table(eng, cu, c.nu_min, c.nu_max)
                                              : oracle_table(tw, cu, eng.sigma(), c.nu_min, c.nu_max));
    }
    if (c.format == "csv") {
        bool first = true;
        for (auto& t : tables) {
            out << table_csv(t, first);
            first = false;
        }
        return kExitOk;
    }
    if (tables.size() == 1) {
        out << table_json(tables[0]).dump(2) << '\n';
    } else {
        json arr = json::array();
        for (auto& t : tables)
            arr.push_back(table_json(t));
        out << arr.dump(2) << '\n';
    }
    return kExitOk;
}

inline Rational parse_rational(const std::string& s)
{
    try {
        return Rational::parse(s);
    } catch (const std::exception&) {
        throw UsageError("cannot parse rational '" + s + "'");
    }
}

inline void print_text_matrix(std::ostream& out, const CycloMatrix& m)
{
    auto e = m.embed();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            out << (j ? " | " : "") << m(i, j).str();
        out << '\n';
    }
    out << "embedding:\n";
    for (auto& row : e) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            out << (j ? "  " : "") << fmt17(row[j].real()) << (row[j].imag() < 0 ? "-" : "+")
                << fmt17(std::abs(row[j].imag())) << "i";
        }
        out << '\n';
    }
}

// Generator images: xi_2 (p = 2), xi_3 (p = 3), rho_p on V (p >= 5).
inline int cmd_matrix(const RunConfig& c, std::ostream& out)
{
    check_format(c, {"json", "text"});
    long p = c.p;
    if (p != 2 && p != 3 && p != 5 && p != 7 && p != 11 && p != 13)
        throw UsageError("unsupported prime " + std::to_string(p) + " for matrix (use 2, 3, 5, 7, 11 or 13)");
    if (c.gen != "flip" && c.gen != "upper" && c.gen != "diag")
        throw UsageError("--gen must be flip, upper or diag");
    Rational a = parse_rational(c.a);
    if (c.gen == "upper" && a.is_zero() == false && vp(a, p) < 0)
        throw UsageError("upper parameter must be " + std::to_string(p) + "-integral");
    if (c.gen == "diag" && (a.is_zero() || vp(a, p) != 0))
        throw UsageError("diag parameter must be a " + std::to_string(p) + "-adic unit");
    json doc = {{"p", p}, {"gen", c.gen}};
    if (c.gen != "flip")
        doc["a"] = a.str();
    if (p == 2 || p == 3) {
        Integer M(p == 2 ? 8 : 3);
        Mat2Q g = c.gen == "flip" ? Mat2Q::flip(Rational(M))
                  : c.gen == "upper" ? Mat2Q::upper(a / Rational(M))
                                     : Mat2Q::diag(a);
        Cyclo v = p == 2 ? xi2(g) : xi3(g);
        doc["character"] = p == 2 ? "xi2" : "xi3";
        doc["matrix"] = mat2q_json(g);
        doc["value"] = cyclo_json(v);
        if (c.format == "text") {
            out << (p == 2 ? "xi2" : "xi3") << "(" << g.str() << ") = " << v.str() << '\n';
            auto z = v.embed();
            out << "embedding: " << fmt17(z.real()) << (z.imag() < 0 ? "-" : "+") << fmt17(std::abs(z.imag()))
                << "i\n";
            return kExitOk;
        }
        out << doc.dump(2) << '\n';
        return kExitOk;
    }
    if (c.basis != "B1" && c.basis != "B2")
        throw UsageError("--basis must be B1 or B2");
    long gen = c.g;
    if (gen != 0 && !is_primitive_root(gen, p))
        throw UsageError(std::to_string(gen) + " does not generate (Z/" + std::to_string(p) + ")^x");
    auto ctx = weil_context(p, gen);
    Mat2Q g = c.gen == "flip" ? Mat2Q::flip(Rational(p))
              : c.gen == "upper" ? Mat2Q::upper(a / Rational(p))
                                 : Mat2Q::diag(a);
    CycloMatrix m = ctx->rho_B1(g).entries;
    if (c.basis == "B2")
        m = ctx->to_B2(m);
    doc["generator"] = ctx->generator();
    doc["basis"] = c.basis;
    doc["matrix"] = mat2q_json(g);
    doc["entries"] = matrix_json(m);
    if (c.format == "text") {
        out << "rho_" << p << "(" << g.str() << ") in " << c.basis << " (g = " << ctx->generator() << ")\n";
        print_text_matrix(out, m);
        return kExitOk;
    }
    out << doc.dump(2) << '\n';
    return kExitOk;
}

inline int cmd_verify_gg(const RunConfig& c, std::ostream& out)
{
    check_format(c, {"json", "text"});
    if (c.m_max < 1 || c.m_max * c.m_max > kMaxNu)
        throw UsageError("--mmax must lie in 1..20");
    auto rep = gg_check(c.m_max, resolve_path(c, EvalPath::Factored));
    if (c.format == "json") {
        json fails = json::array();
        for (auto& e : rep.entries)
            if (!e.ok)
                fails.push_back({{"cusp", e.cusp.str()}, {"v5", e.v5}, {"expected", e.expected}, {"detail", e.detail}});
        json pat = json::object();
        for (auto& e : rep.entries)
            pat[e.expected] = pat.value(e.expected, 0) + 1;
        out << json{{"level", rep.level},
                    {"cusps", rep.cusps},
                    {"passed", rep.passed},
                    {"classes", {{"5 !| w", rep.class_count[0]}, {"5 || w", rep.class_count[1]}, {"25 | w", rep.class_count[2]}}},
                    {"patterns", pat},
                    {"constants_ok", rep.constants_ok},
                    {"identity_ok", rep.identity_ok},
                    {"product_ok", rep.product_ok},
                    {"product_checked", rep.product_checked},
                    {"failures", fails},
                    {"ok", rep.ok()}}
                   .dump(2)
            << '\n';
    } else {
        out << "level " << rep.level << ": " << rep.passed << "/" << rep.cusps << " cusps match\n"
            << "  5 !| w: " << rep.class_count[0] << ", 5 || w: " << rep.class_count[1]
            << ", 25 | w: " << rep.class_count[2] << '\n'
            << "  constants " << (rep.constants_ok ? "ok" : "FAIL") << ", identity "
            << (rep.identity_ok ? "ok" : "FAIL") << ", closed-form product "
            << (rep.product_ok ? "ok" : "FAIL") << " (" << rep.product_checked << " cusps)\n";
        for (auto& e : rep.entries)
            if (!e.ok)
                out << "  FAIL " << e.cusp.str() << " expected " << e.expected << ": " << e.detail << '\n';
    }
    return rep.ok() ? kExitOk : kExitVerify;
}

inline int cmd_oracle_compare(const RunConfig& c, std::ostream& out)
{
    Twist tw = resolve_twist(c);
    check_nu_range(c);
    check_format(c, {"json", "text"});
    EvalPath path = resolve_path(c);
    auto cusps = resolve_cusps(c, tw);
    struct Bad {
        Cusp cusp;
        long nu;
        double delta;
    };
    std::vector<Bad> bad;
    json per = json::array();
    double worst = 0.0;
    if (c.nu_min <= c.nu_max) {
        SeriesSpec spec;
        spec.chi = tw.character();
        for (auto& cu : cusps) {
            CuspEngine eng(tw, cu, path);
            auto rep = fourier_extract(spec, eng.sigma(), c.nu_min, c.nu_max);
            double cw = 0.0;
            for (auto& v : rep.values) {
                long nu = to_long(v.nu.num());
                double d = std::abs(v.value - eng.coefficient(nu).approx);
                cw = std::max(cw, d);
                if (d >= c.tol)
                    bad.push_back({cu, nu, d});
            }
            worst = std::max(worst, cw);
            per.push_back({{"cusp", cu.str()}, {"max_delta", cw}});
        }
    }
    bool ok = bad.empty();
    if (c.format == "json") {
        json b = json::array();
        for (auto& x : bad)
            b.push_back({{"cusp", x.cusp.str()}, {"nu", x.nu}, {"delta", x.delta}});
        out << json{{"level", tw.level()},
                    {"twist", {{"p", tw.is_first() ? json(nullptr) : json(tw.p)},
                               {"j", tw.is_first() ? json(nullptr) : json(tw.j)}}},
                    {"nu_min", c.nu_min},
                    {"nu_max", c.nu_max},
                    {"tolerance", c.tol},
                    {"max_delta", worst},
                    {"per_cusp", per},
                    {"violations", b},
                    {"ok", ok}}
                   .dump(2)
            << '\n';
    } else {
        out << "level " << tw.level() << ", " << cusps.size() << " cusps, nu " << c.nu_min << ".." << c.nu_max
            << ": max |delta| = " << fmt17(worst) << (ok ? " (ok)" : " (FAIL)") << '\n';
        for (auto& x : bad)
            out << "  " << x.cusp.str() << " nu=" << x.nu << " delta=" << fmt17(x.delta) << '\n';
    }
    return ok ? kExitOk : kExitVerify;
}

inline int cmd_cusps(const RunConfig& c, std::ostream& out)
{
    Twist tw = resolve_twist(c);
    check_format(c, {"json", "csv"});
    long N = tw.level();
    auto cusps = cusps_of_gamma0(N);
    if (c.format == "csv") {
        out << "u,w,width,a,b,c,d\n";
        for (auto& cu : cusps) {
            auto s = scaling_for_cusp(cu, Integer(tw.M())).sigma;
            out << cu.u << ',' << cu.w << ',' << cusp_width(cu, N) << ',' << s.a().str() << ',' << s.b().str() << ','
                << s.c().str() << ',' << s.d().str() << '\n';
        }
        return kExitOk;
    }
    json arr = json::array();
    for (auto& cu : cusps)
        arr.push_back({{"u", cu.u},
                       {"w", cu.w},
                       {"width", cusp_width(cu, N)},
                       {"scaling_matrix", mat2q_json(scaling_for_cusp(cu, Integer(tw.M())).sigma)}});
    out << json{{"level", N}, {"count", cusps.size()}, {"cusps", arr}}.dump(2) << '\n';
    return kExitOk;
}

inline int run_command(const RunConfig& c, std::ostream& out)
{
    if (c.command == "coeffs")
        return cmd_coeffs(c, out);
    if (c.command == "matrix")
        return cmd_matrix(c, out);
    if (c.command == "verify-gg")
        return cmd_verify_gg(c, out);
    if (c.command == "oracle-compare")
        return cmd_oracle_compare(c, out);
    if (c.command == "cusps")
        return cmd_cusps(c, out);
    throw UsageError("unknown command " + c.command);
}

}  // namespace thetacusp
