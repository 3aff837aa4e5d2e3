// JSON and CSV output for coefficient tables and matrices.
#pragma once

#include "thetacusp/oracle.hpp"
#include "thetacusp/theta_engine.hpp"

#include <json.hpp>

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace thetacusp {

using json = nlohmann::ordered_json;

inline json cyclo_json(const Cyclo& x)
{
    json coeffs = json::array();
    for (auto& c : x.coeffs())
        coeffs.push_back(c.str());
    auto z = x.embed();
    return {{"order", x.order()}, {"coeffs", coeffs}, {"re", z.real()}, {"im", z.imag()}};
}

inline json matrix_json(const CycloMatrix& m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(cyclo_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline json mat2q_json(const Mat2Q& g)
{
    return json::array({json::array({g.a().str(), g.b().str()}), json::array({g.c().str(), g.d().str()})});
}

// One row of a table; exact is absent for oracle rows.
struct TableRow {
    long nu = 0;
    std::optional<Cyclo> exact;
    cdouble value;
};

struct CoeffTable {
    std::string source = "engine";
    long level = 576;
    std::optional<long> p, j;
    Cusp cusp;
    Mat2Q sigma;
    std::vector<TableRow> rows;
};

inline CoeffTable engine_table(const CuspEngine& eng, const Cusp& cusp, long nu_min, long nu_max)
{
    CoeffTable t;
    t.level = eng.twist().level();
    if (!eng.twist().is_first()) {
        t.p = eng.twist().p;
        t.j = eng.twist().j;
    }
    t.cusp = cusp;
    t.sigma = eng.sigma();
    for (auto& r : eng.table(nu_min, nu_max))
        t.rows.push_back({r.nu, r.exact, r.approx});
    return t;
}

inline CoeffTable oracle_table(const Twist& tw, const Cusp& cusp, const Mat2Q& sigma, long nu_min, long nu_max)
{
    CoeffTable t;
    t.source = "oracle";
    t.level = tw.level();
    if (!tw.is_first()) {
        t.p = tw.p;
        t.j = tw.j;
    }
    t.cusp = cusp;
    t.sigma = sigma;
    SeriesSpec spec;
    spec.chi = tw.character();
    auto rep = fourier_extract(spec, sigma, nu_min, nu_max);
    for (auto& v : rep.values)
        t.rows.push_back({to_long(v.nu.num()), std::nullopt, v.value});
    return t;
}

inline json table_json(const CoeffTable& t)
{
    json tw = {{"p", t.p ? json(*t.p) : json(nullptr)}, {"j", t.j ? json(*t.j) : json(nullptr)}};
    json cusp = {{"u", t.cusp.u}, {"w", t.cusp.w}};
    json coeffs = json::array();
    for (auto& r : t.rows) {
        json c = {{"nu", r.nu}};
        if (r.exact) {
            c["exact_order"] = r.exact->order();
            json e = json::array();
            for (auto& x : r.exact->coeffs())
                e.push_back(x.str());
            c["exact_coeffs"] = e;
        } else {
            c["exact_order"] = nullptr;
            c["exact_coeffs"] = nullptr;
        }
        c["re"] = r.value.real();
        c["im"] = r.value.imag();
        c["abs"] = std::abs(r.value);
        coeffs.push_back(c);
    }
    return {{"source", t.source}, {"level", t.level},       {"twist", tw},
            {"cusp", cusp},       {"scaling_matrix", mat2q_json(t.sigma)}, {"coefficients", coeffs}};
}

inline std::string fmt17(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string csv_header() { return "source,level,p,j,u,w,nu,exact_order,exact_coeffs,re,im,abs\n"; }

// exact_coeffs are ';'-separated rationals
inline std::string table_csv(const CoeffTable& t, bool header = true)
{
    std::ostringstream os;
    if (header)
        os << csv_header();
    for (auto& r : t.rows) {
        os << t.source << ',' << t.level << ',' << (t.p ? std::to_string(*t.p) : "") << ','
           << (t.j ? std::to_string(*t.j) : "") << ',' << t.cusp.u << ',' << t.cusp.w << ',' << r.nu << ',';
        if (r.exact) {
            os << r.exact->order() << ',';
            auto cs = r.exact->coeffs();
            for (std::size_t i = 0; i < cs.size(); ++i)
                os << (i ? ";" : "") << cs[i].str();
        } else {
            os << ',';
        }
        os << ',' << fmt17(r.value.real()) << ',' << fmt17(r.value.imag()) << ',' << fmt17(std::abs(r.value)) << '\n';
    }
    return os.str();
}

// Structural check of a coefficient table document; returns the first problem found.
inline std::optional<std::string> validate_table_json(const json& d)
{
    auto need = [&](const json& o, const char* k, auto pred, const char* what) -> std::optional<std::string> {
        if (!o.is_object() || !o.contains(k))
            return std::string("missing key ") + k;
        if (!pred(o.at(k)))
            return std::string(k) + " must be " + what;
        return std::nullopt;
    };
    auto is_int = [](const json& v) { return v.is_number_integer(); };
    auto is_num = [](const json& v) { return v.is_number(); };
    auto int_or_null = [](const json& v) { return v.is_null() || v.is_number_integer(); };
    if (auto e = need(d, "source", [](const json& v) { return v == "engine" || v == "oracle"; }, "engine|oracle"))
        return e;
    if (auto e = need(d, "level", is_int, "an integer"))
        return e;
    if (auto e = need(d, "twist", [](const json& v) { return v.is_object(); }, "an object"))
        return e;
    for (auto k : {"p", "j"})
        if (auto e = need(d["twist"], k, int_or_null, "an integer or null"))
            return e;
    if (auto e = need(d, "cusp", [](const json& v) { return v.is_object(); }, "an object"))
        return e;
    for (auto k : {"u", "w"})
        if (auto e = need(d["cusp"], k, is_int, "an integer"))
            return e;
    if (auto e = need(d, "scaling_matrix",
                      [](const json& v) {
                          if (!v.is_array() || v.size() != 2)
                              return false;
                          for (auto& r : v)
                              if (!r.is_array() || r.size() != 2 || !r[0].is_string() || !r[1].is_string())
                                  return false;
                          return true;
                      },
                      "a 2x2 array of rational strings"))
        return e;
    if (auto e = need(d, "coefficients", [](const json& v) { return v.is_array(); }, "an array"))
        return e;
    for (auto& c : d["coefficients"]) {
        if (auto e = need(c, "nu", is_int, "an integer"))
            return e;
        if (auto e = need(c, "exact_order", int_or_null, "an integer or null"))
            return e;
        if (auto e = need(c, "exact_coeffs",
                          [](const json& v) {
                              if (v.is_null())
                                  return true;
                              if (!v.is_array())
                                  return false;
                              for (auto& x : v)
                                  if (!x.is_string())
                                      return false;
                              return true;
                          },
                          "an array of strings or null"))
            return e;
        if (c["exact_order"].is_null() != c["exact_coeffs"].is_null())
            return std::string("exact_order and exact_coeffs must both be present or both null");
        for (auto k : {"re", "im", "abs"})
            if (auto e = need(c, k, is_num, "a number"))
                return e;
    }
    return std::nullopt;
}

}  // namespace thetacusp
