// theta_cusp: coefficient tables, generator matrices, conjecture check, oracle comparison.
#include "thetacusp/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace thetacusp;

namespace {

void twist_flags(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--level", c.level, "576 (first twist) or 576 p^2");
    sub->add_option("--p", c.p, "twist prime (5, 7, 11, 13)");
    sub->add_option("--j", c.j, "psi_j index, 1..(p-3)/2 (default 1)");
    sub->add_option("--g", c.g, "generator of (Z/p)^x (default: least primitive root)");
}

void range_flags(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--cusp", c.cusps, "cusp u/w or inf (repeatable; default all cusps)");
    sub->add_option("--numin", c.nu_min, "first frequency");
    sub->add_option("--nmax", c.nu_max, "last frequency (at most 400)");
    sub->add_option("--path", c.path, "direct | factored evaluation of sigma^-1");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fourier coefficients of twisted theta functions at cusps"};
    app.require_subcommand(1);
    RunConfig c;
    std::string out_path;
    app.add_option("--out", out_path, "write output to this file");

    auto* coeffs = app.add_subcommand("coeffs", "coefficient table at one or more cusps");
    twist_flags(coeffs, c);
    range_flags(coeffs, c);
    coeffs->add_option("--format", c.format, "json | csv");
    coeffs->add_option("--source", c.source, "engine | oracle");

    auto* matrix = app.add_subcommand("matrix", "generator image under xi_2, xi_3 or rho_p");
    matrix->add_option("--p", c.p, "2, 3, 5, 7, 11 or 13")->required();
    matrix->add_option("--gen", c.gen, "flip | upper | diag")->required();
    matrix->add_option("--a", c.a, "parameter of upper / diag");
    matrix->add_option("--basis", c.basis, "B1 | B2 (p >= 5)");
    matrix->add_option("--g", c.g, "generator of (Z/p)^x");
    matrix->add_option("--format", c.format, "json | text");

    auto* gg = app.add_subcommand("verify-gg", "absolute-value patterns at every cusp of Gamma_0(14400)");
    gg->add_option("--mmax", c.m_max, "check nu = m^2 for m <= mmax");
    gg->add_option("--path", c.path, "direct | factored (default factored)");
    gg->add_option("--format", c.format, "json | text");

    auto* cmp = app.add_subcommand("oracle-compare", "engine against numerical extraction");
    twist_flags(cmp, c);
    range_flags(cmp, c);
    cmp->add_option("--tol", c.tol, "tolerance on |engine - oracle|");
    cmp->add_option("--format", c.format, "json | text");

    auto* cusps = app.add_subcommand("cusps", "cusp representatives and scaling matrices");
    twist_flags(cusps, c);
    cusps->add_option("--format", c.format, "json | csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    c.command = app.get_subcommands().front()->get_name();

    try {
        if (out_path.empty())
            return run_command(c, std::cout);
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "error: cannot open " << out_path << '\n';
            return kExitUsage;
        }
        return run_command(c, f);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return kExitVerify;
    }
}
