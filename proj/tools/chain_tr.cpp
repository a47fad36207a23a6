#include "chaintr/cli/run.hpp"
#include "chaintr/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace chaintr;
    CLI::App app{"Topological recursion for the chain of matrices"};
    app.require_subcommand(1, 1);

    RunSpec spec;
    std::string ring, gauge;
    std::vector<std::string> moments;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--model", spec.model_path, "model or raw-curve JSON file")->required();
        sub->add_option("--gmax", spec.gmax, "largest genus (<= 5)");
        sub->add_option("--nmax", spec.nmax, "largest number of arguments (<= 4)");
        sub->add_option("--ring", ring, "rational | float | series:<param>:<order>");
        sub->add_option("--gauge", gauge, "symmetric | monic");
        sub->add_option("--out", spec.out_path, "output file (default: stdout)");
        sub->add_option("--tol", spec.tol, "tolerance of sheet sums and symplectic comparison");
    };

    auto* curve = app.add_subcommand("curve", "parametrization, branch points and moduli report");
    common(curve);
    auto* corr = app.add_subcommand("correlators", "omega_{g,n} summaries and moments");
    common(corr);
    corr->add_option("--moment", moments, "moment request g:p1,p2,... (repeatable)");
    corr->add_flag("--terms", spec.terms, "list every pole term");
    auto* fe = app.add_subcommand("free-energy", "F_g for 2 <= g <= gmax");
    common(fe);
    auto* check = app.add_subcommand("check", "invariant suite");
    common(check);
    check->add_option("--param", spec.params, "variation parameters to test (repeatable)");
    check->add_option("--fd-step", spec.fd_step, "central-difference step");
    check->add_option("--fd-tol", spec.fd_tol, "relative tolerance of the variation check");
    bool no_sheets = false, no_vars = false, no_sympl = false;
    check->add_flag("--no-sheet-sums", no_sheets);
    check->add_flag("--no-variations", no_vars);
    check->add_flag("--no-symplectic", no_sympl);
    auto* derive = app.add_subcommand("derive", "variation functionals and dF_g");
    common(derive);
    derive->add_option("--param", spec.params, "parameter such as g4_1, c_1, lambda_2, T, t_1-t_2 (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::schema);
    }

    spec.command = app.get_subcommands().front()->get_name();
    spec.check_sheets = !no_sheets;
    spec.check_variations = !no_vars;
    spec.check_symplectic = !no_sympl;
    try {
        if (!ring.empty()) spec.ring = parse_ring(ring);
        if (!gauge.empty()) spec.gauge = parse_gauge(gauge);
        for (const auto& m : moments) spec.moments.push_back(parse_moment_request(m));
    } catch (const ChainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    }
    return run(spec, std::cerr);
}
