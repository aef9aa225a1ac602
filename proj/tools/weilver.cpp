#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "weil/verify.hpp"

using namespace weil;

int main(int argc, char** argv) {
    CLI::App app{"weilver: exact Clifford-theory verification for Weil representations of "
                 "unitary groups over finite involutive local rings"};
    app.require_subcommand(1);

    Config cfg;
    std::string case_name = "symplectic";
    auto* verify = app.add_subcommand("verify", "run the verification suites for one instance");
    verify->add_option("--case", case_name, "symplectic|unramified|ramified-odd|ramified-even")
        ->required();
    verify->add_option("--p", cfg.p, "odd prime residue characteristic")->required();
    verify->add_option("--level", cfg.level, "ring level: e (symplectic/unramified) or ell (ramified)")
        ->required();
    verify->add_option("--m", cfg.m, "module rank (>= 2)")->required();
    verify->add_option("--form-type", cfg.form_type, "hermitian type 1 or 2 (ramified-even only)");
    verify->add_option("--ideal", cfg.ideal_i, "ideal exponent i (works with r^i)")->required();
    verify->add_option("--checks", cfg.checks, "counts|abelian|nonabelian|all [all]");
    verify->add_option("--arith", cfg.arith, "exact|float-shadow [exact]");
    verify->add_option("--cache-dir", cfg.cache_dir, "group enumeration cache directory");
    verify->add_option("--report", cfg.report_path, "write the JSON report to this path");
    verify->add_option("--max-group-order", cfg.max_group_order,
                       "refuse enumerations beyond this size [1000000]");
    bool no_timings = false;
    verify->add_flag("--no-timings", no_timings, "zero out timing fields (byte-stable reports)");

    CLI11_PARSE(app, argc, argv);

    if (cfg.cache_dir.empty()) {
        const char* env = std::getenv("WEIL_CACHE_DIR");
        if (env) cfg.cache_dir = env;
    }
    cfg.timings = !no_timings;

    try {
        cfg.rcase = parse_case(case_name);
        if (cfg.rcase == RingCase::RamifiedEven && cfg.form_type == 0) cfg.form_type = 1;
        Report rep = run_verify(cfg);
        for (const auto& c : rep.checks) {
            const char* tag = c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL");
            std::cout << tag << "  " << c.id << "  [" << c.anchor << "]  expected: " << c.expected
                      << "  computed: " << c.computed << "\n";
        }
        std::cout << "summary: " << rep.num_pass << " pass, " << rep.num_fail << " fail, "
                  << rep.num_skip << " skip\n";
        if (cfg.report_path.empty()) std::cout << rep.to_json() << "\n";
        return rep.num_fail == 0 ? 0 : 1;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "usage error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    }
}
