#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "commands.hpp"
#include "config.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "both";
};

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--config", opts.config_path, "JSON experiment description")
        ->required();
    sub->add_option("--out", opts.out_dir, "output directory (created if missing)");
    sub->add_option("--format", opts.format, "csv | md | both")
        ->check(CLI::IsMember({"csv", "md", "both"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-point iteration laboratory"};
    app.require_subcommand(1);

    bool seedless = false;
    app.add_flag("--seedless", seedless,
                 "accepted for interface compatibility; every run is deterministic");

    CommonOpts opts;
    std::string active;
    for (const char* name : {"table", "compare", "stability", "datadep", "ivp"}) {
        CLI::App* sub = app.add_subcommand(name);
        add_common(sub, opts);
        sub->callback([name, &active] { active = name; });
    }

    std::string expr_text;
    double at_value = 0.0;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate an expression at a point");
    eval_cmd->add_option("--expr", expr_text, "expression in the operator grammar")
        ->required();
    eval_cmd->add_option("--at", at_value, "evaluation point")->required();
    eval_cmd->callback([&active] { active = "eval"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (active == "eval") return fpl::cli::run_eval(expr_text, at_value);
        return fpl::cli::run_command(active, opts.config_path, opts.out_dir,
                                     fpl::cli::format_from_name(opts.format));
    } catch (const fpl::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const fpl::cli::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
