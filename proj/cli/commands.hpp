#pragma once

#include <string>

namespace fpl::cli {

enum class Format { csv, md, both };

Format format_from_name(const std::string& name);

/// Loads the config, checks its "command" field against the invoked
/// subcommand, runs the experiment and writes report files into out_dir.
/// Throws ConfigError (exit 2) or NumericError (exit 3).
int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir, Format fmt);

/// Evaluates an expression at a point and prints the value.
int run_eval(const std::string& expr_text, double at);

}  // namespace fpl::cli
