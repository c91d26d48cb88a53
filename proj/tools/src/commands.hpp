#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace coalitiond::cli {

/// Flag overrides applied on top of a config file; flags win.
struct RunOverrides
{
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon;
    std::optional<std::string> tag;
    std::optional<std::filesystem::path> out;
};

// Each command returns the process exit status and reports errors on `err`.

int cmd_run(const std::filesystem::path& config, const RunOverrides& overrides, std::ostream& out, std::ostream& err);
int cmd_shapley_exact(const std::filesystem::path& game, std::ostream& out, std::ostream& err);
int cmd_core_check(const std::filesystem::path& game, const std::filesystem::path& x_csv, double tol,
                   std::ostream& out, std::ostream& err);
int cmd_benchmark(const std::filesystem::path& config, std::ostream& out, std::ostream& err);
int cmd_validate(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

/// Reads one row of comma-separated numbers; an optional non-numeric header line is skipped.
std::vector<double> read_vector_csv(const std::filesystem::path& path);

} // namespace coalitiond::cli
