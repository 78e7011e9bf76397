#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "dkp/cli/config.hpp"

namespace dkp::cli {

enum ExitCode : int
{
    kSuccess = 0,
    kPhysicsFailure = 1,
    kUsageError = 2
};

/// Empty cells print as nothing in CSV and null in JSON.
using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

struct Table
{
    /// Printed as "# key: value" lines in CSV, a "meta" object in JSON.
    std::vector<std::pair<std::string, Cell>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

void write_csv(Table const& t, std::ostream& os);
void write_json(Table const& t, std::ostream& os);

struct CommandResult
{
    Table table;
    int exit_code{kSuccess};
};

CommandResult cmd_energies(RunConfig const& cfg);
CommandResult cmd_table2(RunConfig const& cfg);
CommandResult cmd_wavefunction(RunConfig const& cfg);
CommandResult cmd_verify(RunConfig const& cfg);
CommandResult cmd_approx(RunConfig const& cfg);

/// Full front end: parses `args` (without the program name), resolves the
/// configuration, runs one subcommand and writes its table.
int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

/// Reference eigenvalues, MeV, indexed [column][n][J] with column 0 for
/// a = 0.005 fm^-1 and column 1 for a = 0.015 fm^-1.
extern double const kTable2[2][6][6];
inline constexpr double kTable2Screening[2] = {0.005, 0.015};

/// The (n = 5, J = 5, a = 0.015) entry repeats (n = 0, J = 5, a = 0.015).
bool table2_suspect(unsigned column, unsigned n, unsigned J);

} // namespace dkp::cli
