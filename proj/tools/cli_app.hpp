#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "reltrace/coulomb.hpp"
#include "reltrace/kinematics.hpp"

namespace reltrace::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kInvalidArguments = 1, kNumericalFailure = 2 };

struct GridSpec {
    double lo = 10.0;
    double hi = 50.0;
    int count = 2000;

    /// "min:max:count"
    static GridSpec parse(const std::string& text);
    std::string to_string() const;
};

/// Everything that determines a run. Serialized verbatim into the JSON
/// sidecar so a run can be repeated from its metadata alone.
struct RunConfig {
    std::string command;  // "billiard compare", "coulomb spectrum", ...
    double a1 = 3.14159265358979323846;
    double a2 = 3.14159265358979323846;
    double a3 = 3.14159265358979323846;
    double L = 0.0;  // 0: geometric mean of the sides
    RelParams params;
    double eps_max = 50.0;
    std::string grid = "10:50:2000";
    int kmax = 20;
    double sigma = 0.25;
    double alpha = coulomb::kFineStructure;
    int nmax = 5;
    std::string out;

    /// Apply one key of a flat key-value configuration.
    void set(const std::string& key, const std::string& value);
    /// Flat key-value view; keys match the long flag names.
    std::map<std::string, std::string> to_map() const;
    void validate() const;
};

/// Reads a configuration file: either flat "key = value" lines ('#'
/// starts a comment) or a JSON sidecar written by a previous run.
/// Returns the command stored in the file, if any.
std::string load_config_file(const std::string& path, RunConfig& cfg);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reltrace::cli
