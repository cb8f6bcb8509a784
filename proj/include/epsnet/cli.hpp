#pragma once

// Batch front-end: scenario files, check execution, JSON/CSV reports and the
// command line.

#include "epsnet/analysis.hpp"
#include "epsnet/asymptotics.hpp"
#include "epsnet/embedding.hpp"
#include "epsnet/error.hpp"
#include "epsnet/net.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace epsnet::cli {

using json = nlohmann::ordered_json;

/// Every default in one place; echoed into each report.
struct Defaults {
    int version = 1;
    EpsGrid grid;
    std::vector<double> lambdas{0.5, 2.0, 3.0};
    double m = 8.0;
    int M = 4;
    Tolerances tol;
    double assoc_tol = 1e-4;
    int pairing_kmax = 14;
    int zerodiv_budget = 12;
    std::vector<double> tempered_radii{1.0, 10.0, 100.0};

    json to_json() const;
};

const Defaults& defaults();

/// Check names accepted in scenarios; the command line maps its subcommands
/// (and modes) onto these.
const std::vector<std::string>& check_names();

/// Scenario violation, located by a JSON pointer.
class SchemaError : public Error {
public:
    SchemaError(std::string pointer, const std::string& message);
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

/// Command-line settings that override the scenario.
struct RunOptions {
    std::optional<int> grid_kmin;
    std::optional<int> grid_kmax;
    std::optional<int> moments;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    bool ignore_expect = false;
    bool timing = false;  // wall times make reports non-reproducible, so they are opt-in
    std::string source = "command line";
};

struct Scenario {
    json doc;
    EpsGrid grid;
    int M = 4;
    std::shared_ptr<const Mollifier> rho;  // built only when some net needs it
    std::map<std::string, Net> nets;
    std::map<std::string, CompactSet> compacts;
    std::map<std::string, TestFunction> testfns;
    std::vector<json> checks;
};

/// Validate and build. Throws SchemaError (with the pointer of the offending
/// value) on any violation, expression syntax errors included.
Scenario parse_scenario(const json& doc, const RunOptions& opt = {});
Scenario load_scenario(const std::string& path, const RunOptions& opt = {});

struct Report {
    json doc;
    int exit_code = 0;
};

/// Runs the checks in declaration order. Errors inside a check become an
/// "Error" record and exit code 3.
Report run_scenario(const Scenario& s, const RunOptions& opt = {});

/// "json" or "csv" (the flat check,k,eps,value table).
std::string render(const Report& r, const std::string& format);
/// Writes to `path`, or to stdout when it is empty or "-".
void emit_report(const Report& r, const std::string& path, const std::string& format);

/// Entry point of the epsnet tool. Exit codes: 0 all checks passed, 1 some
/// check failed, 2 usage/parse/schema error, 3 runtime error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace epsnet::cli
