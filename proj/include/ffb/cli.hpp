#ifndef FFB_CLI_HPP
#define FFB_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ffb {

/// Fully parsed command invocation.  Every report carries an "invocation"
/// echo from which the invocation can be reconstructed, so reports are
/// replayable byte for byte.
struct Invocation {
    std::string subcommand;  // sum|bias|profile|quad|slice|rank|product|verify
    std::string field;
    std::uint32_t nvars = 0;
    std::string poly;
    std::string poly2;  // second factor for `product`
    std::uint32_t n = 1;
    std::uint32_t nmax = 3;
    std::uint32_t r = 1;
    std::optional<std::uint32_t> theta;
    std::optional<std::uint32_t> refine_u;
    std::uint32_t max_r = 0;  // 0 means nvars
    std::uint32_t ext = 1;
    double threshold = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t budget = 1'000'000'000;
    std::uint32_t jobs = 1;
    std::string format = "json";  // json|csv|text
    std::vector<std::string> suites;  // verify selection; empty = all acceptance suites
    std::string batch_file;
    bool timings = false;
};

struct DispatchResult {
    int exit_code = 0;        // 0 ok, 1 assertion failure, 2 input error, 3 budget
    std::string output;       // the report, on stdout
    std::string diagnostics;  // errors and timings, on stderr
};

nlohmann::json invocation_echo(const Invocation& inv);
Invocation invocation_from_json(const nlohmann::json& echo);

/// Routes to the module operation and renders the report.
DispatchResult dispatch(const Invocation& inv);

/// Parses one command line (same grammar as the CLI flags) into an Invocation.
Invocation parse_invocation(const std::vector<std::string>& args);
std::vector<std::string> tokenize_command_line(const std::string& line);

/// One report per input line, order preserved; a failing line yields an error
/// record and does not abort the batch.
DispatchResult run_batch(std::istream& lines, const std::string& format);

/// Full command line entry point used by the binary.
int run_cli(int argc, char** argv);

}  // namespace ffb

#endif
