#ifndef ORDERSHEAF_CLI_HPP
#define ORDERSHEAF_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ordersheaf {

/// Exit codes. The analysis verdict maps to a code independently of any
/// formatting flags: a global section exists (0), some edge is obstructed (2),
/// or some stalk is empty (3, which wins over 2 when both hold).
inline constexpr int kExitOk = 0;
inline constexpr int kExitObstructed = 2;
inline constexpr int kExitEmptyStalk = 3;
inline constexpr int kExitUsage = 64;      // unknown subcommand/flag/value
inline constexpr int kExitData = 65;       // malformed or invalid document
inline constexpr int kExitInternal = 70;   // unexpected failure
inline constexpr int kExitIo = 74;         // unreadable input

/// Full command dispatch against explicit streams, so tests can drive the
/// binary in-process. `args` excludes the program name; `-` as a file argument
/// reads the document from `in`. Data goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace ordersheaf

#endif  // ORDERSHEAF_CLI_HPP
