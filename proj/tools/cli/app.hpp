#pragma once

// Command-line front end.
//
//   dfdr analyze  <counts> [--test fet|bin|ent] [--lambda L] [--epsilon E]
//                 [--alpha A]... [--min-total N] [--max-total N] [--out DIR]
//   dfdr simulate <config> --out DIR [--reps N] [--seed S] [--alpha A]...
//   dfdr tune     <counts> [--lambda-grid G] [--epsilon-grid G]
//                 [--bootstrap B] [--seed S] [--out DIR]
//   dfdr rerun    <manifest.json> --out DIR
//
// Failures print one line "error[<category>]: <message>" to the error stream
// and return the category's exit code.

#include <iosfwd>
#include <string>
#include <vector>

namespace dfdr::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int internal = 1;
inline constexpr int usage = 2;
inline constexpr int parse = 3;
inline constexpr int config = 4;
inline constexpr int domain = 5;
inline constexpr int io = 6;
}  // namespace exit_code

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dfdr::cli
