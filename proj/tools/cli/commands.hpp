#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fascopula::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Bad flag values detected after parsing.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// "from:to:step" (inclusive, step > 0) or a single number.
struct Grid {
  std::string text;
  std::vector<double> values;
  bool is_range() const { return values.size() > 1 || text.find(':') != std::string::npos; }
};
/// Throws UsageError on malformed input.
Grid parse_grid(const std::string& text);

/// Runs the tool on argv. Output goes to `out` unless --out names a file;
/// diagnostics go to `err`. Returns 0 on success, 1 when a check or an
/// evaluation failed, 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fascopula::cli
