#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ratingdyn/cli/config.hpp"

namespace ratingdyn::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitIo = 4 };

// One finished CSV, held in memory until every output of a command exists.
struct OutputFile {
  std::string name;
  std::string contents;
};

// Builds a CSV: `#` metadata line, header, rows. Doubles are printed with
// 17 significant digits; empty cells stand for missing values.
class CsvWriter {
 public:
  CsvWriter(std::string_view command, const Config& config, std::vector<std::string> columns);

  CsvWriter& cell(double v);
  CsvWriter& cell(std::uint64_t v);
  CsvWriter& cell(std::string_view s);
  CsvWriter& empty();
  void end_row();

  OutputFile finish(std::string name) &&;

 private:
  void separator();

  std::string text_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

std::string format_double(double v);

// The metadata header: command name plus the resolved config (minus
// out_dir, which does not influence any number).
std::string metadata_line(std::string_view command, const Config& config);

std::vector<OutputFile> cmd_curve(const Config& config, std::ostream& log);
std::vector<OutputFile> cmd_equilibria(const Config& config, std::ostream& log);
std::vector<OutputFile> cmd_bifurcate(const Config& config, std::ostream& log);
std::vector<OutputFile> cmd_simulate(const Config& config, std::ostream& log);
std::vector<OutputFile> cmd_figures(const Config& config, std::ostream& log);

// Creates `dir` if needed and writes every file. Throws IoError.
void write_outputs(const std::string& dir, const std::vector<OutputFile>& files);

// Whole command line, returning the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ratingdyn::cli
