#pragma once

#include "boundkde/boundary_kernels.hpp"
#include "boundkde/gl_selection.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace boundkde {

inline constexpr int model_schema_version = 1;

//! Fitted model persisted by `fit` and consumed by `eval`.
struct ModelFile
{
  int schema_version = model_schema_version;
  SelectionConfig config;
  FamilyIndex chosen;
  std::vector<int> kernel_orders;
  std::vector<std::vector<double>> kernel_coeffs;
  std::vector<double> bandwidth;
  SelectionTrace trace;
  SampleSet sample;

  //! Product kernel rebuilt from the stored orders and bandwidth.
  ProductKernelSpec spec() const;

  friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

//! Builds the model record for a completed selection.
ModelFile make_model(const SelectionConfig& cfg, const SelectionResult& result, const SampleSet& sample);

std::string serialize_model(const ModelFile& model);
//! Throws ParseError on malformed JSON or an unsupported schema version.
ModelFile parse_model(const std::string& text);

//! Reads a numeric CSV sample. A non-numeric first row is treated as a
//! header. Throws FileNotFound, ParseError (with line) or OutOfDomain (with
//! line and column).
SampleSet read_csv(const std::string& path);
SampleSet parse_csv(std::istream& in);

//! Shortest decimal form that round-trips (at most 17 significant digits).
std::string format_double(double v);

//! Process exit codes.
enum ExitCode : int
{
  exit_ok = 0,
  exit_usage = 2,
  exit_data = 3,
  exit_empty_family = 4
};

//! Entry point of the command-line tool. Output files are written as given
//! by the flags; `out` and `err` receive stdout/stderr text.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace boundkde
