#pragma once

#include "fracstab/dynamics.hpp"
#include "fracstab/stability.hpp"

#include <complex>
#include <iosfwd>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fracstab {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

/// "1.5", "-2i", "1.891-0.624i", "0.3+4j". Throws std::invalid_argument.
cplx parse_complex(std::string_view text);
std::string format_complex(cplx v);

/// Comment lines ("# key=value"), one header row, numeric rows.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Values of "# key=value" comments; later keys win.
  std::map<std::string, std::string> config() const;
  std::size_t column(std::string_view name) const;
};

void write_csv(std::ostream& os, const CsvTable& table);
/// Throws IoError on malformed input.
CsvTable read_csv(std::istream& is);

CsvTable trajectory_table(const Trajectory& traj);
CsvTable boundary_table(const BoundaryCurve& curve);

/// Inverse of trajectory_table (the initial-data length is not recorded).
std::vector<cplx> trajectory_values(const CsvTable& table);

struct SvgOptions {
  double width = 640;
  /// Cells to fill, as produced by winding_grid over `box`.
  const std::vector<int>* winding = nullptr;
  int fill_winding = 2;
  Box box{};
  std::size_t nx = 0, ny = 0;
  std::vector<std::string> comments;
};

/// Plain SVG 1.1: the locus as one path, filled cells as one path at 40% opacity.
void write_svg(std::ostream& os, const BoundaryCurve& curve, const SvgOptions& options = {});

/// Opens `path` for writing, or returns the fallback stream for "-" or "".
/// Throws IoError when the file cannot be opened.
class OutputTarget {
public:
  OutputTarget(const std::string& path, std::ostream& fallback);
  std::ostream& stream() { return *os_; }
  /// Flushes and throws IoError if any write failed.
  void close();

private:
  std::string path_;
  std::unique_ptr<std::ostream> file_;
  std::ostream* os_;
};

}  // namespace fracstab
