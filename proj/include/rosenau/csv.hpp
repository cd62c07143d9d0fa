#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace rosenau::csv {

/// Shortest round-trip decimal form; identical input gives identical text.
std::string format(double v);

/// Minimal comma-separated writer. Rows are built cell by cell.
class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(&out) {}

  void header(std::initializer_list<std::string_view> names);
  void header(const std::vector<std::string>& names);
  void comment(std::string_view text);

  Writer& cell(double v);
  Writer& cell(long long v);
  Writer& cell(std::string_view v);
  void end_row();

 private:
  void sep();

  std::ostream* out_;
  bool row_open_ = false;
};

/// Opens `path` for writing, creating parent directories.
std::ofstream open(const std::filesystem::path& path);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;

  /// Column index by name; throws InvalidArgument when absent.
  std::size_t column(std::string_view name) const;
};

/// Reads a file written by Writer: '#' lines are comments, first other line
/// is the header.
Table read(const std::filesystem::path& path);

}  // namespace rosenau::csv
