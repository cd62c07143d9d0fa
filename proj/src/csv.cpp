#include "rosenau/csv.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "rosenau/errors.hpp"

namespace rosenau::csv {

std::string format(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void Writer::header(std::initializer_list<std::string_view> names) {
  for (auto n : names) cell(n);
  end_row();
}

void Writer::header(const std::vector<std::string>& names) {
  for (const auto& n : names) cell(std::string_view(n));
  end_row();
}

void Writer::comment(std::string_view text) { *out_ << "# " << text << '\n'; }

void Writer::sep() {
  if (row_open_) *out_ << ',';
  row_open_ = true;
}

Writer& Writer::cell(double v) {
  sep();
  *out_ << format(v);
  return *this;
}

Writer& Writer::cell(long long v) {
  sep();
  *out_ << v;
  return *this;
}

Writer& Writer::cell(std::string_view v) {
  sep();
  *out_ << v;
  return *this;
}

void Writer::end_row() {
  *out_ << '\n';
  row_open_ = false;
}

std::ofstream open(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  return out;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw InvalidArgument("CSV column '" + std::string(name) + "' not found");
}

namespace {
std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  return out;
}
}  // namespace

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    if (t.header.empty()) {
      t.header = split(line);
    } else {
      t.rows.push_back(split(line));
    }
  }
  return t;
}

}  // namespace rosenau::csv
