#include "carroll/cli/csv.hpp"

#include <cstdio>
#include <filesystem>

#include "carroll/cli/config.hpp"

namespace carroll::cli {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> columns,
                     std::vector<std::string> units)
    : path_(path), width_(columns.size()), out_(path, std::ios::binary) {
  if (!out_) throw IoError("cannot open " + path + " for writing");
  if (units.size() != width_) throw std::logic_error("CsvWriter: units and columns differ in length");
  out_ << "# " << kFormatTag << '\n';
  for (std::size_t i = 0; i < width_; ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
  for (std::size_t i = 0; i < width_; ++i) out_ << (i ? "," : "") << units[i];
  out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != width_) throw std::logic_error("CsvWriter: row width mismatch in " + path_);
  line_.clear();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line_ += ',';
    line_ += format_double(values[i]);
  }
  line_ += '\n';
  out_ << line_;
}

void CsvWriter::text_row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::logic_error("CsvWriter: row width mismatch in " + path_);
  line_.clear();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line_ += ',';
    if (cells[i].find_first_of(",\"\n") == std::string::npos) {
      line_ += cells[i];
      continue;
    }
    line_ += '"';
    for (char ch : cells[i]) {
      if (ch == '"') line_ += '"';
      line_ += ch;
    }
    line_ += '"';
  }
  line_ += '\n';
  out_ << line_;
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw IoError("write failed for " + path_);
}

OutputDir::OutputDir(std::string dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_))
    throw IoError("cannot create output directory " + dir_ + (ec ? ": " + ec.message() : ""));
}

std::string OutputDir::path(const std::string& name) {
  files_.push_back(name);
  return (std::filesystem::path(dir_) / name).string();
}

}  // namespace carroll::cli
