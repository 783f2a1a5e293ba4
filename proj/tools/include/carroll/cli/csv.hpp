#pragma once

#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace carroll::cli {

// File-system failures, reported with the offending path.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "%.17g", so every double round-trips.
std::string format_double(double v);

// Three header lines (format tag, column names, units), then numeric rows.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> columns, std::vector<std::string> units);
  void row(std::span<const double> values);
  void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }
  // Pre-formatted cells; quoted when they contain a comma or quote.
  void text_row(const std::vector<std::string>& cells);
  void close();

 private:
  std::string path_;
  std::size_t width_;
  std::ofstream out_;
  std::string line_;
};

// Tracks files written into one output directory and emits the manifest.
class OutputDir {
 public:
  explicit OutputDir(std::string dir);
  std::string path(const std::string& name);
  const std::string& dir() const { return dir_; }
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::string dir_;
  std::vector<std::string> files_;
};

}  // namespace carroll::cli
