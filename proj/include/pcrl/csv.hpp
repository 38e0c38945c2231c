#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace pcrl {

// Locale-independent number formatting (std::to_chars), 12 significant
// digits for doubles.
std::string format_double(double v);

// Header + one row per call. Absent optional cells stay empty.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  ~CsvWriter();

  void begin_row();
  void cell(double v);
  void cell(long v);
  void cell(const std::optional<double>& v);
  void cell(const std::string& v);
  void end_row();
  void flush();

 private:
  std::ofstream f_;
  std::string path_;
  std::size_t columns_ = 0;
  std::size_t cells_in_row_ = 0;
  bool in_row_ = false;
};

}  // namespace pcrl
