#include "pcrl/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace pcrl {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : f_(path), path_(path), columns_(columns.size()) {
  if (!f_) throw std::runtime_error("csv: cannot open '" + path + "'");
  for (std::size_t i = 0; i < columns.size(); ++i) f_ << (i ? "," : "") << columns[i];
  f_ << "\n";
}

CsvWriter::~CsvWriter() { f_.flush(); }

void CsvWriter::begin_row() {
  if (in_row_) throw std::logic_error("csv: begin_row inside a row");
  in_row_ = true;
  cells_in_row_ = 0;
}

void CsvWriter::cell(double v) { cell(format_double(v)); }

void CsvWriter::cell(long v) { cell(std::to_string(v)); }

void CsvWriter::cell(const std::optional<double>& v) {
  cell(v ? format_double(*v) : std::string());
}

void CsvWriter::cell(const std::string& v) {
  if (!in_row_) throw std::logic_error("csv: cell outside a row");
  if (cells_in_row_ >= columns_) throw std::logic_error("csv: too many cells in row");
  if (cells_in_row_) f_ << ",";
  f_ << v;
  ++cells_in_row_;
}

void CsvWriter::end_row() {
  if (!in_row_) throw std::logic_error("csv: end_row outside a row");
  if (cells_in_row_ != columns_)
    throw std::logic_error("csv: row has " + std::to_string(cells_in_row_) + " cells, expected " +
                           std::to_string(columns_));
  f_ << "\n";
  in_row_ = false;
  if (!f_) throw std::runtime_error("csv: write failed for '" + path_ + "'");
}

void CsvWriter::flush() { f_.flush(); }

}  // namespace pcrl
