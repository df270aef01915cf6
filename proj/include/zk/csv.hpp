#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace zk {

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Comma-separated output with a header row. Cells are written verbatim, so
/// callers keep commas out of text cells (quote() helps when they cannot).
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

  CsvWriter& cell(double v);
  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(long long v);
  void end_row();
  void close();

 private:
  void sep();

  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t columns_ = 0;
  std::size_t in_row_ = 0;
};

/// Double-quotes text when it contains a comma, quote or newline.
std::string quote(std::string_view text);

}  // namespace zk
