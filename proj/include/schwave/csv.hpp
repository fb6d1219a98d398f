/* csv.hpp
 *
 * CSV emission (header row, RFC-style quoting, %.17g numerics so re-reads
 * are bit-faithful) and FNV-1a checksums of emitted files.
 */
#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace schwave {

struct DiskError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string csv_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw DiskError("cannot open for writing: " + path);
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << csv_quote(cells[i]);
    }
    out_ << '\n';
    if (!out_) throw DiskError("write failure on CSV stream");
  }
  void row(const std::string& quantity, double param, double value,
           double err) {
    row({quantity, csv_num(param), csv_num(value), csv_num(err)});
  }
  void close() {
    out_.close();
    if (out_.fail()) throw DiskError("close failure on CSV stream");
  }

 private:
  std::ofstream out_;
};

inline std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DiskError("cannot open for checksum: " + path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i)
      h = (h ^ static_cast<unsigned char>(buf[i])) * 1099511628211ull;
    if (in.eof()) break;
  }
  return h;
}

}  // namespace schwave
