#include "srpair/csvio.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "srpair/errors.hpp"
#include "srpair/version.hpp"

namespace srpair::csv {

namespace {

void open_failed(const std::string& path, const char* verb) {
  throw IoError(std::string("cannot ") + verb + " '" + path + "'");
}

std::string header_block(const std::string& kind, const std::string& normalization,
                         const std::string& columns, const std::string& config_json) {
  std::ostringstream out;
  out << "# " << kToolName << " " << kVersion << "\n";
  out << "# kind: " << kind << "\n";
  if (!normalization.empty()) out << "# normalization: " << normalization << "\n";
  out << "# config: " << config_json << "\n";
  out << "# columns: " << columns << "\n";
  return out.str();
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_trace(const std::string& path, const TimeSeries& trace, const std::string& config_json) {
  if (trace.times.size() != trace.values.size()) {
    throw ValidationError("trace times and values must have equal length");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) open_failed(path, "write");
  out << header_block(trace.kind, trace.normalization, "time_ns,value", config_json);
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    out << format_double(trace.times[i]) << ',' << format_double(trace.values[i]) << '\n';
  }
  if (!out) open_failed(path, "write");
}

TimeSeries read_trace(const std::string& path, std::vector<double>* errors) {
  std::ifstream in(path, std::ios::binary);
  if (!in) open_failed(path, "read");

  TimeSeries trace;
  if (errors) errors->clear();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto tag = [&line](const char* name) -> std::string {
        const std::string key = std::string("# ") + name + ": ";
        if (line.rfind(key, 0) == 0) return line.substr(key.size());
        return {};
      };
      if (std::string v = tag("kind"); !v.empty()) trace.kind = v;
      if (std::string v = tag("normalization"); !v.empty()) trace.normalization = v;
      continue;
    }
    std::istringstream row(line);
    std::string field;
    std::vector<double> nums;
    while (std::getline(row, field, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used]))) {
          ++used;
        }
        if (used != field.size()) throw std::invalid_argument("trailing garbage");
        nums.push_back(v);
      } catch (const std::exception&) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": malformed numeric field '" << field << "'";
        throw IoError(msg.str());
      }
    }
    if (nums.size() != 2 && nums.size() != 3) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": expected 2 or 3 columns, got " << nums.size();
      throw IoError(msg.str());
    }
    trace.times.push_back(nums[0]);
    trace.values.push_back(nums[1]);
    if (errors && nums.size() == 3) errors->push_back(nums[2]);
  }
  if (trace.times.empty()) {
    throw IoError(path + ": no data rows");
  }
  if (errors && !errors->empty() && errors->size() != trace.times.size()) {
    throw IoError(path + ": error column present only on some rows");
  }
  return trace;
}

void write_table(const std::string& path, const std::string& kind, const std::string& columns,
                 const std::vector<std::vector<double>>& rows, const std::string& config_json) {
  std::ofstream out(path, std::ios::binary);
  if (!out) open_failed(path, "write");
  out << header_block(kind, "", columns, config_json);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
  if (!out) open_failed(path, "write");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) open_failed(path, "read");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) open_failed(path, "write");
  out << content;
  if (!out) open_failed(path, "write");
}

std::uint64_t fnv1a_file(const std::string& path) {
  const std::string bytes = read_text_file(path);
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace srpair::csv
