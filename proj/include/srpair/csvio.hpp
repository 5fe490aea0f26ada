#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srpair/observables.hpp"

namespace srpair::csv {

// All files written by the tool start with a reproducibility header:
//   # srpair <version>
//   # kind: <trace kind>
//   # normalization: <normalization>        (traces only)
//   # config: <compact JSON of the resolved scenario>
//   # columns: <comma-separated names>
// followed by comma-separated numeric rows. Numbers are formatted with
// "%.12g" so that identical inputs give byte-identical files; infinities
// and NaNs appear as "inf" / "nan".
std::string format_double(double v);

void write_trace(const std::string& path, const TimeSeries& trace, const std::string& config_json);

// Reads a trace written by write_trace, or any headerless CSV with rows
// "time,value" or "time,value,error". '#' lines are skipped. Returns the
// trace; per-sample errors (if any) are returned through *errors.
TimeSeries read_trace(const std::string& path, std::vector<double>* errors = nullptr);

// Generic numeric table with the same header block.
void write_table(const std::string& path, const std::string& kind, const std::string& columns,
                 const std::vector<std::vector<double>>& rows, const std::string& config_json);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a hash of a file's bytes, used to record input provenance in fit
// results.
std::uint64_t fnv1a_file(const std::string& path);

}  // namespace srpair::csv
