#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "flowbb/flowshop.hpp"

namespace flowbb {

// Text benchmark format, one or more instances concatenated:
//
//   n m [seed [upper_bound [lower_bound]]]
//   p(0,0) p(1,0) ... p(n-1,0)      <- machine 0 row
//   ...
//   p(0,m-1) ... p(n-1,m-1)         <- machine m-1 row
//
// Rows are machine-major (each row lists every job's time on one machine);
// Instance stores job-major, so parsing transposes. Trailing header fields
// may be omitted. Blank lines and '#' comments are skipped. Parse failures
// throw ParseError carrying the offending 1-based line number.
std::vector<Instance> parse_taillard(std::istream& in, const std::string& source_name = "");
std::vector<Instance> load_taillard_file(const std::string& path);

// Inverse of parse_taillard: emits the same machine-major layout, with
// whichever header fields the instance carries.
void write_taillard(std::ostream& out, const Instance& inst);

}  // namespace flowbb
