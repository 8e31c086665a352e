// Copyright 2026 The portkey-mcmc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PORTKEY_HARNESS_CSV_HPP
#define PORTKEY_HARNESS_CSV_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace portkey::harness {

/// Shortest text that parses back to the same double ('.' decimal point).
std::string format_double(double value);

/// Comma-separated line builder; terminates rows with '\n'.
class CsvWriter {
 public:
  explicit CsvWriter(std::string& out) : out_(out) {}

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double value);
  CsvWriter& field(std::uint64_t value);
  CsvWriter& field(int value) { return field(static_cast<std::uint64_t>(value)); }
  void end_row();

 private:
  void separator();

  std::string& out_;
  bool first_ = true;
};

/// Numeric table with a header row. Throws std::runtime_error with the
/// offending line number on ragged rows or non-numeric fields.
struct NumericTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;
};

NumericTable parse_numeric_csv(std::string_view text);
NumericTable read_numeric_csv(const std::string& path);

/// Writes `text` to `path`, replacing the file.
void write_text_file(const std::string& path, std::string_view text);

/// Writes a data matrix with header x1..xp.
std::string data_matrix_csv(const Eigen::MatrixXd& data);

}  // namespace portkey::harness

#endif  // PORTKEY_HARNESS_CSV_HPP
