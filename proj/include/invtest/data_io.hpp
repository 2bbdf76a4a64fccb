#pragma once

#include "invtest/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace invtest {

/// A complete-case numeric table. Rows keep their file order.
struct Dataset {
  std::string name;
  std::vector<std::string> columns;
  Matrix values;
  std::string provenance;
  long dropped_rows = 0;

  long rows() const { return static_cast<long>(values.rows()); }
  Sample to_sample() const { return Sample{values, std::nullopt}; }
};

/// Comma-delimited text with a header row. With `select` empty, every column
/// whose non-missing cells all parse as numbers is kept; otherwise exactly the
/// selected columns, matched by name (case-insensitively if there is no
/// exact match). Rows with a missing or unparseable selected entry are
/// dropped and counted. Throws DataError on a missing file, an absent column
/// or when no numeric column remains.
Dataset load_csv(const std::filesystem::path& path, const std::vector<std::string>& select = {});
Dataset parse_csv(std::istream& in, const std::vector<std::string>& select, const std::string& name);

/// Writes the header and values with 17 significant digits (round-trips exactly).
void write_csv(std::ostream& os, const Dataset& d);

/// Prefixes of the row order, one per requested size.
std::vector<Dataset> subsample_prefix_sweep(const Dataset& d, const std::vector<long>& sizes);

/// Converts the whitespace-delimited Statlog satimage table (36 attributes and
/// a class label per line, no header) to a Dataset with columns a1..a36.
Dataset parse_satimage(std::istream& in, const std::string& name);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

std::vector<std::string> split_list(const std::string& text, char sep = ',');

}  // namespace invtest
