#include "invtest/data_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

namespace invtest {
namespace {

std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(begin, end - begin + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "NA" || cell == "NaN" || cell == "?"; }

std::optional<double> parse_number(const std::string& cell) {
  if (is_missing(cell)) return std::nullopt;
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Dataset parse_csv(std::istream& in, const std::vector<std::string>& select, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(name + ": empty file, a header row is required");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_csv_line(line);

  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    cells.resize(header.size());
    rows.push_back(std::move(cells));
  }

  std::vector<std::size_t> chosen;
  if (select.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      bool any = false, all = true;
      for (const auto& r : rows) {
        if (is_missing(r[c])) continue;
        any = true;
        if (!parse_number(r[c])) {
          all = false;
          break;
        }
      }
      if (any && all) chosen.push_back(c);
    }
    if (chosen.empty()) throw DataError(name + ": no numeric columns");
  } else {
    for (const auto& want : select) {
      auto it = std::find(header.begin(), header.end(), want);
      if (it == header.end()) {
        it = std::find_if(header.begin(), header.end(), [&](const std::string& h) { return lower(h) == lower(want); });
      }
      if (it == header.end()) throw DataError(name + ": column '" + want + "' not found");
      chosen.push_back(static_cast<std::size_t>(it - header.begin()));
    }
  }

  Dataset d;
  d.name = name;
  for (auto c : chosen) d.columns.push_back(header[c]);
  std::vector<double> flat;
  flat.reserve(rows.size() * chosen.size());
  long kept = 0;
  for (const auto& r : rows) {
    std::vector<double> vals;
    vals.reserve(chosen.size());
    for (auto c : chosen) {
      auto v = parse_number(r[c]);
      if (!v) break;
      vals.push_back(*v);
    }
    if (vals.size() != chosen.size()) {
      ++d.dropped_rows;
      continue;
    }
    flat.insert(flat.end(), vals.begin(), vals.end());
    ++kept;
  }
  d.values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      flat.data(), kept, static_cast<Eigen::Index>(chosen.size()));
  d.provenance = name + " (" + std::to_string(kept) + " rows kept, " + std::to_string(d.dropped_rows) +
                 " dropped for missing values)";
  return d;
}

Dataset load_csv(const std::filesystem::path& path, const std::vector<std::string>& select) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse_csv(in, select, path.string());
}

void write_csv(std::ostream& os, const Dataset& d) {
  for (std::size_t c = 0; c < d.columns.size(); ++c) os << (c ? "," : "") << d.columns[c];
  os << '\n';
  std::ostringstream line;
  line << std::setprecision(17);
  for (Eigen::Index i = 0; i < d.values.rows(); ++i) {
    line.str("");
    for (Eigen::Index j = 0; j < d.values.cols(); ++j) line << (j ? "," : "") << d.values(i, j);
    os << line.str() << '\n';
  }
}

std::vector<Dataset> subsample_prefix_sweep(const Dataset& d, const std::vector<long>& sizes) {
  std::vector<Dataset> out;
  for (long size : sizes) {
    if (size < 1 || size > d.rows()) {
      throw DataError("prefix size " + std::to_string(size) + " exceeds the " + std::to_string(d.rows()) +
                      " available rows");
    }
    Dataset part = d;
    part.values = d.values.topRows(size);
    part.provenance = d.provenance + ", rows 1.." + std::to_string(size);
    out.push_back(std::move(part));
  }
  return out;
}

Dataset parse_satimage(std::istream& in, const std::string& name) {
  constexpr int kAttributes = 36;
  std::vector<double> flat;
  std::string line;
  long rows = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<double> vals;
    double v;
    while (fields >> v) vals.push_back(v);
    if (vals.empty()) continue;
    if (vals.size() != kAttributes + 1 && vals.size() != kAttributes) {
      throw DataError(name + ": line " + std::to_string(rows + 1) + " has " + std::to_string(vals.size()) + " fields");
    }
    flat.insert(flat.end(), vals.begin(), vals.begin() + kAttributes);
    ++rows;
  }
  Dataset d;
  d.name = name;
  for (int c = 1; c <= kAttributes; ++c) d.columns.push_back("a" + std::to_string(c));
  d.values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(flat.data(), rows,
                                                                                               kAttributes);
  d.provenance = name;
  return d;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

}  // namespace invtest
