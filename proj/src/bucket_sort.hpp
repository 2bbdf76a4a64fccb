#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace invtest::detail {

struct ValueRow {
  double value;
  std::uint32_t row;
};

// Sorts `src[0..m)` into `out` as (value, row) pairs, ascending by value.
// Input must be finite. One distribution pass into m buckets whose index
// floor((v - lo) * scale) is non-decreasing in v, then each bucket is sorted
// on the full value, so the result is exact.
inline void bucket_sort(const double* src, std::size_t m, std::vector<ValueRow>& out,
                        std::vector<std::uint32_t>& offsets, std::vector<std::int32_t>& index) {
  out.resize(m);
  if (m == 0) return;
  const auto [lo_it, hi_it] = std::minmax_element(src, src + m);
  const double lo = *lo_it;
  const std::size_t nb = m;
  const double scale = static_cast<double>(nb) / (*hi_it - lo);
  if (!(std::isfinite(scale) && scale > 0.0)) {
    for (std::size_t i = 0; i < m; ++i) out[i] = {src[i], static_cast<std::uint32_t>(i)};
    std::sort(out.begin(), out.end(), [](const ValueRow& a, const ValueRow& b) { return a.value < b.value; });
    return;
  }
  index.resize(m);
  const auto top = static_cast<std::int32_t>(nb - 1);
  for (std::size_t i = 0; i < m; ++i) index[i] = std::min(static_cast<std::int32_t>((src[i] - lo) * scale), top);
  offsets.assign(nb + 1, 0);
  for (std::size_t i = 0; i < m; ++i) ++offsets[static_cast<std::size_t>(index[i]) + 1];
  for (std::size_t b = 1; b <= nb; ++b) offsets[b] += offsets[b - 1];
  // Scatter; afterwards offsets[b] is the end of bucket b.
  for (std::size_t i = 0; i < m; ++i) out[offsets[static_cast<std::size_t>(index[i])]++] = {src[i], static_cast<std::uint32_t>(i)};
  std::uint32_t widest = offsets[0];
  for (std::size_t b = 1; b < nb; ++b) widest = std::max(widest, offsets[b] - offsets[b - 1]);
  auto by_value = [](const ValueRow& a, const ValueRow& b) { return a.value < b.value; };
  if (widest <= 16) {
    // Buckets are already in order, so inversions stay inside a bucket.
    for (std::size_t i = 1; i < m; ++i) {
      if (!(out[i - 1].value > out[i].value)) continue;
      const ValueRow e = out[i];
      std::size_t j = i;
      for (; j > 0 && out[j - 1].value > e.value; --j) out[j] = out[j - 1];
      out[j] = e;
    }
    return;
  }
  std::size_t begin = 0;
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t end = offsets[b];
    if (end - begin > 1) {
      std::sort(out.begin() + static_cast<std::ptrdiff_t>(begin), out.begin() + static_cast<std::ptrdiff_t>(end),
                by_value);
    }
    begin = end;
  }
}

}  // namespace invtest::detail
