#pragma once

#include "invtest/invariance_test.hpp"

#include "json.hpp"

#include <iosfwd>

namespace invtest {

inline constexpr int kSchemaVersion = 1;

/// Stable, versioned JSON form of a report (field order is fixed).
nlohmann::ordered_json report_to_json(const TestReport& report);

/// Console summary with one row per generator.
void write_report_table(std::ostream& os, const TestReport& report);

}  // namespace invtest
