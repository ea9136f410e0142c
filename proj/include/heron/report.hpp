// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "heron/selmer.hpp"

namespace heron::report {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Square classes in reports are rendered as signed monomials ("-2pq"), never
// as raw integers, so the schema is independent of the prime.
json to_json(const selmer::DescentReport& r);
selmer::DescentReport report_from_json(const json& j);

std::string render_markdown(const selmer::DescentReport& r);

struct TableRow {
    Int p;
    int rank = 0;
    int selmer_rank = 0;
    std::string sha2;
    bool confirmed = false;
};

std::string render_table_markdown(const std::vector<TableRow>& rows);
json render_table_json(const std::vector<TableRow>& rows);

// Append-only JSON-lines cache keyed by (p, tool version); no cross-version
// reuse.
class ReportCache {
  public:
    explicit ReportCache(std::string path) : path_(std::move(path)) {}

    std::optional<json> lookup(const Int& p) const;
    void append(const Int& p, const json& report) const;

  private:
    std::string path_;
};

}  // namespace heron::report
