// SPDX-License-Identifier: Apache-2.0
//
// CSV export of learning curves and scalar result tables. Files start
// with '#'-prefixed metadata rows echoing the generating configuration,
// so every artifact is self-describing and byte-reproducible per seed.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fonspn/experiment.hpp"

namespace fonspn {

using MetaRows = std::vector<std::pair<std::string, std::string>>;

// Columns: update_index,nmsd_db_mean,nmsd_db_p10,nmsd_db_p90,diverged_count.
// An all-diverged (or empty) aggregate produces a header-only file.
void write_trace_csv(const std::string& path, const AggregateTrace& trace,
                     const MetaRows& meta);

// Reads back a trace CSV written by write_trace_csv.
AggregateTrace read_trace_csv(const std::string& path);

// (quantity, value) rows for bounds/theory style outputs.
void write_rows_csv(const std::string& path,
                    const std::vector<std::pair<std::string, double>>& rows,
                    const MetaRows& meta);

// Renders the (quantity, value) table as CSV text for stdout.
std::string format_rows_csv(
    const std::vector<std::pair<std::string, double>>& rows);

}  // namespace fonspn
