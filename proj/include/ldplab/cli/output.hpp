// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace ldplab::cli {

/// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

/// Comment lines that head every CSV: tool, version, config digest and
/// any extra "key: value" pairs.
struct CsvHeader
{
    std::string config_digest;
    std::vector<std::pair<std::string, std::string>> extra;
};

/// Builds a CSV document with LF line endings.
class CsvWriter
{
  public:
    CsvWriter(CsvHeader const& header, std::vector<std::string> const& columns);

    void row(std::vector<std::string> const& cells);
    std::string const& str() const { return text_; }

  private:
    std::size_t ncols_;
    std::string text_;
};

/// Parsed CSV: comment lines ("# key: value") and rows.
struct CsvTable
{
    std::vector<std::pair<std::string, std::string>> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string comment(std::string const& key) const;  ///< empty if absent
    std::size_t column(std::string const& name) const;  ///< throws if absent
};

CsvTable parse_csv(std::string const& text);

std::string read_file(std::filesystem::path const& path);
/// Writes atomically via a temporary file in the same directory.
void write_file(std::filesystem::path const& path, std::string const& content);

//---------------------------------------------------------------------------//

struct SvgSeries
{
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

struct SvgBand
{
    std::vector<double> x;
    std::vector<double> low;
    std::vector<double> high;
    std::string color = "#1f77b4";
};

/// Minimal self-contained line chart.
class SvgChart
{
  public:
    SvgChart(std::string title, std::string x_label, std::string y_label, bool log_y);

    void add_series(SvgSeries series) { series_.push_back(std::move(series)); }
    void add_band(SvgBand band) { bands_.push_back(std::move(band)); }
    /// Text lines printed under the title (digest, version).
    void add_note(std::string note) { notes_.push_back(std::move(note)); }

    std::string render() const;

  private:
    std::string title_, x_label_, y_label_;
    bool log_y_;
    std::vector<SvgSeries> series_;
    std::vector<SvgBand> bands_;
    std::vector<std::string> notes_;
};

}  // namespace ldplab::cli
