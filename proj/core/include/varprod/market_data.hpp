#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace varprod {

/// Time-stamped observations; timestamps are UTC seconds since the epoch.
struct MarketSeries {
  std::vector<std::int64_t> timestamps;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

/// Throws ValidationError unless timestamps strictly increase, lengths match
/// and every value is finite.
void validate(const MarketSeries& series);

enum class CsvSchema {
  PriceSeries,         // timestamp,price
  ForecastActualPair,  // timestamp,forecast,actual
};

struct IngestResult {
  /// One series for PriceSeries, (forecast, actual) for ForecastActualPair.
  std::vector<MarketSeries> columns;
  /// Rows skipped for missing or malformed values.
  std::size_t dropped = 0;
};

/// Accepts "YYYY-MM-DD", "YYYY-MM-DD HH:MM", "YYYY-MM-DD HH:MM:SS" and the
/// ISO-8601 "T" separator with an optional trailing "Z".
std::int64_t parse_timestamp(const std::string& text);
std::string format_timestamp(std::int64_t seconds);

/// Parses a CSV export. In strict mode the first bad row throws ParseError;
/// otherwise bad rows are dropped and counted. Duplicate timestamps always throw.
IngestResult ingest_csv(const std::filesystem::path& path, CsvSchema schema, bool strict = false);

/// Pointwise forecast - actual over the shared timestamps.
MarketSeries forecast_error(const MarketSeries& forecast, const MarketSeries& actual);

/// Values of `a` and `b` at their shared timestamps.
std::pair<MarketSeries, MarketSeries> inner_join(const MarketSeries& a, const MarketSeries& b);

struct WeeklySeries {
  MarketSeries series;   // stamped at Monday 00:00 UTC
  std::vector<bool> complete;
};

/// Monday 00:00 UTC of the ISO week containing `seconds`.
std::int64_t week_start(std::int64_t seconds);

/// Arithmetic mean per ISO week. A week is complete when it holds as many
/// observations as the smallest sampling step of the input allows.
WeeklySeries weekly_means(const MarketSeries& series);

/// Plain numeric CSV with a header row. Columns named "timestamp" or "t" are
/// skipped; the rest are parsed as doubles.
struct NumericTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
};

NumericTable read_numeric_table(const std::filesystem::path& path);

}  // namespace varprod
