#include "varprod/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "varprod/error.hpp"

namespace varprod {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;
constexpr std::int64_t kSecondsPerWeek = 7 * kSecondsPerDay;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\"");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto res = std::from_chars(begin, s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

void validate(const MarketSeries& series) {
  if (series.timestamps.size() != series.values.size()) {
    throw LengthError("market series timestamps and values differ in length");
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!std::isfinite(series.values[i])) {
      throw ValidationError("market series has a non-finite value at " +
                            format_timestamp(series.timestamps[i]));
    }
    if (i > 0 && series.timestamps[i] <= series.timestamps[i - 1]) {
      throw ValidationError("market series timestamps are not strictly increasing at " +
                            format_timestamp(series.timestamps[i]));
    }
  }
}

std::int64_t parse_timestamp(const std::string& raw) {
  using namespace std::chrono;
  std::string text = trim(raw);
  if (!text.empty() && (text.back() == 'Z' || text.back() == 'z')) text.pop_back();
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
    throw ParseError("malformed timestamp '" + raw + "'");
  }
  int y = 0, mo = 0, d = 0, hh = 0, mm = 0, ss = 0;
  const std::string_view v(text);
  if (!parse_int(v.substr(0, 4), y) || !parse_int(v.substr(5, 2), mo) || !parse_int(v.substr(8, 2), d)) {
    throw ParseError("malformed timestamp '" + raw + "'");
  }
  if (text.size() > 10) {
    const char sep = text[10];
    const auto clock = v.substr(11);
    const bool ok = (sep == ' ' || sep == 'T') && (clock.size() == 5 || clock.size() == 8) &&
                    clock[2] == ':' && parse_int(clock.substr(0, 2), hh) &&
                    parse_int(clock.substr(3, 2), mm) &&
                    (clock.size() == 5 || (clock[5] == ':' && parse_int(clock.substr(6, 2), ss)));
    if (!ok || hh > 23 || mm > 59 || ss > 60) throw ParseError("malformed timestamp '" + raw + "'");
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw ParseError("invalid calendar date '" + raw + "'");
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * kSecondsPerDay + hh * 3600 + mm * 60 + ss;
}

std::string format_timestamp(std::int64_t seconds) {
  using namespace std::chrono;
  const std::int64_t days = floor_div(seconds, kSecondsPerDay);
  std::int64_t rem = seconds - days * kSecondsPerDay;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
  return buf;
}

IngestResult ingest_csv(const std::filesystem::path& path, CsvSchema schema, bool strict) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");

  const std::vector<std::string> expected =
      schema == CsvSchema::PriceSeries ? std::vector<std::string>{"timestamp", "price"}
                                       : std::vector<std::string>{"timestamp", "forecast", "actual"};
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto header = split_fields(line);
    for (auto& h : header) h = lowercase(h);
    if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
    if (header != expected) {
      std::string want;
      for (const auto& e : expected) want += (want.empty() ? "" : ",") + e;
      throw ParseError("header does not match expected '" + want + "'", line_no);
    }
    have_header = true;
    break;
  }
  if (!have_header) throw ParseError("empty file '" + path.string() + "'", line_no);

  struct Row {
    std::int64_t ts;
    double v[2];
  };
  std::vector<Row> rows;
  IngestResult result;
  const std::size_t width = expected.size();
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    Row row{};
    bool ok = fields.size() == width;
    if (ok) {
      try {
        row.ts = parse_timestamp(fields[0]);
      } catch (const ParseError&) {
        ok = false;
      }
    }
    for (std::size_t c = 1; ok && c < width; ++c) ok = parse_double(fields[c], row.v[c - 1]);
    if (!ok) {
      if (strict) throw ParseError("malformed row '" + trim(line) + "'", line_no);
      ++result.dropped;
      continue;
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw ParseError("no data rows in '" + path.string() + "'", line_no);

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.ts < b.ts; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].ts == rows[i - 1].ts) {
      throw ValidationError("duplicate timestamp " + format_timestamp(rows[i].ts));
    }
  }
  result.columns.resize(width - 1);
  for (auto& col : result.columns) {
    col.timestamps.reserve(rows.size());
    col.values.reserve(rows.size());
  }
  for (const Row& row : rows) {
    for (std::size_t c = 0; c + 1 < width; ++c) {
      result.columns[c].timestamps.push_back(row.ts);
      result.columns[c].values.push_back(row.v[c]);
    }
  }
  return result;
}

std::pair<MarketSeries, MarketSeries> inner_join(const MarketSeries& a, const MarketSeries& b) {
  validate(a);
  validate(b);
  std::pair<MarketSeries, MarketSeries> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a.timestamps[i] < b.timestamps[j]) {
      ++i;
    } else if (b.timestamps[j] < a.timestamps[i]) {
      ++j;
    } else {
      out.first.timestamps.push_back(a.timestamps[i]);
      out.first.values.push_back(a.values[i]);
      out.second.timestamps.push_back(b.timestamps[j]);
      out.second.values.push_back(b.values[j]);
      ++i;
      ++j;
    }
  }
  return out;
}

MarketSeries forecast_error(const MarketSeries& forecast, const MarketSeries& actual) {
  auto [f, a] = inner_join(forecast, actual);
  if (f.size() == 0) throw ValidationError("forecast and actual series share no timestamps");
  for (std::size_t i = 0; i < f.size(); ++i) f.values[i] -= a.values[i];
  return f;
}

std::int64_t week_start(std::int64_t seconds) {
  const std::int64_t days = floor_div(seconds, kSecondsPerDay);
  // 1970-01-01 was a Thursday, so Monday-based weekday = (days + 3) mod 7.
  const std::int64_t weekday = ((days + 3) % 7 + 7) % 7;
  return (days - weekday) * kSecondsPerDay;
}

WeeklySeries weekly_means(const MarketSeries& series) {
  validate(series);
  if (series.size() == 0) throw LengthError("weekly aggregation of an empty series");

  std::int64_t step = kSecondsPerWeek;
  for (std::size_t i = 1; i < series.size(); ++i) {
    step = std::min(step, series.timestamps[i] - series.timestamps[i - 1]);
  }
  const std::int64_t full_count = kSecondsPerWeek / step;

  WeeklySeries out;
  std::size_t i = 0;
  while (i < series.size()) {
    const std::int64_t start = week_start(series.timestamps[i]);
    double sum = 0.0;
    std::int64_t count = 0;
    for (; i < series.size() && series.timestamps[i] < start + kSecondsPerWeek; ++i) {
      sum += series.values[i];
      ++count;
    }
    out.series.timestamps.push_back(start);
    out.series.values.push_back(sum / static_cast<double>(count));
    out.complete.push_back(count >= full_count);
  }
  return out;
}

NumericTable read_numeric_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  NumericTable table;
  std::string line;
  std::size_t line_no = 0;
  std::vector<bool> keep;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (keep.empty()) {
      for (const auto& f : fields) {
        const std::string key = lowercase(f);
        const bool numeric = key != "timestamp" && key != "t";
        keep.push_back(numeric);
        if (numeric) table.names.push_back(f);
      }
      table.columns.resize(table.names.size());
      continue;
    }
    if (fields.size() != keep.size()) {
      throw ParseError("expected " + std::to_string(keep.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    std::size_t col = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!keep[c]) continue;
      double v = 0.0;
      if (!parse_double(fields[c], v)) throw ParseError("non-numeric value '" + fields[c] + "'", line_no);
      table.columns[col++].push_back(v);
    }
  }
  if (keep.empty()) throw ParseError("empty file '" + path.string() + "'", line_no);
  return table;
}

}  // namespace varprod
