#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "temponet/calendar.hpp"
#include "temponet/error.hpp"
#include "temponet/text.hpp"

namespace temponet {

/// One post: who, when (epoch seconds, UTC), which normalized hashtags.
struct PostRecord {
  std::string user;
  std::int64_t time = 0;
  std::vector<std::string> hashtags;  // lowercase, no '#', deduplicated

  friend bool operator==(const PostRecord&, const PostRecord&) = default;
};

enum class InputFormat { jsonl, csv };

struct ParseStats {
  std::size_t lines = 0;      // non-empty input lines
  std::size_t parsed = 0;
  std::size_t malformed = 0;  // skipped lines
  std::vector<std::string> samples;  // first few malformed-line diagnostics
};

struct ParseResult {
  std::vector<PostRecord> records;
  ParseStats stats;
};

namespace detail {

inline void add_normalized_tag(std::vector<std::string>& tags,
                               std::string_view raw) {
  std::string tag = normalize_hashtag(raw);
  if (tag.empty()) return;
  if (std::find(tags.begin(), tags.end(), tag) == tags.end()) {
    tags.push_back(std::move(tag));
  }
}

inline void note_malformed(ParseStats& stats, std::size_t line_no,
                           const std::string& reason) {
  ++stats.malformed;
  if (stats.samples.size() < 5) {
    stats.samples.push_back("line " + std::to_string(line_no) + ": " + reason);
  }
}

inline bool parse_jsonl_line(const std::string& line, std::size_t line_no,
                             ParseResult& out) {
  nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    note_malformed(out.stats, line_no, "not a JSON object");
    return false;
  }
  // A leading {"meta": {...}} line is a file header, not a record.
  if (obj.size() == 1 && obj.contains("meta")) {
    --out.stats.lines;
    return false;
  }
  if (!obj.contains("user") || !obj["user"].is_string() ||
      obj["user"].get<std::string>().empty()) {
    note_malformed(out.stats, line_no, "missing or empty \"user\"");
    return false;
  }
  if (!obj.contains("time")) {
    note_malformed(out.stats, line_no, "missing \"time\"");
    return false;
  }
  std::int64_t time = 0;
  if (obj["time"].is_number_integer()) {
    time = obj["time"].get<std::int64_t>();
  } else if (obj["time"].is_string()) {
    if (!try_parse_timestamp(obj["time"].get<std::string>(), time)) {
      note_malformed(out.stats, line_no, "unparseable \"time\"");
      return false;
    }
  } else {
    note_malformed(out.stats, line_no, "\"time\" is neither string nor integer");
    return false;
  }
  if (!obj.contains("hashtags") || !obj["hashtags"].is_array()) {
    note_malformed(out.stats, line_no, "missing \"hashtags\" array");
    return false;
  }
  PostRecord rec;
  rec.user = obj["user"].get<std::string>();
  rec.time = time;
  for (const auto& h : obj["hashtags"]) {
    if (!h.is_string()) {
      note_malformed(out.stats, line_no, "non-string hashtag");
      return false;
    }
    add_normalized_tag(rec.hashtags, h.get<std::string>());
  }
  out.records.push_back(std::move(rec));
  ++out.stats.parsed;
  return true;
}

/// Minimal RFC-4180 row splitter (quoted fields, doubled quotes).
inline bool split_csv_row(const std::string& line, std::vector<std::string>& out) {
  out.clear();
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (quoted) return false;
  out.push_back(std::move(field));
  return true;
}

}  // namespace detail

/// Parses post records from a JSONL or CSV stream. Records come back in input
/// order, hashtags normalized and deduplicated. Malformed records are skipped
/// and counted; more than 50% malformed is a fatal format error.
inline ParseResult parse_posts(std::istream& in, InputFormat format) {
  if (!in.good()) throw IoError("cannot read post stream");

  ParseResult out;
  std::string line;

  std::vector<std::string> csv_fields;
  int col_user = -1, col_time = -1, col_tags = -1;
  bool csv_header_seen = false;

  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;

    if (format == InputFormat::jsonl) {
      ++out.stats.lines;
      detail::parse_jsonl_line(line, line_no, out);
      continue;
    }

    // CSV: the first non-empty line is the required header row.
    if (!csv_header_seen) {
      if (!detail::split_csv_row(line, csv_fields)) {
        throw FormatError("unterminated quote in CSV header");
      }
      for (std::size_t c = 0; c < csv_fields.size(); ++c) {
        const std::string name = normalize_text(csv_fields[c]);
        if (name == "user") col_user = static_cast<int>(c);
        if (name == "time") col_time = static_cast<int>(c);
        if (name == "hashtags") col_tags = static_cast<int>(c);
      }
      if (col_user < 0 || col_time < 0 || col_tags < 0) {
        throw FormatError("CSV header must name columns user, time, hashtags");
      }
      csv_header_seen = true;
      continue;
    }

    ++out.stats.lines;
    if (!detail::split_csv_row(line, csv_fields)) {
      detail::note_malformed(out.stats, line_no, "unterminated quote");
      continue;
    }
    const std::size_t need = static_cast<std::size_t>(
        std::max(col_user, std::max(col_time, col_tags)));
    if (csv_fields.size() <= need) {
      detail::note_malformed(out.stats, line_no, "too few columns");
      continue;
    }
    PostRecord rec;
    rec.user = csv_fields[static_cast<std::size_t>(col_user)];
    if (rec.user.empty()) {
      detail::note_malformed(out.stats, line_no, "empty user");
      continue;
    }
    if (!try_parse_timestamp(csv_fields[static_cast<std::size_t>(col_time)],
                             rec.time)) {
      detail::note_malformed(out.stats, line_no, "unparseable time");
      continue;
    }
    // hashtags cell is a space-separated list
    const std::string& cell = csv_fields[static_cast<std::size_t>(col_tags)];
    std::size_t pos = 0;
    while (pos < cell.size()) {
      const std::size_t next = cell.find(' ', pos);
      const std::string_view piece =
          std::string_view(cell).substr(pos, next == std::string::npos
                                                 ? std::string::npos
                                                 : next - pos);
      detail::add_normalized_tag(rec.hashtags, piece);
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    out.records.push_back(std::move(rec));
    ++out.stats.parsed;
  }

  if (in.bad()) throw IoError("I/O failure while reading post stream");
  if (format == InputFormat::csv && !csv_header_seen && line_no > 0) {
    throw FormatError("CSV input has no header row");
  }

  if (out.stats.lines > 0 && out.stats.malformed * 2 > out.stats.lines) {
    std::string msg = "more than 50% of records are malformed (" +
                      std::to_string(out.stats.malformed) + "/" +
                      std::to_string(out.stats.lines) + ")";
    for (const auto& s : out.stats.samples) msg += "\n  " + s;
    throw FormatError(msg);
  }
  return out;
}

/// Hashtags removed before any edge is drawn: the query keywords used to
/// collect the stream plus generic event tags that carry no specific message.
struct Stoplist {
  std::set<std::string> query_keywords;
  std::set<std::string> generic;

  bool contains(const std::string& tag) const {
    return query_keywords.count(tag) > 0 || generic.count(tag) > 0;
  }

  /// The built-in default: 11 generic event tags plus the "expo2015" query
  /// keyword. The second query keyword "noexpo" is deliberately not applied
  /// by default (it names a topic of its own); pass apply_noexpo = true to
  /// remove it as well.
  static Stoplist defaults(bool apply_noexpo = false) {
    Stoplist s;
    s.generic = {"expomilano",     "expo",          "milano",
                 "milan",          "expomilano2015", "milanoexpo2015",
                 "expo2015milano", "euexpo2015",    "e015",
                 "tim2go",         "news"};
    s.query_keywords = {"expo2015"};
    if (apply_noexpo) s.query_keywords.insert("noexpo");
    return s;
  }
};

/// Stoplist file: one hashtag per line; lines starting with "# " are comments.
inline std::set<std::string> load_stoplist(std::istream& in) {
  if (!in.good()) throw IoError("cannot read stoplist");
  std::set<std::string> tags;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0 || line == "#") continue;
    std::string tag = normalize_hashtag(line);
    if (!tag.empty()) tags.insert(std::move(tag));
  }
  if (in.bad()) throw IoError("I/O failure while reading stoplist");
  return tags;
}

struct FilterOutcome {
  std::vector<PostRecord> records;
  std::size_t dropped_records = 0;  // records left with no hashtags
  std::size_t removed_tags = 0;
};

/// Removes stoplisted hashtags from every record and drops records whose
/// hashtag list becomes empty (they can create no edges). Idempotent.
inline FilterOutcome apply_stoplist(std::vector<PostRecord> records,
                                    const Stoplist& stoplist) {
  FilterOutcome out;
  out.records.reserve(records.size());
  for (auto& rec : records) {
    const std::size_t before = rec.hashtags.size();
    std::erase_if(rec.hashtags,
                  [&](const std::string& t) { return stoplist.contains(t); });
    out.removed_tags += before - rec.hashtags.size();
    if (rec.hashtags.empty()) {
      ++out.dropped_records;
    } else {
      out.records.push_back(std::move(rec));
    }
  }
  return out;
}

/// Calendar layout of the daily layers.
struct DayBinning {
  CivilDate day0;
  int n_days = 0;
};

struct BinnedDays {
  DayBinning binning;
  std::vector<std::vector<PostRecord>> days;  // one bucket per day index
  std::size_t discarded = 0;                  // records outside the window
};

/// Assigns each record to a calendar-day layer. Day index = whole days
/// between the (offset-shifted) timestamp and date_start; records outside
/// [date_start, date_end] are discarded and counted.
inline BinnedDays bin_by_day(const std::vector<PostRecord>& records,
                             const CivilDate& date_start,
                             const CivilDate& date_end,
                             int utc_offset_seconds = 0) {
  const std::int64_t day0 = days_from_civil(date_start);
  const std::int64_t day_last = days_from_civil(date_end);
  if (day0 > day_last) {
    throw ArgumentError("inverted window: " + format_date(date_start) + " > " +
                        format_date(date_end));
  }
  BinnedDays out;
  out.binning.day0 = date_start;
  out.binning.n_days = static_cast<int>(day_last - day0 + 1);
  out.days.resize(static_cast<std::size_t>(out.binning.n_days));
  for (const auto& rec : records) {
    const std::int64_t day =
        floor_div(rec.time + utc_offset_seconds, 86400) - day0;
    if (day < 0 || day >= out.binning.n_days) {
      ++out.discarded;
      continue;
    }
    out.days[static_cast<std::size_t>(day)].push_back(rec);
  }
  return out;
}

/// Window bounds derived from the data itself (both ends inclusive).
inline std::pair<CivilDate, CivilDate> data_window(
    const std::vector<PostRecord>& records, int utc_offset_seconds = 0) {
  if (records.empty()) throw ArgumentError("cannot derive window: no records");
  std::int64_t lo = records.front().time;
  std::int64_t hi = records.front().time;
  for (const auto& r : records) {
    lo = std::min(lo, r.time);
    hi = std::max(hi, r.time);
  }
  return {civil_from_days(floor_div(lo + utc_offset_seconds, 86400)),
          civil_from_days(floor_div(hi + utc_offset_seconds, 86400))};
}

}  // namespace temponet
