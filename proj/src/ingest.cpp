#include "stdgm/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "stdgm/csv.hpp"
#include "stdgm/error.hpp"

namespace stdgm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::schema: return "schema";
    case ErrorKind::parse: return "parse";
    case ErrorKind::empty_input: return "empty_input";
    case ErrorKind::degenerate_window: return "degenerate_window";
    case ErrorKind::out_of_range: return "out_of_range";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::domain: return "domain";
    case ErrorKind::contract: return "contract";
    case ErrorKind::conditioning: return "conditioning";
    case ErrorKind::singular: return "singular";
    case ErrorKind::symmetry: return "symmetry";
    case ErrorKind::io: return "io";
    case ErrorKind::usage: return "usage";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// MultiPattern

std::vector<std::size_t> MultiPattern::counts() const {
  std::vector<std::size_t> n(labels.size(), 0);
  for (const auto& e : events) ++n[static_cast<std::size_t>(e.type)];
  return n;
}

std::vector<std::vector<std::size_t>> MultiPattern::counts_by_step() const {
  std::vector<std::vector<std::size_t>> n(labels.size(),
                                          std::vector<std::size_t>(static_cast<std::size_t>(steps()), 0));
  for (const auto& e : events) ++n[static_cast<std::size_t>(e.type)][static_cast<std::size_t>(e.step - 1)];
  return n;
}

MultiPattern MultiPattern::slice(int step) const {
  MultiPattern out;
  out.labels = labels;
  out.window = window;
  out.window.steps = 1;
  out.has_marks = has_marks;
  out.unit_square = unit_square;
  for (const auto& e : events) {
    if (e.step != step) continue;
    Event copy = e;
    copy.step = 1;
    out.events.push_back(copy);
  }
  return out;
}

MultiPattern MultiPattern::select(const std::vector<int>& components) const {
  std::vector<int> remap(labels.size(), -1);
  MultiPattern out;
  out.window = window;
  out.has_marks = has_marks;
  out.unit_square = unit_square;
  for (std::size_t k = 0; k < components.size(); ++k) {
    const int c = components[k];
    if (c < 0 || c >= static_cast<int>(labels.size()))
      throw Error(ErrorKind::parameter, "component index out of range: " + std::to_string(c));
    remap[static_cast<std::size_t>(c)] = static_cast<int>(k);
    out.labels.push_back(labels[static_cast<std::size_t>(c)]);
  }
  for (const auto& e : events) {
    const int r = remap[static_cast<std::size_t>(e.type)];
    if (r < 0) continue;
    Event copy = e;
    copy.type = r;
    out.events.push_back(copy);
  }
  return out;
}

void MultiPattern::validate() const {
  if (labels.size() < 2)
    throw Error(ErrorKind::contract, "a multitype pattern needs at least two component types");
  if (window.steps < 1) throw Error(ErrorKind::contract, "number of time steps must be >= 1");
  if (!(window.x_max > window.x_min) || !(window.y_max > window.y_min))
    throw Error(ErrorKind::degenerate_window, "window has zero extent");
  std::vector<bool> seen(labels.size(), false);
  const double x0 = unit_square ? 0.0 : window.x_min, x1 = unit_square ? 1.0 : window.x_max;
  const double y0 = unit_square ? 0.0 : window.y_min, y1 = unit_square ? 1.0 : window.y_max;
  for (const auto& e : events) {
    if (e.type < 0 || static_cast<std::size_t>(e.type) >= labels.size())
      throw Error(ErrorKind::contract, "event type index out of range");
    if (e.step < 1 || e.step > window.steps) throw Error(ErrorKind::contract, "event step outside 1..T");
    if (e.x < x0 || e.x > x1 || e.y < y0 || e.y > y1)
      throw Error(ErrorKind::out_of_range, "event outside the observation window");
    seen[static_cast<std::size_t>(e.type)] = true;
  }
  for (std::size_t k = 0; k < seen.size(); ++k)
    if (!seen[k]) throw Error(ErrorKind::contract, "component '" + labels[k] + "' has no events");
}

// ---------------------------------------------------------------------------
// Time handling

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's algorithm).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Civil {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

Civil civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

constexpr std::int64_t kDay = 86400;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool read_int(std::string_view s, std::size_t& pos, std::size_t digits, int& out) {
  if (pos + digits > s.size()) return false;
  int v = 0;
  for (std::size_t k = 0; k < digits; ++k) {
    const char c = s[pos + k];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  pos += digits;
  out = v;
  return true;
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t')) --b;
  return std::string(s.substr(a, b - a));
}

std::optional<double> parse_double(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> parse_integer(std::string_view text) {
  const std::string t = trim(text);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(const std::string& raw) {
  const std::string s = trim(raw);
  std::size_t pos = 0;
  int year = 0, month = 0, day = 1, hour = 0, minute = 0, second = 0;
  if (!read_int(s, pos, 4, year)) return std::nullopt;
  if (pos >= s.size() || s[pos] != '-') return std::nullopt;
  ++pos;
  if (!read_int(s, pos, 2, month) || month < 1 || month > 12) return std::nullopt;
  if (pos < s.size()) {
    if (s[pos] != '-') return std::nullopt;
    ++pos;
    if (!read_int(s, pos, 2, day) || day < 1 || day > 31) return std::nullopt;
    if (pos < s.size()) {
      if (s[pos] != 'T' && s[pos] != ' ') return std::nullopt;
      ++pos;
      if (!read_int(s, pos, 2, hour) || hour > 23) return std::nullopt;
      if (pos >= s.size() || s[pos] != ':') return std::nullopt;
      ++pos;
      if (!read_int(s, pos, 2, minute) || minute > 59) return std::nullopt;
      if (pos < s.size() && s[pos] == ':') {
        ++pos;
        if (!read_int(s, pos, 2, second) || second > 60) return std::nullopt;
        if (pos < s.size() && s[pos] == '.') {
          ++pos;
          while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;  // fractional seconds dropped
        }
      }
      if (pos < s.size() && s[pos] == 'Z') ++pos;
      if (pos != s.size()) return std::nullopt;
    }
  }
  const auto days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  return days * kDay + hour * 3600 + minute * 60 + second;
}

BinWidth BinWidth::parse(const std::string& text) {
  const std::string t = trim(text);
  std::size_t k = 0;
  while (k < t.size() && t[k] >= '0' && t[k] <= '9') ++k;
  const auto count = parse_integer(t.substr(0, k));
  const std::string unit = t.substr(k);
  if (!count || *count <= 0) throw Error(ErrorKind::parameter, "bin width must be a positive duration: '" + text + "'");
  BinWidth w;
  w.count = *count;
  if (unit == "mo" || unit == "month" || unit == "months") {
    w.unit = Unit::months;
    return w;
  }
  w.unit = Unit::seconds;
  if (unit == "s") {
  } else if (unit == "min") {
    w.count *= 60;
  } else if (unit == "h") {
    w.count *= 3600;
  } else if (unit == "d") {
    w.count *= kDay;
  } else if (unit == "w") {
    w.count *= 7 * kDay;
  } else {
    throw Error(ErrorKind::parameter, "unknown bin width unit in '" + text + "'");
  }
  return w;
}

std::string BinWidth::to_string() const {
  return unit == Unit::months ? std::to_string(count) + "mo" : std::to_string(count) + "s";
}

BinnedTimes bin_times(const std::vector<Timestamp>& timestamps, const BinWidth& width,
                      std::optional<Timestamp> origin) {
  if (width.count <= 0) throw Error(ErrorKind::parameter, "bin width must be positive");
  BinnedTimes out;
  if (timestamps.empty()) return out;
  Timestamp start = origin ? *origin : *std::min_element(timestamps.begin(), timestamps.end());
  if (!origin && width.unit == BinWidth::Unit::months) {
    const Civil c = civil_from_days(floor_div(start, kDay));
    start = days_from_civil(c.year, c.month, 1) * kDay;
  }
  out.origin = start;
  const Civil oc = civil_from_days(floor_div(start, kDay));
  const std::int64_t origin_tod = start - floor_div(start, kDay) * kDay;
  out.steps.reserve(timestamps.size());
  for (const Timestamp ts : timestamps) {
    if (ts < start) throw Error(ErrorKind::out_of_range, "timestamp precedes the bin origin");
    std::int64_t index = 0;
    if (width.unit == BinWidth::Unit::seconds) {
      index = (ts - start) / width.count;
    } else {
      const Civil c = civil_from_days(floor_div(ts, kDay));
      std::int64_t months = (c.year - oc.year) * 12 + static_cast<std::int64_t>(c.month) -
                            static_cast<std::int64_t>(oc.month);
      const std::int64_t tod = ts - floor_div(ts, kDay) * kDay;
      if (c.day < oc.day || (c.day == oc.day && tod < origin_tod)) --months;
      index = months / width.count;
    }
    const int step = static_cast<int>(index + 1);
    out.steps.push_back(step);
    out.total_steps = std::max(out.total_steps, step);
  }
  return out;
}

void ColumnMap::apply(const std::string& spec) {
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::usage, "column mapping must be key=name: '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    const std::string name = trim(item.substr(eq + 1));
    if (key == "x") x = name;
    else if (key == "y") y = name;
    else if (key == "time") time = name;
    else if (key == "type") type = name;
    else if (key == "mark") mark = name;
    else throw Error(ErrorKind::usage, "unknown column key '" + key + "'");
  }
}

// ---------------------------------------------------------------------------
// Loading

LoadResult load_events_from_string(const std::string& text, const LoadOptions& options) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (!t.empty() && t.front() != '#') {
      header = csv::split_record(line);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorKind::empty_input, "input is empty");
  for (auto& h : header) h = trim(h);

  auto find = [&](const std::string& name, bool required) -> int {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return static_cast<int>(k);
    if (required) throw Error(ErrorKind::schema, "missing required column '" + name + "'");
    return -1;
  };
  const int cx = find(options.columns.x, true);
  const int cy = find(options.columns.y, true);
  const int ct = find(options.columns.time, true);
  const int ctype = find(options.columns.type, true);
  const int cmark = options.read_marks ? find(options.columns.mark, false) : -1;
  const int needed = std::max({cx, cy, ct, ctype, cmark}) + 1;

  struct Row {
    double x, y;
    long long time;
    int type;
    double mark;
  };
  std::vector<Row> rows;
  std::vector<std::string> labels;
  std::unordered_map<std::string, int> label_index;
  std::set<std::tuple<double, double, long long, int>> seen;
  LoadResult result;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = csv::split_record(line);
    if (static_cast<int>(fields.size()) < needed) throw ParseError(line_no, "too few fields");
    const auto x = parse_double(fields[static_cast<std::size_t>(cx)]);
    const auto y = parse_double(fields[static_cast<std::size_t>(cy)]);
    if (!x) throw ParseError(line_no, "non-numeric x coordinate '" + fields[static_cast<std::size_t>(cx)] + "'");
    if (!y) throw ParseError(line_no, "non-numeric y coordinate '" + fields[static_cast<std::size_t>(cy)] + "'");
    long long time = 0;
    const std::string& tf = fields[static_cast<std::size_t>(ct)];
    if (options.time_is_index) {
      const auto v = parse_integer(tf);
      if (!v || *v < 1) throw ParseError(line_no, "time index must be an integer >= 1, got '" + tf + "'");
      time = *v;
    } else {
      const auto v = parse_timestamp(tf);
      if (!v) throw ParseError(line_no, "unparseable timestamp '" + tf + "'");
      time = *v;
    }
    const std::string label = trim(fields[static_cast<std::size_t>(ctype)]);
    if (label.empty()) throw ParseError(line_no, "empty type label");
    auto it = label_index.find(label);
    if (it == label_index.end()) {
      it = label_index.emplace(label, static_cast<int>(labels.size())).first;
      labels.push_back(label);
    }
    double mark = 0.0;
    if (cmark >= 0) {
      const auto m = parse_double(fields[static_cast<std::size_t>(cmark)]);
      if (!m) throw ParseError(line_no, "non-numeric or missing mark '" + fields[static_cast<std::size_t>(cmark)] + "'");
      mark = *m;
    }
    ++result.rows_read;
    if (!seen.emplace(*x, *y, time, it->second).second) {
      ++result.duplicates_removed;
      continue;
    }
    rows.push_back({*x, *y, time, it->second, mark});
  }
  if (rows.empty()) throw Error(ErrorKind::empty_input, "input has a header but no events");

  MultiPattern& p = result.pattern;
  p.labels = labels;
  p.has_marks = cmark >= 0;
  std::vector<int> steps(rows.size());
  if (options.time_is_index) {
    long long max_step = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      steps[k] = static_cast<int>(rows[k].time);
      max_step = std::max(max_step, rows[k].time);
    }
    p.window.steps = static_cast<int>(max_step);
  } else {
    std::vector<Timestamp> ts(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) ts[k] = rows[k].time;
    const auto binned = bin_times(ts, options.bin_width, options.bin_origin);
    steps = binned.steps;
    p.window.steps = binned.total_steps;
  }
  p.events.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k)
    p.events.push_back({rows[k].x, rows[k].y, steps[k], rows[k].type, rows[k].mark});

  if (options.window) {
    const int steps_total = p.window.steps;
    p.window = *options.window;
    p.window.steps = steps_total;
    for (const auto& e : p.events)
      if (e.x < p.window.x_min || e.x > p.window.x_max || e.y < p.window.y_min || e.y > p.window.y_max)
        throw Error(ErrorKind::out_of_range, "event outside the supplied window");
  } else {
    p.window.x_min = p.window.y_min = std::numeric_limits<double>::infinity();
    p.window.x_max = p.window.y_max = -std::numeric_limits<double>::infinity();
    for (const auto& e : p.events) {
      p.window.x_min = std::min(p.window.x_min, e.x);
      p.window.x_max = std::max(p.window.x_max, e.x);
      p.window.y_min = std::min(p.window.y_min, e.y);
      p.window.y_max = std::max(p.window.y_max, e.y);
    }
  }
  return result;
}

LoadResult load_events(const std::filesystem::path& path, const LoadOptions& options) {
  if (!std::filesystem::exists(path)) throw Error(ErrorKind::io, "no such file: " + path.string());
  return load_events_from_string(csv::read_file(path), options);
}

MultiPattern rescale_to_unit_square(const MultiPattern& pattern) {
  if (pattern.unit_square) return pattern;
  const Window& w = pattern.window;
  if (!(w.width() > 0.0) || !(w.height() > 0.0))
    throw Error(ErrorKind::degenerate_window, "window has zero extent along at least one axis");
  MultiPattern out = pattern;
  for (auto& e : out.events) {
    e.x = std::clamp((e.x - w.x_min) / w.width(), 0.0, 1.0);
    e.y = std::clamp((e.y - w.y_min) / w.height(), 0.0, 1.0);
  }
  out.unit_square = true;
  return out;
}

std::string export_events_to_string(const MultiPattern& pattern) {
  std::string out = pattern.has_marks ? "x,y,time,type,mark\n" : "x,y,time,type\n";
  for (const auto& e : pattern.events) {
    out += csv::fmt(e.x) + "," + csv::fmt(e.y) + "," + std::to_string(e.step) + "," +
           csv::quote(pattern.labels[static_cast<std::size_t>(e.type)]);
    if (pattern.has_marks) out += "," + csv::fmt(e.mark);
    out += "\n";
  }
  return out;
}

void export_events(const MultiPattern& pattern, const std::filesystem::path& path) {
  csv::write_file(path, export_events_to_string(pattern));
}

}  // namespace stdgm
