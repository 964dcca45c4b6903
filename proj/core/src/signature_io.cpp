#include "sigverify/signature_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "sigverify/errors.hpp"

namespace sigverify {

const char* to_string(SampleLabel label) {
  return label == SampleLabel::genuine ? "genuine" : "skilled_forgery";
}

SampleLabel label_from_string(const std::string& s) {
  if (s == "genuine") return SampleLabel::genuine;
  if (s == "skilled_forgery" || s == "forgery") return SampleLabel::skilled_forgery;
  throw InvalidArgument("unknown sample label '" + s + "'");
}

std::vector<Point2> OnlineSignature::xy() const {
  std::vector<Point2> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back({p.x, p.y});
  return out;
}

void validate(const OnlineSignature& sig) {
  if (sig.points.empty()) throw InvalidArgument("signature has no points");
  std::optional<std::int64_t> last_t;
  for (std::size_t i = 0; i < sig.points.size(); ++i) {
    const auto& p = sig.points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidArgument("non-finite coordinate at point " + std::to_string(i + 1));
    }
    if (p.t) {
      if (last_t && *p.t < *last_t) {
        throw InvalidArgument("decreasing timestamp at point " + std::to_string(i + 1));
      }
      last_t = p.t;
    }
  }
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_on(std::string_view line, bool comma) {
  std::vector<std::string_view> fields;
  if (comma) {
    std::size_t start = 0;
    while (true) {
      const auto end = line.find(',', start);
      fields.push_back(trim(line.substr(start, end == std::string_view::npos ? end : end - start)));
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
    return fields;
  }
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const auto start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

double parse_number(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_no) + ": non-numeric field '" +
                     std::string(field) + "'");
  }
  return value;
}

}  // namespace

OnlineSignature parse_svc(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t cursor = 0;
  while (cursor < lines.size() && trim(lines[cursor]).empty()) ++cursor;
  if (cursor == lines.size()) throw ParseError("line 1: missing point count");

  const auto count_field = trim(lines[cursor]);
  std::size_t declared = 0;
  {
    const auto [ptr, ec] =
        std::from_chars(count_field.data(), count_field.data() + count_field.size(), declared);
    if (ec != std::errc{} || ptr != count_field.data() + count_field.size() || declared == 0) {
      throw ParseError("line " + std::to_string(cursor + 1) + ": malformed point count '" +
                       std::string(count_field) + "'");
    }
  }

  OnlineSignature sig;
  sig.points.reserve(declared);
  for (std::size_t i = cursor + 1; i < lines.size() && sig.points.size() < declared; ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = split_on(line, false);
    if (fields.size() < 2) {
      throw ParseError("line " + std::to_string(i + 1) + ": expected at least 2 fields");
    }
    PenPoint p;
    p.x = parse_number(fields[0], i + 1);
    p.y = parse_number(fields[1], i + 1);
    if (fields.size() >= 3) p.t = static_cast<std::int64_t>(std::llround(parse_number(fields[2], i + 1)));
    if (fields.size() >= 4) p.pen_down = parse_number(fields[3], i + 1) != 0.0;
    sig.points.push_back(p);
  }
  if (sig.points.size() != declared) {
    throw ParseError("expected " + std::to_string(declared) + " points, found " +
                     std::to_string(sig.points.size()));
  }
  return sig;
}

OnlineSignature parse_generic_csv(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t cursor = 0;
  while (cursor < lines.size() && trim(lines[cursor]).empty()) ++cursor;
  if (cursor == lines.size()) throw ParseError("line 1: missing header");

  const auto header = split_on(trim(lines[cursor]), true);
  int col_x = -1, col_y = -1, col_t = -1, col_pen = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "x") col_x = static_cast<int>(c);
    else if (header[c] == "y") col_y = static_cast<int>(c);
    else if (header[c] == "t") col_t = static_cast<int>(c);
    else if (header[c] == "pen") col_pen = static_cast<int>(c);
  }
  if (col_x < 0) throw ParseError("column x missing");
  if (col_y < 0) throw ParseError("column y missing");

  OnlineSignature sig;
  for (std::size_t i = cursor + 1; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    const auto cells = split_on(line, true);
    if (cells.size() != header.size()) {
      throw ParseError("line " + std::to_string(i + 1) + ": expected " +
                       std::to_string(header.size()) + " cells, found " +
                       std::to_string(cells.size()));
    }
    PenPoint p;
    p.x = parse_number(cells[col_x], i + 1);
    p.y = parse_number(cells[col_y], i + 1);
    if (col_t >= 0) p.t = static_cast<std::int64_t>(std::llround(parse_number(cells[col_t], i + 1)));
    if (col_pen >= 0) p.pen_down = parse_number(cells[col_pen], i + 1) != 0.0;
    sig.points.push_back(p);
  }
  if (sig.points.empty()) throw ParseError("no data rows");
  return sig;
}

std::string to_generic_csv(const OnlineSignature& sig) {
  const bool has_t = !sig.points.empty() &&
                     std::all_of(sig.points.begin(), sig.points.end(), [](const PenPoint& p) { return p.t.has_value(); });
  std::ostringstream out;
  out.precision(17);
  out << (has_t ? "x,y,t,pen\n" : "x,y,pen\n");
  for (const auto& p : sig.points) {
    out << p.x << ',' << p.y;
    if (has_t) out << ',' << *p.t;
    out << ',' << (p.pen_down ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

OnlineSignature read_signature_file(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  try {
    return ext == ".csv" ? parse_generic_csv(text) : parse_svc(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace sigverify
