#include "cmlab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cmlab/error.hpp"

namespace cmlab {

namespace {

Error bad_file(const std::string& path, std::size_t line, const std::string& what) {
  return Error("bad_point_file", path + ":" + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, out);
  return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

void escape_string(const std::string& s, std::string& out) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

void dump_value(const Json& v, int indent, int level, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (level + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * level), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      out += nl;
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) {
          out += ',';
          out += nl;
        }
        first = false;
        out += pad;
        escape_string(it.key(), out);
        out += indent > 0 ? ": " : ":";
        dump_value(it.value(), indent, level + 1, out);
      }
      out += nl;
      out += close_pad;
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      const bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += flat ? (indent > 0 ? ", " : ",") : ",";
        first = false;
        if (!flat) {
          out += nl;
          out += pad;
        }
        dump_value(e, indent, level + 1, out);
      }
      if (!flat) {
        out += nl;
        out += close_pad;
      }
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_double(d) : "null";
      return;
    }
    case Json::value_t::string:
      escape_string(v.get_ref<const std::string&>(), out);
      return;
    default:
      out += v.dump();
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const Json& value, int indent) {
  std::string out;
  dump_value(value, indent, 0, out);
  out += '\n';
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot open " + path + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io_error", "cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw Error("io_error", "write failed for " + path);
}

PointFile read_point_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open point file " + path);
  PointFile pf;
  bool have_header = false;
  std::optional<bool> weighted;
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> fields;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    if (row.front() == '#') {
      if (!have_header) {
        std::string_view h = trim(row.substr(1));
        constexpr std::string_view key = "manifold=";
        if (h.substr(0, key.size()) != key) {
          throw bad_file(path, lineno, "expected '# manifold=<torus:d|sphere2|circle>' header");
        }
        try {
          pf.manifold = Manifold::parse(trim(h.substr(key.size())));
        } catch (const Error& e) {
          throw bad_file(path, lineno, e.what());
        }
        have_header = true;
      }
      continue;
    }
    if (!have_header) throw bad_file(path, lineno, "data before the '# manifold=' header");
    fields.clear();
    std::string_view rest = row;
    for (;;) {
      const auto comma = rest.find(',');
      double v = 0.0;
      if (!parse_double(rest.substr(0, comma), v)) {
        throw bad_file(path, lineno, "not a finite number: '" + std::string(trim(rest.substr(0, comma))) + "'");
      }
      fields.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    const auto chart = static_cast<std::size_t>(pf.manifold.chart_size());
    bool this_weighted;
    if (fields.size() == chart) {
      this_weighted = false;
    } else if (fields.size() == chart + 1) {
      this_weighted = true;
    } else {
      throw bad_file(path, lineno,
                     "expected " + std::to_string(chart) + " coordinates and an optional weight, got " +
                         std::to_string(fields.size()) + " fields");
    }
    if (weighted && *weighted != this_weighted) {
      throw bad_file(path, lineno, "weight column present on some rows only");
    }
    weighted = this_weighted;
    try {
      pf.points.push_back(make_point(pf.manifold, std::span<const double>(fields.data(), chart)));
    } catch (const Error& e) {
      throw bad_file(path, lineno, e.what());
    }
    if (this_weighted) pf.weights.push_back(fields.back());
  }
  if (!have_header) throw bad_file(path, lineno, "missing '# manifold=' header");
  if (pf.points.empty()) throw bad_file(path, lineno, "no points");
  pf.has_weights = weighted.value_or(false);
  if (!pf.has_weights) {
    pf.weights.assign(pf.points.size(), 1.0 / static_cast<double>(pf.points.size()));
  }
  return pf;
}

void write_point_file(const std::string& path, const Manifold& m, const std::vector<Point>& points,
                      const std::vector<double>* weights) {
  std::string text = "# manifold=" + m.name() + "\n";
  for (std::size_t j = 0; j < points.size(); ++j) {
    for (int i = 0; i < m.chart_size(); ++i) {
      if (i > 0) text += ',';
      text += format_double(points[j][static_cast<std::size_t>(i)]);
    }
    if (weights) {
      text += ',';
      text += format_double((*weights)[j]);
    }
    text += '\n';
  }
  write_text_file(path, text);
}

}  // namespace cmlab
