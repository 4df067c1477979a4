#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "refless/error.hpp"
#include "refless/spectral_data.hpp"

namespace refless {

// Text records: one "name = v1, v2, ..." line per field, '#' starts a
// comment, blank lines ignored. Values are written with 17 significant
// digits so that every double survives a write/read cycle bit-exactly.

using Record = std::map<std::string, std::vector<double>, std::less<>>;

inline std::string format_double(double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_number(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
    throw Error(ErrorKind::ParseError,
                "malformed number '" + std::string(token) + "' on line " + std::to_string(line));
  return v;
}

}  // namespace detail

inline Record parse_record(std::string_view text) {
  Record rec;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::ParseError, "expected 'name = values' on line " + std::to_string(line_no));
    const std::string name(detail::trim(line.substr(0, eq)));
    if (name.empty()) throw Error(ErrorKind::ParseError, "empty field name on line " + std::to_string(line_no));
    if (rec.contains(name)) throw Error(ErrorKind::ParseError, "duplicate field '" + name + "'");

    std::vector<double> values;
    std::string_view rest = detail::trim(line.substr(eq + 1));
    if (!rest.empty() && rest.front() == '[' && rest.back() == ']')
      rest = detail::trim(rest.substr(1, rest.size() - 2));
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      values.push_back(detail::parse_number(rest.substr(0, comma), line_no));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
      if (detail::trim(rest).empty())
        throw Error(ErrorKind::ParseError, "trailing comma on line " + std::to_string(line_no));
    }
    rec.emplace(name, std::move(values));
  }
  return rec;
}

inline std::string render_record(const Record& rec, std::span<const std::string> order = {}) {
  std::ostringstream os;
  auto emit = [&](const std::string& name, const std::vector<double>& values) {
    os << name << " =";
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? ", " : " ") << format_double(values[i]);
    os << '\n';
  };
  for (const auto& name : order)
    if (auto it = rec.find(name); it != rec.end()) emit(it->first, it->second);
  for (const auto& [name, values] : rec)
    if (std::find(order.begin(), order.end(), name) == order.end()) emit(name, values);
  return os.str();
}

inline Record read_record_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw Error(ErrorKind::FileNotFound, path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileNotFound, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_record(ss.str());
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::WriteError, "cannot open " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::WriteError, "failed writing " + path.string());
}

inline const std::vector<double>& require_field(const Record& rec, std::string_view name) {
  auto it = rec.find(name);
  if (it == rec.end()) throw Error(ErrorKind::ParseError, "missing field '" + std::string(name) + "'");
  return it->second;
}

inline SpectralData spectral_from_record(const Record& rec) {
  return SpectralData{require_field(rec, "kappa"), require_field(rec, "m")};
}

inline ThreeSpectra three_from_record(const Record& rec) {
  return ThreeSpectra{require_field(rec, "kappa"), require_field(rec, "mu")};
}

inline Record to_record(const SpectralData& data) { return Record{{"kappa", data.kappa}, {"m", data.m}}; }

inline Record to_record(const ThreeSpectra& data) { return Record{{"kappa", data.kappa}, {"mu", data.mu}}; }

}  // namespace refless
