#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pfz/errors.hpp"
#include "pfz/io.hpp"

namespace pfz::io {

namespace {

std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  out.push_back(cell);
  return out;
}

std::string quote_if_needed(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

}  // namespace

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<double> Table::numeric_column(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= header.size())
    throw Error(ErrorKind::invalid_spec, "CSV column index out of range");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const std::string cell = trim(row[index]);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
      throw Error(ErrorKind::invalid_spec, "malformed number in CSV: '" + cell + "'");
    out.push_back(v);
  }
  return out;
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto record = split_record(line);
    if (!have_header) {
      for (auto& h : record) h = trim(h);
      t.header = std::move(record);
      have_header = true;
      continue;
    }
    if (record.size() != t.header.size())
      throw Error(ErrorKind::invalid_spec, "CSV row has " + std::to_string(record.size()) +
                                               " fields, header has " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(record));
  }
  if (!have_header) throw Error(ErrorKind::invalid_spec, "CSV input is empty (header row is mandatory)");
  return t;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_spec, "cannot open CSV file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

std::string to_csv(const Table& table) {
  std::string out;
  const auto emit = [&out](const std::vector<std::string>& record) {
    for (std::size_t i = 0; i < record.size(); ++i) {
      if (i) out += ',';
      out += quote_if_needed(record[i]);
    }
    out += "\r\n";
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::invalid_spec, "cannot write " + path);
  out << text;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace pfz::io
