#include "bellsim/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace bellsim {

namespace {

std::string cell_text(const Cell& cell, const PrintOptions& opt) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d, opt.full_precision);
  return std::get<std::string>(cell);
}

nlohmann::ordered_json cell_json(const Cell& cell, const PrintOptions& opt) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (std::holds_alternative<double>(cell)) {
    // parse the formatted text so JSON and CSV carry the same value
    return nlohmann::ordered_json::parse(cell_text(cell, opt));
  }
  return std::get<std::string>(cell);
}

}  // namespace

std::string format_double(double v, bool full_precision) {
  if (!std::isfinite(v)) {
    throw std::domain_error("output: payload value is not finite");
  }
  char buf[64];
  if (full_precision) {
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  }
  const int n = std::snprintf(buf, sizeof buf, "%.7g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string render_table_csv(const Table& table, const PrintOptions& opt) {
  std::string out = "# table: " + table.name + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out.push_back(',');
    out.append(table.columns[c]);
  }
  out.push_back('\n');
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out.push_back(',');
      out.append(cell_text(row[c], opt));
    }
    out.push_back('\n');
  }
  return out;
}

std::string render(const OutputDocument& doc, OutputFormat format, const PrintOptions& opt) {
  if (format == OutputFormat::Csv) {
    std::string out = "# kind: " + doc.kind + "\n";
    for (const auto& [key, value] : doc.metadata) {
      out += "# " + key + ": " + value + "\n";
    }
    for (std::size_t t = 0; t < doc.tables.size(); ++t) {
      if (t) out.push_back('\n');
      out += render_table_csv(doc.tables[t], opt);
    }
    return out;
  }

  nlohmann::ordered_json j;
  j["kind"] = doc.kind;
  auto& meta = j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : doc.metadata) meta[key] = value;
  auto& tables = j["tables"] = nlohmann::ordered_json::object();
  for (const Table& table : doc.tables) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
        obj[table.columns[c]] = cell_json(row[c], opt);
      }
      rows.push_back(std::move(obj));
    }
    tables[table.name] = std::move(rows);
  }
  return j.dump(2) + "\n";
}

}  // namespace bellsim
