#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bellsim {

// One cell of a result table. Integers print without a decimal point;
// doubles go through the shared precision formatter so CSV and JSON carry
// the same numeric payload.
using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Self-describing result document. Metadata holds everything needed to
// reproduce the run (model, settings in degrees, seed, n_pairs, version);
// payload numerics are all finite by construction.
struct OutputDocument {
  std::string kind;  // correlation | chsh | scan | curve | tally
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<Table> tables;

  void meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }
};

enum class OutputFormat { Csv, Json };

struct PrintOptions {
  bool full_precision = false;  // shortest round-trip instead of 7 significant digits
};

// 7 significant digits by default, shortest round-trip representation when
// full precision is requested. Throws std::domain_error on non-finite input.
std::string format_double(double v, bool full_precision);

std::string render(const OutputDocument& doc, OutputFormat format, const PrintOptions& opt);

// The CSV section of a single table, exactly as render() emits it. Used for
// payload-level comparisons between documents.
std::string render_table_csv(const Table& table, const PrintOptions& opt);

}  // namespace bellsim
