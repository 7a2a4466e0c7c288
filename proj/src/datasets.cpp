#include "mrc/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mrc/error.hpp"

namespace mrc {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Splits one CSV line; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "NA" || cell == "na" || cell == "NaN"; }

std::optional<double> parse_number(const std::string& cell) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string format_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::size_t require_column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw SchemaError("required column '" + name + "' not found in header");
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

bool RawRecord::has_missing() const {
  return z_missing || std::any_of(x_missing.begin(), x_missing.end(), [](bool m) { return m; });
}

ColumnMap ColumnMap::parse(const std::string& text) {
  ColumnMap map;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw SchemaError("column mapping '" + item + "' is not key=value");
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    if (value.empty()) throw SchemaError("column mapping for '" + key + "' is empty");
    if (key == "y") map.y = value;
    else if (key == "z") map.z = value;
    else if (key == "x") {
      std::stringstream xs(value);
      std::string name;
      while (std::getline(xs, name, ';'))
        if (!trim(name).empty()) map.x.push_back(trim(name));
    } else if (key == "delta") map.delta = value;
    else if (key == "trunc") map.trunc = value;
    else throw SchemaError("unknown column role '" + key + "'");
  }
  if (map.y.empty() || map.z.empty() || map.x.empty())
    throw SchemaError("column map must name y, z and at least one x column");
  return map;
}

std::string ColumnMap::to_string() const {
  std::string s = "y=" + y + ",z=" + z + ",x=";
  for (std::size_t k = 0; k < x.size(); ++k) s += (k ? ";" : "") + x[k];
  if (delta) s += ",delta=" + *delta;
  if (trunc) s += ",trunc=" + *trunc;
  return s;
}

LoadResult load_csv(const std::filesystem::path& path, const ColumnMap& columns) {
  std::ifstream in(path);
  if (!in) throw Error("datasets.io", "cannot open input file '" + path.string() + "'");
  return load_csv(in, columns);
}

LoadResult load_csv(std::istream& in, const ColumnMap& columns) {
  LoadResult result;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    header = split_csv(line);
    break;
  }
  if (header.empty()) throw SchemaError("file has no header row");

  const std::size_t iy = require_column(header, columns.y);
  const std::size_t iz = require_column(header, columns.z);
  std::vector<std::size_t> ix;
  for (const auto& name : columns.x) ix.push_back(require_column(header, name));
  const std::optional<std::size_t> idelta =
      columns.delta ? std::optional(require_column(header, *columns.delta)) : std::nullopt;
  const std::optional<std::size_t> itrunc =
      columns.trunc ? std::optional(require_column(header, *columns.trunc)) : std::nullopt;

  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split_csv(line);
    auto reject = [&](const std::string& why) { result.rejects.push_back({lineno, why}); };
    if (cells.size() != header.size()) {
      reject("expected " + std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()));
      continue;
    }
    RawRecord rec;
    rec.line = lineno;
    std::string problem;
    auto numeric = [&](std::size_t col, const char* role) -> std::optional<double> {
      const auto v = parse_number(cells[col]);
      if (!v && problem.empty())
        problem = std::string("non-numeric ") + role + " cell '" + cells[col] + "' in column '" + header[col] + "'";
      return v;
    };
    if (is_missing(cells[iy])) {
      reject("missing response in column '" + header[iy] + "'");
      continue;
    }
    if (const auto v = numeric(iy, "response")) rec.y = *v;
    rec.z_missing = is_missing(cells[iz]);
    if (!rec.z_missing) {
      if (const auto v = numeric(iz, "anchor")) rec.z = *v;
    }
    for (const std::size_t c : ix) {
      const bool missing = is_missing(cells[c]);
      double value = 0.0;
      if (!missing) {
        if (const auto v = numeric(c, "covariate")) value = *v;
      }
      rec.x.push_back(value);
      rec.x_missing.push_back(missing);
    }
    if (idelta) {
      if (is_missing(cells[*idelta])) {
        problem = "missing censoring indicator in column '" + header[*idelta] + "'";
      } else if (const auto v = numeric(*idelta, "censoring indicator")) {
        if (*v != 0.0 && *v != 1.0) problem = "censoring indicator must be 0 or 1, got '" + cells[*idelta] + "'";
        else rec.delta = static_cast<int>(*v);
      }
    }
    if (itrunc && !is_missing(cells[*itrunc])) {
      if (const auto v = numeric(*itrunc, "truncation")) {
        rec.trunc = *v;
        if (problem.empty() && rec.y < *v) problem = "response below its truncation value";
      }
    }
    if (!problem.empty()) {
      reject(problem);
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

void write_csv(std::ostream& out, const std::vector<RawRecord>& records, const ColumnMap& columns) {
  out << columns.y << ',' << columns.z;
  for (const auto& name : columns.x) out << ',' << name;
  if (columns.delta) out << ',' << *columns.delta;
  if (columns.trunc) out << ',' << *columns.trunc;
  out << '\n';
  for (const auto& r : records) {
    if (r.x.size() != columns.x.size())
      throw InvalidArgument("datasets", "record covariate count does not match the column map");
    out << format_number(r.y) << ',' << (r.z_missing ? "" : format_number(r.z));
    for (std::size_t k = 0; k < r.x.size(); ++k) out << ',' << (r.x_missing[k] ? "" : format_number(r.x[k]));
    if (columns.delta) out << ',' << (r.delta ? std::to_string(*r.delta) : "");
    if (columns.trunc) out << ',' << (r.trunc ? format_number(*r.trunc) : "");
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<RawRecord>& records, const ColumnMap& columns) {
  std::ofstream out(path);
  if (!out) throw Error("datasets.io", "cannot open output file '" + path.string() + "'");
  write_csv(out, records, columns);
}

std::vector<RawRecord> filter_complete(const std::vector<RawRecord>& records, Provenance* provenance) {
  Provenance p;
  p.input = records.size();
  std::vector<RawRecord> kept;
  for (const auto& r : records) {
    if (r.delta && *r.delta == 0) {
      ++p.dropped_censored;
    } else if (r.has_missing()) {
      ++p.dropped_missing;
    } else {
      if (r.trunc) ++p.truncated_kept;
      kept.push_back(r);
    }
  }
  p.kept = kept.size();
  if (provenance) *provenance = p;
  return kept;
}

CompleteCases complete_cases(const std::vector<RawRecord>& records) {
  Provenance p;
  const auto kept = filter_complete(records, &p);
  if (kept.size() < 2)
    throw InsufficientData("only " + std::to_string(kept.size()) + " complete case(s) out of " +
                           std::to_string(records.size()) + " records");
  const std::size_t d = kept.front().x.size();
  std::vector<double> y, z;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i].x.size() != d) throw InvalidArgument("datasets", "records have differing covariate counts");
    y.push_back(kept[i].y);
    z.push_back(kept[i].z);
    for (std::size_t k = 0; k < d; ++k)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = kept[i].x[k];
  }
  return {Dataset(std::move(y), std::move(z), std::move(x)), p};
}

std::string provenance_json(const Provenance& p) {
  nlohmann::ordered_json j;
  j["input"] = p.input;
  j["kept"] = p.kept;
  j["dropped_censored"] = p.dropped_censored;
  j["dropped_missing"] = p.dropped_missing;
  j["truncated_kept"] = p.truncated_kept;
  return j.dump();
}

std::vector<RawRecord> to_records(const Dataset& data) {
  std::vector<RawRecord> out;
  out.reserve(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    RawRecord r;
    r.line = i + 2;
    r.y = data.y()[i];
    r.z = data.z()[i];
    for (std::size_t k = 0; k < data.d(); ++k) {
      r.x.push_back(data.x()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
      r.x_missing.push_back(false);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mrc
