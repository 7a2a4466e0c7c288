#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mrc/dataset.hpp"

namespace mrc {

/// One parsed row. Covariates may be missing; the response may be right-censored
/// (delta = 0) and the row may carry a left-truncation value.
struct RawRecord {
  std::size_t line = 0;  // 1-based line in the source file
  double y = 0.0;
  double z = 0.0;
  bool z_missing = false;
  std::vector<double> x;
  std::vector<bool> x_missing;
  std::optional<int> delta;
  std::optional<double> trunc;

  bool has_missing() const;
  bool operator==(const RawRecord&) const = default;
};

/// Which CSV columns hold the response, anchor, free covariates and optional
/// censoring indicator / truncation value.
struct ColumnMap {
  std::string y;
  std::string z;
  std::vector<std::string> x;
  std::optional<std::string> delta;
  std::optional<std::string> trunc;

  /// Parses "y=time,z=age,x=a;b,delta=status,trunc=entry"; `x=` may also repeat.
  static ColumnMap parse(const std::string& text);
  std::string to_string() const;
};

struct RejectedRow {
  std::size_t line = 0;
  std::string reason;
};

struct LoadResult {
  std::vector<RawRecord> records;
  std::vector<RejectedRow> rejects;
};

/// Reads a headered CSV. Lines starting with '#' and blank lines are skipped.
/// Empty or NA covariate cells are flagged missing; a row with an empty or
/// non-numeric response, an unparseable cell, or y below its truncation value is
/// rejected with a reason. Throws SchemaError if a mapped column is absent.
LoadResult load_csv(const std::filesystem::path& path, const ColumnMap& columns);
LoadResult load_csv(std::istream& in, const ColumnMap& columns);

/// Writes records under the column names of `columns`; missing cells are left empty.
void write_csv(std::ostream& out, const std::vector<RawRecord>& records, const ColumnMap& columns);
void write_csv(const std::filesystem::path& path, const std::vector<RawRecord>& records,
               const ColumnMap& columns);

/// Counts of a complete-case reduction. Censoring is checked before missingness,
/// so each dropped record lands in exactly one category.
struct Provenance {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::size_t dropped_censored = 0;
  std::size_t dropped_missing = 0;
  std::size_t truncated_kept = 0;
};

/// Records that are uncensored (delta = 1 or absent) with every covariate present.
std::vector<RawRecord> filter_complete(const std::vector<RawRecord>& records, Provenance* provenance = nullptr);

struct CompleteCases {
  Dataset data;
  Provenance provenance;
};

/// Complete-case Dataset. Left-truncated records are kept unchanged.
/// Throws InsufficientData for fewer than two complete cases.
CompleteCases complete_cases(const std::vector<RawRecord>& records);

std::string provenance_json(const Provenance& p);

/// Converts a Dataset to records (all complete, no censoring columns).
std::vector<RawRecord> to_records(const Dataset& data);

}  // namespace mrc
