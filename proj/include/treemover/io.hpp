// Dataset and table I/O.
//
// Text formats are deterministic: the same in-memory value always produces
// the same bytes, and reals carry 17 significant digits so that
// parse(serialize(x)) == x bitwise.
#pragma once

#include <string>
#include <vector>

#include "treemover/graph.hpp"

namespace treemover {

enum class DatasetFormat { jsonl, single_json };

// ".json" selects single_json, everything else (including ".jsonl") jsonl.
DatasetFormat dataset_format_for_path(const std::string& path);

// Reads and fully validates a dataset. Node ids in the file may be arbitrary
// nonnegative integers; they are compacted to 0..n-1 in input order.
// Malformed JSON raises ValidationError with a line number; invariant
// violations raise ValidationError naming the graph index and rule; an
// unreadable file raises IoError.
GraphDataset parse_dataset(const std::string& path, DatasetFormat format);

void serialize_dataset(const GraphDataset& ds, const std::string& path, DatasetFormat format);

// Round-trip-exact decimal rendering of a finite double (17 significant digits).
std::string format_real(double v);

// Rows of reals under a named header line.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Square or rectangular table whose header is the column index 0..m-1.
void write_matrix_csv(const std::string& path, const std::vector<std::vector<double>>& rows);

// Reads a CSV produced by write_csv/write_matrix_csv. All data cells must be
// numeric; the header is returned through `header` when non-null.
std::vector<std::vector<double>> read_csv(const std::string& path,
                                          std::vector<std::string>* header = nullptr);

// Single-column convenience wrappers.
void write_column_csv(const std::string& path, const std::string& name,
                      const std::vector<double>& values);
std::vector<double> read_column_csv(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace treemover
