#pragma once

// Dataset and result CSV I/O. Datasets use the header f0..f{d-1}, y0..y{K-1};
// floats are written in shortest round-trip form with LF line endings.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rankagg/core.hpp"

namespace rankagg::cli {

std::string format_double(double v);

void write_dataset(std::ostream& out, const Dataset& data);
void write_dataset(const std::filesystem::path& path, const Dataset& data);

/// Throws DataError on schema or value errors.
Dataset read_dataset(std::istream& in);
Dataset read_dataset(const std::filesystem::path& path);

/// One result line; the schema is shared by every subcommand.
struct ResultRow {
    std::string experiment;
    std::string method;
    std::vector<std::pair<std::string, double>> params;
    std::vector<double> auc;
    std::vector<double> auc_se;  // empty unless aggregated over trials
    double diff = 0.0;
    double min = 0.0;
    std::optional<double> diff_se;
    std::optional<double> min_se;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;
};

/// Sorts by (experiment, parameter values, method, seed).
void sort_rows(std::vector<ResultRow>& rows);

/// Header: experiment,method,params,auc1,auc2,diff,min,auc1_se,auc2_se,diff_se,min_se,seed[,runtime_ms].
void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, bool timing = false);
void write_rows(const std::filesystem::path& path, const std::vector<ResultRow>& rows, bool timing = false);

/// Plain table with a header row.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);

}  // namespace rankagg::cli
