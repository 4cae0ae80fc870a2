#include "rankagg_cli/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace rankagg::cli {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DataError("line " + std::to_string(line) + ": '" + s + "' is not a number");
    return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_dataset(std::ostream& out, const Dataset& data) {
    data.validate();
    const std::size_t d = data.features.d(), K = data.K();
    for (std::size_t j = 0; j < d; ++j) out << (j ? "," : "") << 'f' << j;
    for (std::size_t k = 0; k < K; ++k) out << ",y" << k;
    out << '\n';
    for (std::size_t i = 0; i < data.n(); ++i) {
        const auto row = data.features.row(i);
        for (std::size_t j = 0; j < d; ++j) out << (j ? "," : "") << format_double(row[j]);
        for (std::size_t k = 0; k < K; ++k) out << ',' << static_cast<int>(data.labels(i, k));
        out << '\n';
    }
}

void write_dataset(const std::filesystem::path& path, const Dataset& data) {
    auto out = open_out(path);
    write_dataset(out, data);
}

Dataset read_dataset(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty dataset");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_line(line);
    std::size_t d = 0, K = 0;
    for (const auto& h : header) {
        const bool feature = h.size() > 1 && h[0] == 'f';
        const bool label = h.size() > 1 && h[0] == 'y';
        if (!feature && !label) throw DataError("unexpected column '" + h + "'");
        const std::string expect = (feature ? "f" : "y") + std::to_string(feature ? d : K);
        if (h != expect || (feature && K > 0))
            throw DataError("columns must be f0..f{d-1} followed by y0..y{K-1}; got '" + h + "'");
        (feature ? d : K)++;
    }
    if (d == 0 || K == 0) throw DataError("dataset needs at least one feature and one label column");

    std::vector<double> feats;
    std::vector<std::uint8_t> labels;
    std::size_t n = 0, lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != d + K)
            throw DataError("line " + std::to_string(lineno) + ": expected " + std::to_string(d + K) + " fields");
        for (std::size_t j = 0; j < d; ++j) feats.push_back(parse_double(cells[j], lineno));
        for (std::size_t k = 0; k < K; ++k) {
            const auto& c = cells[d + k];
            if (c != "0" && c != "1") throw DataError("line " + std::to_string(lineno) + ": labels must be 0 or 1");
            labels.push_back(c == "1" ? 1 : 0);
        }
        ++n;
    }
    if (n == 0) throw DataError("dataset has no rows");
    Matrix<double> x(n, d);
    std::ranges::copy(feats, x.data().begin());
    Matrix<std::uint8_t> y(n, K);
    std::ranges::copy(labels, y.data().begin());
    try {
        return Dataset{InstanceSet(std::move(x)), SampledLabels(std::move(y)), std::nullopt};
    } catch (const InvalidArgument& e) {
        throw DataError(e.what());
    }
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    return read_dataset(in);
}

void sort_rows(std::vector<ResultRow>& rows) {
    std::ranges::stable_sort(rows, [](const ResultRow& a, const ResultRow& b) {
        if (a.experiment != b.experiment) return a.experiment < b.experiment;
        const std::size_t m = std::min(a.params.size(), b.params.size());
        for (std::size_t i = 0; i < m; ++i)
            if (a.params[i].second != b.params[i].second) return a.params[i].second < b.params[i].second;
        if (a.params.size() != b.params.size()) return a.params.size() < b.params.size();
        if (a.method != b.method) return a.method < b.method;
        return a.seed < b.seed;
    });
}

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, bool timing) {
    out << "experiment,method,params,auc1,auc2,diff,min,auc1_se,auc2_se,diff_se,min_se,seed";
    if (timing) out << ",runtime_ms";
    out << '\n';
    auto opt = [](const std::vector<double>& v, std::size_t i) { return i < v.size() ? format_double(v[i]) : ""; };
    for (const auto& r : rows) {
        std::string params;
        for (const auto& [k, v] : r.params) params += (params.empty() ? "" : ";") + k + "=" + format_double(v);
        out << r.experiment << ',' << r.method << ',' << params << ',' << opt(r.auc, 0) << ',' << opt(r.auc, 1)
            << ',' << format_double(r.diff) << ',' << format_double(r.min) << ',' << opt(r.auc_se, 0) << ','
            << opt(r.auc_se, 1) << ',' << (r.diff_se ? format_double(*r.diff_se) : "") << ','
            << (r.min_se ? format_double(*r.min_se) : "") << ',' << r.seed;
        if (timing) out << ',' << format_double(r.runtime_ms);
        out << '\n';
    }
}

void write_rows(const std::filesystem::path& path, const std::vector<ResultRow>& rows, bool timing) {
    auto out = open_out(path);
    write_rows(out, rows, timing);
}

void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

}  // namespace rankagg::cli
