#include "qtraj/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qtraj/errors.hpp"

namespace qtraj {

namespace {

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_csv(const std::string& path, const CsvTable& table) {
    if (table.header.empty() || table.header.size() != table.columns.size())
        throw ConfigError("write_csv: header and column counts must match and be nonempty");
    const std::size_t n_rows = table.rows();
    for (const auto& col : table.columns)
        if (col.size() != n_rows) throw ConfigError("write_csv: ragged columns");

    std::string out;
    out.reserve(64 + n_rows * table.columns.size() * 26);
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c) out += ',';
        out += table.header[c];
    }
    out += '\n';
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out += ',';
            append_double(out, table.columns[c][r]);
        }
        out += '\n';
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("write_csv: cannot open for writing: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    f.flush();
    if (!f) throw ConfigError("write_csv: write failed: " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("read_csv: cannot open: " + path);

    CsvTable table;
    std::string line;
    if (!std::getline(f, line)) throw ConfigError("read_csv: empty file: " + path);
    table.header = split_fields(line);
    if (table.header.empty() || table.header.front().empty())
        throw ConfigError("read_csv: missing header: " + path);
    table.columns.assign(table.header.size(), {});

    std::size_t line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (fields.size() != table.header.size())
            throw ConfigError("read_csv: wrong field count at " + path + ":" +
                              std::to_string(line_no));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const char* s = fields[c].c_str();
            char* end = nullptr;
            const double v = std::strtod(s, &end);
            if (end == s || *end != '\0')
                throw ConfigError("read_csv: bad number '" + fields[c] + "' at " + path + ":" +
                                  std::to_string(line_no));
            table.columns[c].push_back(v);
        }
    }
    return table;
}

CsvTable trajectory_table(const TrajectoryRecord& record, const std::vector<double>* loglik) {
    const std::size_t n = record.steps();
    if (record.t.size() != n + 1) throw ConfigError("trajectory_table: malformed record");
    if (loglik && loglik->size() != n + 1)
        throw ConfigError("trajectory_table: log-likelihood length must match record");

    auto tail = [n](const std::vector<double>& v) {
        return std::vector<double>(v.begin() + 1, v.end());
    };
    CsvTable table;
    table.header = {"t", "x", "y", "z", "dW", "dY", "Y"};
    table.columns = {tail(record.t),  tail(record.x),  tail(record.y), tail(record.z),
                     tail(record.dW), tail(record.dY), tail(record.Y)};
    if (loglik) {
        table.header.push_back("l");
        table.columns.push_back(tail(*loglik));
    }
    return table;
}

CsvTable fisher_table(const FisherSeries& series) {
    if (series.fisher_info.size() != series.t.size() || series.stderr_.size() != series.t.size())
        throw ConfigError("fisher_table: malformed series");
    CsvTable table;
    table.header = {"t", "I", "stderr", "n_ensemble"};
    table.columns = {series.t, series.fisher_info, series.stderr_,
                     std::vector<double>(series.t.size(), static_cast<double>(series.n_ensemble))};
    return table;
}

CsvTable mh_table(const MHChain& chain) {
    if (chain.accepted.size() != chain.samples.size())
        throw ConfigError("mh_table: malformed chain");
    const std::size_t n = chain.samples.size();
    CsvTable table;
    table.header = {"step", "value", "accepted"};
    table.columns.assign(3, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        table.columns[0][k] = static_cast<double>(k);
        table.columns[1][k] = chain.samples[k];
        table.columns[2][k] = chain.accepted[k] ? 1.0 : 0.0;
    }
    return table;
}

CsvTable qfi_table(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size()) throw ConfigError("qfi_table: length mismatch");
    CsvTable table;
    table.header = {"t", "qfi"};
    table.columns = {times, values};
    return table;
}

}  // namespace qtraj
