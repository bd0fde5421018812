// CSV artifacts: numeric tables written with 17-significant-digit floats so
// every value round-trips through the reader bit-exactly.
#pragma once

#include <string>
#include <vector>

#include "qtraj/fisher.hpp"
#include "qtraj/mh.hpp"
#include "qtraj/sme.hpp"

namespace qtraj {

/// Column-major numeric table with a one-line header.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// Write table to path ("%.17g" per value). Throws ConfigError on shape
/// mismatch or I/O failure.
void write_csv(const std::string& path, const CsvTable& table);

/// Read a table written by write_csv. Throws ConfigError on malformed input.
CsvTable read_csv(const std::string& path);

/// Trajectory columns t,x,y,z,dW,dY,Y (plus optional trailing l), one row per
/// step k = 1..n; the t=0 state is implicit in the initial condition.
CsvTable trajectory_table(const TrajectoryRecord& record,
                          const std::vector<double>* loglik = nullptr);

/// Fisher columns t,I,stderr,n_ensemble.
CsvTable fisher_table(const FisherSeries& series);

/// Chain columns step,value,accepted.
CsvTable mh_table(const MHChain& chain);

/// Columns t,qfi.
CsvTable qfi_table(const std::vector<double>& times, const std::vector<double>& values);

}  // namespace qtraj
