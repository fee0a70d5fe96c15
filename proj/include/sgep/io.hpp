#pragma once

// Plain CSV matrix files: one row per line, comma-separated decimal literals,
// no header. Vectors are one-column files. Writing uses the shortest decimal
// form that reads back to the same double.

#include <iosfwd>
#include <string>

#include "sgep/core.hpp"

namespace sgep::io {

DenseMatrix<double> parse_matrix_csv(std::istream& in, const std::string& source = "<stream>");
DenseMatrix<double> read_matrix_csv(const std::string& path);

/// Accepts a single column or a single row.
DenseVector<double> read_vector_csv(const std::string& path);

void write_matrix_csv(std::ostream& out, const DenseMatrix<double>& m);
void write_matrix_csv(const std::string& path, const DenseMatrix<double>& m);
void write_vector_csv(std::ostream& out, const DenseVector<double>& v);
void write_vector_csv(const std::string& path, const DenseVector<double>& v);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

/// Sets entries with |v_i| <= tol to exactly 0.
DenseVector<double> snap_to_zero(DenseVector<double> v, double tol);

}  // namespace sgep::io
