#ifndef L2INFER_IO_HPP
#define L2INFER_IO_HPP

#include <string>
#include <vector>

#include "l2infer/calibrate.hpp"
#include "l2infer/covtest.hpp"
#include "l2infer/diagnostics.hpp"
#include "l2infer/matrix.hpp"
#include "l2infer/mixture.hpp"
#include "l2infer/spectral.hpp"

namespace l2 {

/// Header-free dense CSV, rows = lines.
Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Matrix& m);

/// Covariance matrices as JSON arrays of arrays.
CovMatrix read_cov_json(const std::string& path);
void write_cov_json(const std::string& path, const CovMatrix& m);

CovMatrix read_cov_csv(const std::string& path);

/// One row or one column of numbers.
std::vector<double> read_vector_csv(const std::string& path);

/// Optional JSON sidecar {"mu0": [...]}.
std::vector<double> read_mu0_json(const std::string& path);

/// Two-column CSV (t, F(t)) over the atoms.
void write_cdf_csv(const std::string& path, const EmpiricalCdf& cdf);

/// Law as JSON {"weights": [...], "seed": ...}.
void write_law_json(const std::string& path, const MixtureLaw& law);
MixtureLaw read_law_json(const std::string& path);

std::string test_report_json(const TestReport& report);

/// Full Gamma matrix as CSV; refused beyond p = 10 (size guard).
void write_gamma_csv(const std::string& path, const GammaMatrix& gamma);

/// Eigenvalue sequence as a one-column CSV.
void write_spectrum_csv(const std::string& path, const Spectrum& s);
std::string diagnostics_json(const MomentDiagnostics& d, const std::string& model_name);

}  // namespace l2

#endif
