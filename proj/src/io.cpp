#include "l2infer/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace l2 {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << std::setprecision(17);
    return out;
}

std::vector<double> parse_csv_line(const std::string& line, const std::string& path) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        double v;
        try {
            v = std::stod(cell);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed CSV cell '" + cell + "' in " + path);
        }
        if (!std::isfinite(v))
            throw std::runtime_error("non-finite CSV cell '" + cell + "' in " + path);
        row.push_back(v);
    }
    return row;
}

}  // namespace

Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(parse_csv_line(line, path));
        if (rows.back().size() != rows.front().size())
            throw std::runtime_error("ragged CSV rows in " + path);
    }
    if (rows.empty()) throw std::runtime_error("empty CSV: " + path);
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    return m;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
    std::ofstream out = open_out(path);
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << m(r, c);
        }
        out << '\n';
    }
}

CovMatrix read_cov_csv(const std::string& path) { return CovMatrix(read_matrix_csv(path)); }

CovMatrix read_cov_json(const std::string& path) {
    std::ifstream in = open_in(path);
    nlohmann::json j;
    in >> j;
    if (!j.is_array() || j.empty()) throw std::runtime_error("covariance JSON must be an array of arrays");
    const int p = static_cast<int>(j.size());
    Matrix m(p, p);
    for (int r = 0; r < p; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != p)
            throw std::runtime_error("covariance JSON must be square");
        for (int c = 0; c < p; ++c) m(r, c) = j[r][c].get<double>();
    }
    return CovMatrix(std::move(m));
}

void write_cov_json(const std::string& path, const CovMatrix& m) {
    nlohmann::json j = nlohmann::json::array();
    for (int r = 0; r < m.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.dim(); ++c) row.push_back(m(r, c));
        j.push_back(row);
    }
    open_out(path) << j.dump(1) << '\n';
}

std::vector<double> read_vector_csv(const std::string& path) {
    const Matrix m = read_matrix_csv(path);
    std::vector<double> v;
    if (m.rows() == 1) {
        for (int c = 0; c < m.cols(); ++c) v.push_back(m(0, c));
    } else if (m.cols() == 1) {
        for (int r = 0; r < m.rows(); ++r) v.push_back(m(r, 0));
    } else {
        throw std::runtime_error("vector CSV must have one row or one column: " + path);
    }
    return v;
}

std::vector<double> read_mu0_json(const std::string& path) {
    std::ifstream in = open_in(path);
    nlohmann::json j;
    in >> j;
    if (!j.contains("mu0") || !j["mu0"].is_array())
        throw std::runtime_error("mu0 sidecar must contain an array field 'mu0'");
    return j["mu0"].get<std::vector<double>>();
}

void write_cdf_csv(const std::string& path, const EmpiricalCdf& cdf) {
    std::ofstream out = open_out(path);
    out << "t,F\n";
    const auto& xs = cdf.sorted_samples();
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << xs[i] << ',' << static_cast<double>(i + 1) / static_cast<double>(xs.size()) << '\n';
}

void write_law_json(const std::string& path, const MixtureLaw& law) {
    nlohmann::json j;
    j["weights"] = law.weights.weights();
    j["seed"] = law.rng_seed;
    open_out(path) << j.dump(1) << '\n';
}

MixtureLaw read_law_json(const std::string& path) {
    std::ifstream in = open_in(path);
    nlohmann::json j;
    in >> j;
    return MixtureLaw{MixtureWeights(j.at("weights").get<std::vector<double>>()),
                      j.at("seed").get<std::uint64_t>()};
}

void write_gamma_csv(const std::string& path, const GammaMatrix& gamma) {
    if (gamma.p() > 10)
        throw std::invalid_argument("write_gamma_csv: full Gamma export limited to p <= 10");
    write_matrix_csv(path, gamma.full());
}

void write_spectrum_csv(const std::string& path, const Spectrum& s) {
    std::ofstream out = open_out(path);
    for (double v : s.eigenvalues()) out << v << '\n';
}

std::string test_report_json(const TestReport& report) {
    nlohmann::json j;
    j["statistic"] = report.statistic;
    j["cutoff"] = report.cutoff;
    j["reject"] = report.reject;
    j["p_value_estimate"] = report.p_value_estimate;
    j["method"] = report.method;
    j["alpha"] = report.alpha;
    j["seed"] = report.seed;
    j["n"] = report.n;
    j["p"] = report.p;
    if (report.calibration_atoms > 0) j["calibration_atoms"] = report.calibration_atoms;
    if (report.m > 0) j["m"] = report.m;
    if (report.j > 0) j["J"] = report.j;
    if (report.n_mc > 0) j["N_mc"] = report.n_mc;
    return j.dump(1);
}

std::string diagnostics_json(const MomentDiagnostics& d, const std::string& model_name) {
    nlohmann::json j;
    j["model"] = model_name;
    j["delta"] = d.delta;
    j["K_delta_hat"] = d.k_delta_hat.value;
    j["K_delta_se"] = d.k_delta_hat.std_error;
    j["D_delta_hat"] = d.d_delta_hat.value;
    j["D_delta_se"] = d.d_delta_hat.std_error;
    j["EqX_over_fq_hat"] = d.eqx_hat.value;
    j["c_delta"] = d.c_delta;
    j["d_delta"] = d.d_delta;
    j["Kbar"] = d.k_bar ? nlohmann::json(*d.k_bar) : nlohmann::json(nullptr);
    j["Dbar"] = d.d_bar ? nlohmann::json(*d.d_bar) : nlohmann::json(nullptr);
    j["Cbar"] = d.c_bar ? nlohmann::json(*d.c_bar) : nlohmann::json(nullptr);
    j["DbarW"] = d.d_bar_w ? nlohmann::json(*d.d_bar_w) : nlohmann::json(nullptr);
    j["DbarW_proof_variant"] =
        d.d_bar_w_proof ? nlohmann::json(*d.d_bar_w_proof) : nlohmann::json(nullptr);
    j["L_dagger"] = d.l_dagger;
    j["psi_n"] = std::isinf(d.psi_n) ? nlohmann::json("unbounded") : nlohmann::json(d.psi_n);
    return j.dump(1);
}

}  // namespace l2
