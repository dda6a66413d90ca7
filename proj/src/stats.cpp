#include "l2infer/stats.hpp"

#include <stdexcept>

#include "l2infer/estimate.hpp"

namespace l2 {

std::vector<double> DataMatrix::mean_row() const {
    const int nn = n(), pp = p();
    std::vector<KahanSum> acc(static_cast<std::size_t>(pp));
    for (int i = 0; i < nn; ++i) {
        const auto r = row(i);
        for (int j = 0; j < pp; ++j) acc[static_cast<std::size_t>(j)].add(r[static_cast<std::size_t>(j)]);
    }
    std::vector<double> out(static_cast<std::size_t>(pp));
    for (int j = 0; j < pp; ++j) out[static_cast<std::size_t>(j)] = acc[static_cast<std::size_t>(j)].value() / nn;
    return out;
}

DataMatrix DataMatrix::shifted(const std::vector<double>& mu) const {
    if (static_cast<int>(mu.size()) != p())
        throw std::invalid_argument("DataMatrix::shifted: dimension mismatch");
    DataMatrix out = *this;
    for (int i = 0; i < n(); ++i) {
        auto r = out.row(i);
        for (int j = 0; j < p(); ++j) r[static_cast<std::size_t>(j)] -= mu[static_cast<std::size_t>(j)];
    }
    return out;
}

double n_mean_norm_sq(const DataMatrix& x) {
    const std::vector<double> mean = x.mean_row();
    return static_cast<double>(x.n()) * compensated_dot(mean, mean);
}

double sum_row_norm_sq(const DataMatrix& x) {
    KahanSum s;
    for (int i = 0; i < x.n(); ++i) {
        const auto r = x.row(i);
        s.add(compensated_dot(r, r));
    }
    return s.value();
}

double statistic_Rn(const DataMatrix& x, double f1, double f) {
    if (!(f > 0.0)) throw std::invalid_argument("statistic_Rn: f must be positive");
    return (n_mean_norm_sq(x) - f1) / f;
}

double statistic_tilde_Rn(const DataMatrix& x, double f) {
    if (x.n() < 2) throw std::invalid_argument("statistic_tilde_Rn: needs n >= 2");
    if (!(f > 0.0)) throw std::invalid_argument("statistic_tilde_Rn: f must be positive");
    const double n = static_cast<double>(x.n());
    const double cross = n * n_mean_norm_sq(x) - sum_row_norm_sq(x);
    return cross / ((n - 1.0) * f);
}

double statistic_hat_Rn(const DataMatrix& x) {
    if (x.n() < 3) throw std::invalid_argument("statistic_hat_Rn: needs n >= 3");
    const double fd = f_dagger(x);
    return (n_mean_norm_sq(x) - f1_hat(x)) / fd;
}

}  // namespace l2
