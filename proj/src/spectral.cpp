#include "l2infer/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "l2infer/errors.hpp"

namespace l2 {

CovMatrix::CovMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("CovMatrix: matrix must be square");
    double scale = 0.0;
    for (int r = 0; r < m_.rows(); ++r)
        for (int c = 0; c < m_.cols(); ++c) scale = std::max(scale, std::fabs(m_(r, c)));
    const double gap = m_.symmetry_gap();
    if (gap > kSymTol * std::max(scale, 1e-300) && gap > 0.0)
        throw std::invalid_argument("CovMatrix: input is not symmetric within tolerance");
    for (int r = 0; r < m_.rows(); ++r)
        for (int c = r + 1; c < m_.cols(); ++c) {
            const double s = 0.5 * (m_(r, c) + m_(c, r));
            m_(r, c) = s;
            m_(c, r) = s;
        }
}

double CovMatrix::trace() const {
    KahanSum s;
    for (int i = 0; i < dim(); ++i) s.add(m_(i, i));
    return s.value();
}

Spectrum::Spectrum(std::vector<double> eigenvalues_desc) : lambda_(std::move(eigenvalues_desc)) {
    for (std::size_t j = 0; j < lambda_.size(); ++j) {
        if (lambda_[j] < 0.0) throw std::invalid_argument("Spectrum: negative eigenvalue");
        if (j > 0 && lambda_[j] > lambda_[j - 1] * (1.0 + 1e-12) + 1e-300)
            throw std::invalid_argument("Spectrum: eigenvalues must be nonincreasing");
    }
    // Enforce exact monotonicity after the tolerance check.
    for (std::size_t j = 1; j < lambda_.size(); ++j)
        lambda_[j] = std::min(lambda_[j], lambda_[j - 1]);
    for (int k : {1, 2, 4}) f_cache_[k] = functional_f_k(static_cast<const Spectrum&>(*this), k);
}

MixtureWeights::MixtureWeights(std::vector<double> weights_desc) : a_(std::move(weights_desc)) {
    if (a_.empty()) throw std::invalid_argument("MixtureWeights: empty weight vector");
    KahanSum ss;
    for (std::size_t j = 0; j < a_.size(); ++j) {
        if (a_[j] < 0.0) throw std::invalid_argument("MixtureWeights: negative weight");
        if (j > 0 && a_[j] > a_[j - 1] + 1e-12)
            throw std::invalid_argument("MixtureWeights: weights must be nonincreasing");
        ss.add(a_[j] * a_[j]);
    }
    if (std::fabs(ss.value() - 1.0) > 1e-10)
        throw std::invalid_argument("MixtureWeights: sum of squared weights must be 1");
}

namespace {

// Householder reduction to tridiagonal form; `d` receives the diagonal and
// `e` the subdiagonal.  Adapted from the classical tred2/tql2 pair.
void tred2(Matrix& z, std::vector<double>& d, std::vector<double>& e) {
    const int n = z.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (int i = n - 1; i > 0; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::fabs(z(i, k));
            if (scale == 0.0) {
                e[i] = z(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    z(j, i) = z(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
                    for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = z(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) z(j, k) -= f * e[k] + g * z(i, k);
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
                for (int k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
            }
        }
        d[i] = z(i, i);
        z(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) {
            z(j, i) = 0.0;
            z(i, j) = 0.0;
        }
    }
}

// Implicit-shift QL on the tridiagonal form, accumulating eigenvectors in z.
void tql2(Matrix& z, std::vector<double>& d, std::vector<double>& e) {
    const int n = z.rows();
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 1e-300 + std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw std::runtime_error("sym_eigen: QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + ((g >= 0.0) ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

EigenDecomposition sym_eigen(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("sym_eigen: matrix must be square");
    const int n = m.rows();
    EigenDecomposition out;
    out.vectors = m;
    std::vector<double> d, e;
    if (n == 0) return out;
    tred2(out.vectors, d, e);
    tql2(out.vectors, d, e);
    // Sort descending, carrying the eigenvector columns along.
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] > d[b]; });
    out.values.resize(n);
    Matrix sorted(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = d[idx[j]];
        for (int i = 0; i < n; ++i) sorted(i, j) = out.vectors(i, idx[j]);
    }
    out.vectors = std::move(sorted);
    return out;
}

EigenDecomposition decompose_psd(const CovMatrix& m) {
    EigenDecomposition ed = sym_eigen(m.matrix());
    const double lmax = ed.values.empty() ? 0.0 : std::max(ed.values.front(), 0.0);
    for (double& v : ed.values) {
        if (v < -1e-8 * std::max(lmax, 1e-300))
            throw std::invalid_argument("spectrum_of: matrix is not PSD within tolerance");
        if (v < 0.0) v = 0.0;
    }
    return ed;
}

Spectrum spectrum_of(const CovMatrix& m) { return Spectrum(decompose_psd(m).values); }

double functional_f_k(const Spectrum& s, int k) {
    if (k < 1) throw std::invalid_argument("functional_f_k: k must be >= 1");
    auto it = s.f_cache_.find(k);
    if (it != s.f_cache_.end()) return it->second;
    KahanSum sum;
    for (double l : s.lambda_) sum.add(std::pow(l, static_cast<double>(k)));
    return std::pow(sum.value(), 1.0 / static_cast<double>(k));
}

double functional_f_k(Spectrum& s, int k) {
    const double v = functional_f_k(static_cast<const Spectrum&>(s), k);
    s.f_cache_[k] = v;
    return v;
}

MixtureWeights normalized_weights(const Spectrum& s) {
    const double f = s.f();
    if (!(f > 0.0)) throw DegenerateCovariance("normalized_weights: degenerate covariance");
    std::vector<double> a(s.eigenvalues().size());
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = s.eigenvalues()[j] / f;
    return MixtureWeights(std::move(a));
}

Matrix sym_sqrt(const CovMatrix& m) {
    const EigenDecomposition ed = decompose_psd(m);
    const int p = m.dim();
    Matrix out(p, p);
    for (int j = 0; j < p; ++j) {
        const double s = std::sqrt(ed.values[j]);
        if (s == 0.0) continue;
        for (int r = 0; r < p; ++r) {
            const double v = s * ed.vectors(r, j);
            if (v == 0.0) continue;
            for (int c = 0; c < p; ++c) out(r, c) += v * ed.vectors(c, j);
        }
    }
    return out;
}

}  // namespace l2
