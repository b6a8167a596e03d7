#include "hdwalk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hdwalk/errors.hpp"

namespace hdwalk {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

// ---------------------------------------------------------------------------
// PointCloud

PointCloud::PointCloud(std::size_t dim, std::string label) : dim_(dim), label_(std::move(label)) {
    if (dim == 0) throw StructuralError("PointCloud: dimension must be positive");
}

PointCloud PointCloud::from_rows(const std::vector<VectorD>& rows, std::string label) {
    if (rows.empty()) throw StructuralError("PointCloud: no points");
    PointCloud cloud(rows.front().size(), std::move(label));
    cloud.reserve(rows.size());
    for (const auto& r : rows) cloud.add(r);
    return cloud;
}

void PointCloud::add(std::span<const double> point) {
    if (point.size() != dim_) {
        throw StructuralError("PointCloud '" + label_ + "': point of dimension " +
                              std::to_string(point.size()) + " added to cloud of dimension " +
                              std::to_string(dim_));
    }
    for (double x : point) {
        if (!std::isfinite(x)) throw StructuralError("PointCloud '" + label_ + "': non-finite coordinate");
    }
    coords_.insert(coords_.end(), point.begin(), point.end());
}

PointCloud PointCloud::translated(std::span<const double> shift) const {
    if (shift.size() != dim_) throw StructuralError("PointCloud: translation of wrong dimension");
    PointCloud out(dim_, label_);
    out.coords_ = coords_;
    for (std::size_t i = 0; i < out.coords_.size(); ++i) out.coords_[i] += shift[i % dim_];
    return out;
}

PointCloud PointCloud::subset(std::span<const std::size_t> indices) const {
    PointCloud out(dim_, label_);
    out.reserve(indices.size());
    for (std::size_t idx : indices) {
        auto p = point(idx);
        out.coords_.insert(out.coords_.end(), p.begin(), p.end());
    }
    return out;
}

double PointCloud::diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j) best = std::max(best, squared_distance(point(i), point(j)));
    return std::sqrt(best);
}

// ---------------------------------------------------------------------------
// GramMatrix

GramMatrix GramMatrix::identity(std::size_t m) {
    GramMatrix g(m);
    for (std::size_t i = 0; i < m; ++i) g(i, i) = 1.0;
    return g;
}

GramMatrix GramMatrix::diagonal(std::span<const double> values) {
    GramMatrix g(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) g(i, i) = values[i];
    return g;
}

GramMatrix GramMatrix::from_rows(const std::vector<VectorD>& rows) {
    GramMatrix g(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw StructuralError("GramMatrix: rows must form a square matrix");
        for (std::size_t j = 0; j < rows.size(); ++j) g(i, j) = rows[i][j];
    }
    return g;
}

double GramMatrix::frobenius_norm() const {
    return std::sqrt(std::inner_product(a_.begin(), a_.end(), a_.begin(), 0.0));
}

GramMatrix GramMatrix::operator*(const GramMatrix& rhs) const {
    if (rhs.m_ != m_) throw StructuralError("GramMatrix: size mismatch in product");
    GramMatrix out(m_);
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t k = 0; k < m_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < m_; ++j) out(i, j) += aik * rhs(k, j);
        }
    return out;
}

GramMatrix GramMatrix::operator-(const GramMatrix& rhs) const {
    if (rhs.m_ != m_) throw StructuralError("GramMatrix: size mismatch in difference");
    GramMatrix out(m_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - rhs.a_[i];
    return out;
}

double GramMatrix::asymmetry() const {
    double scale = 0.0, defect = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j) {
            scale = std::max(scale, std::abs((*this)(i, j)));
            defect = std::max(defect, std::abs((*this)(i, j) - (*this)(j, i)));
        }
    return defect / std::max(scale, 1e-300);
}

GramMatrix gram_from_cloud(const PointCloud& cloud, std::size_t base_index) {
    if (base_index >= cloud.size()) throw StructuralError("gram_from_cloud: base index out of range");
    const std::size_t m = cloud.size() - 1;
    const auto base = cloud.point(base_index);

    std::vector<double> shifted(m * cloud.dim());
    std::size_t row = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (i == base_index) continue;
        auto p = cloud.point(i);
        for (std::size_t k = 0; k < cloud.dim(); ++k) shifted[row * cloud.dim() + k] = p[k] - base[k];
        ++row;
    }

    GramMatrix g(m);
    const std::size_t dim = cloud.dim();
    for (std::size_t i = 0; i < m; ++i) {
        std::span<const double> xi(shifted.data() + i * dim, dim);
        for (std::size_t j = i; j < m; ++j) {
            const double v = dot(xi, std::span<const double>(shifted.data() + j * dim, dim));
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Jacobi eigendecomposition

namespace {

double off_diagonal_norm(const GramMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

SymmetricEigen jacobi_eigen(const GramMatrix& g) {
    const std::size_t m = g.size();
    if (g.asymmetry() > kSymmetryTolerance) throw StructuralError("jacobi_eigen: matrix is not symmetric");

    GramMatrix a = g;
    GramMatrix v = GramMatrix::identity(m);
    const double target = 1e-13 * g.frobenius_norm();
    constexpr int kMaxSweeps = 100;

    for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < m; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < m; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymmetricEigen out{std::vector<double>(m), GramMatrix(m)};
    for (std::size_t k = 0; k < m; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < m; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

GramMatrix psd_sqrt(const GramMatrix& g) {
    const std::size_t m = g.size();
    if (m == 0) return g;
    const SymmetricEigen eig = jacobi_eigen(g);
    const double lambda_max = std::max(0.0, eig.values.back());
    std::vector<double> roots(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double lambda = eig.values[k];
        if (lambda < -kPsdNoiseFloor * lambda_max || (lambda_max == 0.0 && lambda < 0.0)) {
            throw NotPsdError("psd_sqrt: eigenvalue " + std::to_string(lambda) + " below noise floor (lambda_max " +
                              std::to_string(lambda_max) + ")");
        }
        roots[k] = std::sqrt(std::max(lambda, 0.0));
    }

    GramMatrix s(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < m; ++k) acc += eig.vectors(i, k) * roots[k] * eig.vectors(j, k);
            s(i, j) = acc;
            s(j, i) = acc;
        }
    return s;
}

}  // namespace hdwalk
