#pragma once

// Small dense linear algebra: point clouds, Gram matrices and the PSD square
// root used by the isometric alignment estimator.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hdwalk {

using VectorD = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
inline double squared_norm(const VectorD& a) { return squared_norm(std::span<const double>(a)); }
double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

/// Ordered, nonempty set of points of a common dimension, stored row-major.
class PointCloud {
public:
    PointCloud(std::size_t dim, std::string label = {});

    /// Throws StructuralError if the rows differ in length or contain non-finite values.
    static PointCloud from_rows(const std::vector<VectorD>& rows, std::string label = {});

    void add(std::span<const double> point);
    void reserve(std::size_t count) { coords_.reserve(count * dim_); }

    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    bool empty() const { return coords_.empty(); }
    const std::string& label() const { return label_; }

    std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    std::span<double> point(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }

    PointCloud translated(std::span<const double> shift) const;
    PointCloud subset(std::span<const std::size_t> indices) const;
    double diameter() const;

private:
    std::size_t dim_;
    std::string label_;
    std::vector<double> coords_;
};

/// Dense symmetric m x m matrix. Used both for Gram matrices and their roots.
class GramMatrix {
public:
    GramMatrix() = default;
    explicit GramMatrix(std::size_t m) : m_(m), a_(m * m, 0.0) {}

    static GramMatrix identity(std::size_t m);
    static GramMatrix diagonal(std::span<const double> values);
    static GramMatrix from_rows(const std::vector<VectorD>& rows);

    std::size_t size() const { return m_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * m_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * m_ + j]; }
    std::span<const double> data() const { return a_; }

    double frobenius_norm() const;
    GramMatrix operator*(const GramMatrix& rhs) const;
    GramMatrix operator-(const GramMatrix& rhs) const;

    /// Relative symmetry defect max|a_ij - a_ji| / max(1e-300, max|a_ij|).
    double asymmetry() const;

private:
    std::size_t m_ = 0;
    std::vector<double> a_;
};

/// G[i][j] = <x_i - x_b, x_j - x_b> over the non-base points, in cloud order.
GramMatrix gram_from_cloud(const PointCloud& cloud, std::size_t base_index);

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    GramMatrix vectors;          // column k is the eigenvector for values[k]
};

/// Cyclic Jacobi rotations; stops when the off-diagonal Frobenius norm falls
/// below 1e-13 * ||G||_F.
SymmetricEigen jacobi_eigen(const GramMatrix& g);

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kPsdNoiseFloor = 1e-9;

/// Symmetric PSD square root. Eigenvalues in [-1e-9 * lambda_max, 0) are
/// clamped to zero; anything lower raises NotPsdError.
GramMatrix psd_sqrt(const GramMatrix& g);

}  // namespace hdwalk
