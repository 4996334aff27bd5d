#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace dpsqkd {

using Vector = std::vector<double>;

// Dense real symmetric matrix. Storage is full row-major; set() keeps both
// triangles in sync so the symmetry invariant holds by construction.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t dim);

  // Rows must form a square, exactly symmetric array.
  static SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, double v);
  void add(std::size_t i, std::size_t j, double v);

  // Principal submatrix on the given (0-based, increasing) index set.
  SymMatrix principal(std::span<const std::size_t> idx) const;

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);

  double trace() const;
  bool all_finite() const;
  Vector multiply(std::span<const double> v) const;

  const std::vector<double>& data() const { return a_; }

 private:
  std::size_t dim_;
  std::vector<double> a_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double s, SymMatrix a);

// Small rectangular matrix, row-major.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

  // Aᵀ M A for a symmetric M of dimension rows().
  SymMatrix congruence(const SymMatrix& m) const;
  // AᵀA
  SymMatrix gram() const;

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;
};

struct Interval {
  double lo;
  double hi;

  Interval(double lo, double hi);
  double width() const { return hi - lo; }
};

struct EigenPair {
  double value;
  Vector vector;
};

// Largest eigenvalue by cyclic Jacobi. Deterministic.
double eig_max(const SymMatrix& m);

// Full spectrum, descending. Each eigenvector is unit length, with its
// largest-magnitude component made positive.
std::vector<EigenPair> eig_pairs(const SymMatrix& m);

// Bracketed Brent iteration. Returns once the bracket is narrower than tol or
// f hits zero exactly.
double find_root(const std::function<double(double)>& f, Interval bracket, double tol = 1e-12);

// Largest real root of c3 x³ + c2 x² + c1 x + c0.
double cubic_max_real_root(double c3, double c2, double c1, double c0);

struct MinResult {
  double argmin;
  double min;
};

struct MinimizeOptions {
  int grid_points = 129;
  // Search uniformly in log(x); the domain must then be positive.
  bool log_scale = false;
};

// Coarse grid scan followed by golden-section refinement around the best
// grid point. Never returns a value worse than the best grid sample.
MinResult minimize_scalar(const std::function<double(double)>& f, Interval domain, double tol = 1e-10,
                          MinimizeOptions opts = {});

double binary_entropy(double x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);

}  // namespace dpsqkd
