#include "dpsqkd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dpsqkd/errors.hpp"

namespace dpsqkd {

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {
  if (dim == 0) throw InvalidInput("SymMatrix: dimension must be positive");
}

SymMatrix SymMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  SymMatrix m(rows.size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw InvalidInput("SymMatrix: rows must form a square array");
    std::size_t j = 0;
    for (double v : r) m.a_[i * m.dim_ + j++] = v;
    ++i;
  }
  for (std::size_t r = 0; r < m.dim_; ++r)
    for (std::size_t c = r + 1; c < m.dim_; ++c)
      if (m(r, c) != m(c, r)) throw InvalidInput("SymMatrix: array is not symmetric");
  return m;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.a_[i * dim + i] = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.a_[i * m.dim_ + i] = diag[i];
  return m;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  a_[i * dim_ + j] = v;
  a_[j * dim_ + i] = v;
}

void SymMatrix::add(std::size_t i, std::size_t j, double v) {
  a_[i * dim_ + j] += v;
  if (i != j) a_[j * dim_ + i] += v;
}

SymMatrix SymMatrix::principal(std::span<const std::size_t> idx) const {
  SymMatrix m(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) m.a_[r * idx.size() + c] = (*this)(idx[r], idx[c]);
  return m;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.dim_ != dim_) throw InvalidInput("SymMatrix: dimension mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.dim_ != dim_) throw InvalidInput("SymMatrix: dimension mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

bool SymMatrix::all_finite() const {
  return std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); });
}

Vector SymMatrix::multiply(std::span<const double> v) const {
  if (v.size() != dim_) throw InvalidInput("SymMatrix: vector length mismatch");
  Vector out(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) throw InvalidInput("DenseMatrix: empty shape");
}

SymMatrix DenseMatrix::congruence(const SymMatrix& m) const {
  if (m.dim() != rows_) throw InvalidInput("DenseMatrix: congruence dimension mismatch");
  SymMatrix out(cols_);
  for (std::size_t i = 0; i < cols_; ++i) {
    for (std::size_t j = i; j < cols_; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < rows_; ++c) s += (*this)(r, i) * m(r, c) * (*this)(c, j);
      out.set(i, j, s);
    }
  }
  return out;
}

SymMatrix DenseMatrix::gram() const { return congruence(SymMatrix::identity(rows_)); }

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw InvalidInput("Interval: endpoints must be finite");
  if (!(lo < hi)) throw InvalidInput("Interval: need lo < hi");
}

namespace {

// Cyclic Jacobi on a full copy of the matrix. The sweep stops once the
// off-diagonal Frobenius norm drops below 1e-14 relative to the matrix norm
// (absolute for matrices of norm below one).
void jacobi(std::vector<double>& a, std::size_t n, std::vector<double>* v) {
  if (v) {
    v->assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) (*v)[i * n + i] = 1.0;
  }
  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double x = a[i * n + j] * a[i * n + j];
        total += x;
        if (i != j) off += x;
      }
    }
    if (std::sqrt(off) < 1e-14 * std::max(1.0, std::sqrt(total))) return;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a[p * n + q];
        if (apq == 0.0) continue;
        double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        if (v) {
          auto& vv = *v;
          for (std::size_t k = 0; k < n; ++k) {
            double vkp = vv[k * n + p], vkq = vv[k * n + q];
            vv[k * n + p] = c * vkp - s * vkq;
            vv[k * n + q] = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  throw ComputationError("jacobi: no convergence after " + std::to_string(max_sweeps) + " sweeps");
}

void require_finite(const SymMatrix& m) {
  if (!m.all_finite()) throw InvalidInput("eigensolver: matrix has a non-finite entry");
}

}  // namespace

double eig_max(const SymMatrix& m) {
  require_finite(m);
  std::size_t n = m.dim();
  std::vector<double> a = m.data();
  jacobi(a, n, nullptr);
  double best = a[0];
  for (std::size_t i = 1; i < n; ++i) best = std::max(best, a[i * n + i]);
  return best;
}

std::vector<EigenPair> eig_pairs(const SymMatrix& m) {
  require_finite(m);
  std::size_t n = m.dim();
  std::vector<double> a = m.data();
  std::vector<double> v;
  jacobi(a, n, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });

  std::vector<EigenPair> out;
  out.reserve(n);
  for (std::size_t k : order) {
    Vector col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = v[i * n + k];
    std::size_t big = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(col[i]) > std::abs(col[big])) big = i;
    if (col[big] < 0.0)
      for (double& x : col) x = -x;
    out.push_back({a[k * n + k], std::move(col)});
  }
  return out;
}

double find_root(const std::function<double(double)>& f, Interval bracket, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("find_root: tolerance must be positive");
  double a = bracket.lo, b = bracket.hi;
  double fa = f(a), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) throw InvalidInput("find_root: non-finite function value");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw BracketError("find_root: no sign change on [" + std::to_string(a) + ", " + std::to_string(b) + "]");

  const double eps = std::numeric_limits<double>::epsilon();
  double c = b, fc = fb, d = b - a, e = d;
  for (int iter = 0; iter < 1000; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
    double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
    fb = f(b);
    if (!std::isfinite(fb)) throw InvalidInput("find_root: non-finite function value");
  }
  throw ComputationError("find_root: iteration limit reached");
}

double cubic_max_real_root(double c3, double c2, double c1, double c0) {
  if (!std::isfinite(c3) || !std::isfinite(c2) || !std::isfinite(c1) || !std::isfinite(c0))
    throw InvalidInput("cubic_max_real_root: non-finite coefficient");
  if (c3 == 0.0) throw InvalidInput("cubic_max_real_root: leading coefficient is zero");

  const double a = c2 / c3, b = c1 / c3, c = c0 / c3;
  auto f = [&](double x) { return ((x + a) * x + b) * x + c; };
  auto fp = [&](double x) { return (3.0 * x + 2.0 * a) * x + b; };
  // Bound on the rounding error of f(x).
  auto noise = [&](double x) {
    double ax = std::abs(x);
    return 64.0 * std::numeric_limits<double>::epsilon() * (ax * ax * ax + std::abs(a) * ax * ax + std::abs(b) * ax + std::abs(c));
  };

  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double disc = 0.25 * q * q + p * p * p / 27.0;
  double t;
  if (p == 0.0) {
    t = std::cbrt(-q);
  } else if (disc <= 0.0) {
    double r = 2.0 * std::sqrt(-p / 3.0);
    double arg = std::clamp(1.5 * q / p * std::sqrt(-3.0 / p), -1.0, 1.0);
    t = r * std::cos(std::acos(arg) / 3.0);
  } else {
    double s = std::sqrt(disc);
    t = std::cbrt(-0.5 * q + s) + std::cbrt(-0.5 * q - s);
  }
  double x = t - a / 3.0;

  for (int k = 0; k < 8; ++k) {
    double fx = f(x), d = fp(x);
    if (fx == 0.0 || d == 0.0) break;
    double nx = x - fx / d;
    if (!(std::abs(f(nx)) < std::abs(fx))) break;
    x = nx;
  }

  // A repeated largest root sits on the larger critical point, which is a
  // simple root of f' and can be located far more accurately than by the
  // closed form above.
  double dd = a * a - 3.0 * b;
  if (dd >= 0.0) {
    double xc = (-a + std::sqrt(dd)) / 3.0;
    if (std::abs(f(xc)) <= noise(xc)) x = xc;
  }
  return x;
}

MinResult minimize_scalar(const std::function<double(double)>& f, Interval domain, double tol, MinimizeOptions opts) {
  if (opts.grid_points < 3) throw InvalidInput("minimize_scalar: need at least 3 grid points");
  if (!(tol > 0.0)) throw InvalidInput("minimize_scalar: tolerance must be positive");
  if (opts.log_scale && !(domain.lo > 0.0)) throw InvalidInput("minimize_scalar: log scale needs a positive domain");

  const double ulo = opts.log_scale ? std::log(domain.lo) : domain.lo;
  const double uhi = opts.log_scale ? std::log(domain.hi) : domain.hi;
  auto to_x = [&](double u) { return opts.log_scale ? std::exp(u) : u; };
  auto eval = [&](double x) {
    double y = f(x);
    if (!std::isfinite(y)) throw InvalidInput("minimize_scalar: non-finite objective value");
    return y;
  };

  const int n = opts.grid_points;
  std::vector<double> xs(n);
  for (int k = 0; k < n; ++k) xs[k] = to_x(ulo + (uhi - ulo) * k / (n - 1));
  xs.front() = domain.lo;
  xs.back() = domain.hi;

  int best = 0;
  double fbest = eval(xs[0]);
  for (int k = 1; k < n; ++k) {
    double y = eval(xs[k]);
    if (y < fbest) {
      fbest = y;
      best = k;
    }
  }

  double lo = ulo + (uhi - ulo) * std::max(best - 1, 0) / (n - 1);
  double hi = ulo + (uhi - ulo) * std::min(best + 1, n - 1) / (n - 1);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = eval(to_x(c)), fd = eval(to_x(d));
  for (int iter = 0; iter < 400 && to_x(hi) - to_x(lo) > tol; ++iter) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = eval(to_x(c));
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = eval(to_x(d));
    }
  }
  MinResult out{xs[best], fbest};
  if (fc < out.min) out = {to_x(c), fc};
  if (fd < out.min) out = {to_x(d), fd};
  return out;
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary_entropy: argument outside [0, 1]");
  // Both x and 1-x reduce to the same (p, q) pair, so h(x) == h(1-x) bit for bit.
  const double p = x <= 0.5 ? 1.0 - (1.0 - x) : 1.0 - x;
  const double q = 1.0 - p;
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (q > 0.0) h -= q * std::log2(q);
  return h;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

}  // namespace dpsqkd
