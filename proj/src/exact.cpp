// Exact-mode arithmetic: rational scalars, rational matrices, and the exact
// polynomial routines behind char_poly / minimal_poly.

#include <charconv>
#include <cmath>

#include "petrov/linalg.hpp"

namespace petrov::linalg {

double Scalar::to_double() const {
  if (const auto* d = std::get_if<double>(&value_)) return *d;
  return std::get<Rational>(value_).convert_to<double>();
}

const Rational& Scalar::exact() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return *q;
  throw Error(ErrorKind::contract, "scalar is not in exact mode");
}

std::string Scalar::to_string() const {
  if (const auto* q = std::get_if<Rational>(&value_)) {
    const auto num = boost::multiprecision::numerator(*q);
    const auto den = boost::multiprecision::denominator(*q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, std::get<double>(value_));
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

Rational parse_decimal(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw Error(ErrorKind::parse, "empty rational literal");
  bool negative = false;
  size_t pos = 0;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    pos = 1;
  }
  boost::multiprecision::cpp_int num = 0;
  boost::multiprecision::cpp_int den = 1;
  bool seen_digit = false;
  bool after_point = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (after_point) den *= 10;
      seen_digit = true;
    } else if (c == '.' && !after_point) {
      after_point = true;
    } else {
      throw Error(ErrorKind::parse, "invalid rational literal '" + text + "'");
    }
  }
  if (!seen_digit) throw Error(ErrorKind::parse, "invalid rational literal '" + text + "'");
  Rational q(num, den);
  return negative ? Rational(-q) : q;
}

}  // namespace

Scalar Scalar::parse_exact(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Scalar(parse_decimal(text));
  const Rational p = parse_decimal(text.substr(0, slash));
  const Rational q = parse_decimal(text.substr(slash + 1));
  if (q == 0) throw Error(ErrorKind::parse, "zero denominator in '" + text + "'");
  return Scalar(Rational(p / q));
}

ExactMatrix ExactMatrix::identity(int n) {
  ExactMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RealMatrix ExactMatrix::to_real() const {
  RealMatrix m(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c).convert_to<double>();
  return m;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::shape, "exact product: inner dimensions differ");
  ExactMatrix m(a.rows(), b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int k = 0; k < a.cols(); ++k) {
      if (a(r, k) == 0) continue;
      for (int c = 0; c < b.cols(); ++c) m(r, c) += a(r, k) * b(k, c);
    }
  return m;
}

ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::shape, "exact sum: shapes differ");
  ExactMatrix m(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) m(r, c) = a(r, c) + b(r, c);
  return m;
}

ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::shape, "exact difference: shapes differ");
  ExactMatrix m(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) m(r, c) = a(r, c) - b(r, c);
  return m;
}

bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

int exact_rank(ExactMatrix m) {
  int rank = 0;
  for (int col = 0; col < m.cols() && rank < m.rows(); ++col) {
    int pivot = -1;
    for (int r = rank; r < m.rows(); ++r)
      if (m(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int c = 0; c < m.cols(); ++c) std::swap(m(pivot, c), m(rank, c));
    for (int r = rank + 1; r < m.rows(); ++r) {
      if (m(r, col) == 0) continue;
      const Rational f = m(r, col) / m(rank, col);
      for (int c = col; c < m.cols(); ++c) m(r, c) -= f * m(rank, c);
    }
    ++rank;
  }
  return rank;
}

std::vector<int> exact_kernel_dims(const ExactMatrix& a, const Rational& lambda, int max_steps) {
  const int n = a.rows();
  ExactMatrix shifted = a;
  for (int i = 0; i < n; ++i) shifted(i, i) -= lambda;
  std::vector<int> dims{0};
  ExactMatrix power = ExactMatrix::identity(n);
  for (int k = 1; k <= max_steps; ++k) {
    power = power * shifted;
    dims.push_back(n - exact_rank(power));
    if (dims[k] == dims[k - 1]) break;
  }
  return dims;
}

namespace {

// Solves M c = b exactly; returns false when inconsistent.
bool exact_solve(const ExactMatrix& m, const std::vector<Rational>& b, std::vector<Rational>& c) {
  const int rows = m.rows();
  const int cols = m.cols();
  ExactMatrix aug(rows, cols + 1);
  for (int r = 0; r < rows; ++r) {
    for (int k = 0; k < cols; ++k) aug(r, k) = m(r, k);
    aug(r, cols) = b[r];
  }
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pivot = -1;
    for (int r = row; r < rows; ++r)
      if (aug(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != row)
      for (int k = 0; k <= cols; ++k) std::swap(aug(pivot, k), aug(row, k));
    const Rational inv = 1 / aug(row, col);
    for (int k = col; k <= cols; ++k) aug(row, k) *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == row || aug(r, col) == 0) continue;
      const Rational f = aug(r, col);
      for (int k = col; k <= cols; ++k) aug(r, k) -= f * aug(row, k);
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (int r = row; r < rows; ++r)
    if (aug(r, cols) != 0) return false;
  c.assign(cols, Rational(0));
  for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i) c[pivot_col[i]] = aug(i, cols);
  return true;
}

}  // namespace

Polynomial exact_char_poly(const ExactMatrix& a) {
  const int n = a.rows();
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  ExactMatrix m(n, n);
  for (int k = 1; k <= n; ++k) {
    ExactMatrix next = a * m;
    for (int i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    m = std::move(next);
    const ExactMatrix am = a * m;
    Rational trace = 0;
    for (int i = 0; i < n; ++i) trace += am(i, i);
    c[n - k] = -trace / k;
  }
  std::vector<Scalar> coeffs;
  coeffs.reserve(n + 1);
  for (auto& q : c) coeffs.emplace_back(q);
  return Polynomial(std::move(coeffs));
}

Polynomial exact_minimal_poly(const ExactMatrix& a) {
  const int n = a.rows();
  const int n2 = n * n;
  std::vector<ExactMatrix> powers{ExactMatrix::identity(n)};
  for (int k = 1; k <= n; ++k) {
    powers.push_back(powers.back() * a);
    ExactMatrix basis(n2, k);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n2; ++i) basis(i, j) = powers[j](i / n, i % n);
    std::vector<Rational> target(n2);
    for (int i = 0; i < n2; ++i) target[i] = powers[k](i / n, i % n);
    std::vector<Rational> sol;
    if (exact_solve(basis, target, sol)) {
      std::vector<Scalar> coeffs;
      for (int j = 0; j < k; ++j) coeffs.emplace_back(Rational(-sol[j]));
      coeffs.emplace_back(Rational(1));
      return Polynomial(std::move(coeffs));
    }
  }
  throw Error(ErrorKind::internal, "no annihilating polynomial of degree <= n (Cayley-Hamilton violated)");
}

Polynomial exact_remainder(const Polynomial& num, const Polynomial& den) {
  if (num.mode() != NumericMode::exact || den.mode() != NumericMode::exact)
    throw Error(ErrorKind::contract, "exact_remainder needs exact polynomials");
  std::vector<Rational> r;
  for (const auto& s : num.coeffs()) r.push_back(s.exact());
  std::vector<Rational> d;
  for (const auto& s : den.coeffs()) d.push_back(s.exact());
  while (!d.empty() && d.back() == 0) d.pop_back();
  if (d.empty()) throw Error(ErrorKind::contract, "division by the zero polynomial");
  const int dd = static_cast<int>(d.size()) - 1;
  for (int top = static_cast<int>(r.size()) - 1; top >= dd; --top) {
    if (r[top] == 0) continue;
    const Rational f = r[top] / d[dd];
    for (int i = 0; i <= dd; ++i) r[top - dd + i] -= f * d[i];
  }
  r.resize(std::max(dd, 1));
  while (r.size() > 1 && r.back() == 0) r.pop_back();
  std::vector<Scalar> out;
  for (auto& q : r) out.emplace_back(q);
  return Polynomial(std::move(out));
}

bool rational_approximation(double x, long max_den, double tol, Rational& out) {
  if (!std::isfinite(x)) return false;
  // Continued-fraction convergents.
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double v = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(v);
    if (std::fabs(fl) > 1e15) break;
    const long long a = static_cast<long long>(fl);
    const long long h2 = a * h1 + h0;
    const long long k2 = a * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::fabs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= tol) {
      out = Rational(h1, k1);
      return true;
    }
    const double frac = v - fl;
    if (frac == 0.0) break;
    v = 1.0 / frac;
  }
  return false;
}

}  // namespace petrov::linalg
