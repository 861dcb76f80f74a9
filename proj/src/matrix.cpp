#include <g3f4/matrix.hpp>

#include <sstream>
#include <stdexcept>

namespace g3f4 {

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<Vec>& rows) {
  if (rows.empty()) return QMatrix(0, 0);
  QMatrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_)
      throw std::invalid_argument("QMatrix::from_rows: ragged rows");
    for (std::size_t c = 0; c < m.cols_; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

Vec QMatrix::row(std::size_t r) const {
  Vec v(cols_);
  for (std::size_t c = 0; c < cols_; ++c) v[c] = at(r, c);
  return v;
}

Vec QMatrix::col(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
  return v;
}

void QMatrix::set_row(std::size_t r, const Vec& v) {
  if (v.size() != cols_) throw std::invalid_argument("QMatrix::set_row: size mismatch");
  for (std::size_t c = 0; c < cols_; ++c) at(r, c) = v[c];
}

bool QMatrix::is_zero() const {
  for (const auto& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("QMatrix: dimension mismatch in +");
  QMatrix m(a.rows_, a.cols_);
  for (std::size_t i = 0; i < m.e_.size(); ++i) m.e_[i] = a.e_[i] + b.e_[i];
  return m;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("QMatrix: dimension mismatch in -");
  QMatrix m(a.rows_, a.cols_);
  for (std::size_t i = 0; i < m.e_.size(); ++i) m.e_[i] = a.e_[i] - b.e_[i];
  return m;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.rows_)
    throw std::invalid_argument("QMatrix: dimension mismatch in *");
  QMatrix m(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& ark = a.at(r, k);
      if (ark.is_zero()) continue;
      for (std::size_t c = 0; c < b.cols_; ++c) {
        const Scalar& bkc = b.at(k, c);
        if (!bkc.is_zero()) m.at(r, c) += ark * bkc;
      }
    }
  return m;
}

QMatrix QMatrix::operator*(const Scalar& s) const {
  QMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] * s;
  return m;
}

Vec QMatrix::apply(const Vec& v) const {
  if (v.size() != cols_) throw std::invalid_argument("QMatrix::apply: size mismatch");
  Vec out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Scalar acc;
    for (std::size_t c = 0; c < cols_; ++c) {
      const Scalar& x = at(r, c);
      if (!x.is_zero() && !v[c].is_zero()) acc += x * v[c];
    }
    out[r] = acc;
  }
  return out;
}

bool operator==(const QMatrix& a, const QMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
}

namespace {
// Rough bit-size of a scalar, used only to prefer simple pivots; any choice
// yields the same (unique) rref.
std::size_t scalar_cost(const Scalar& s) {
  return mpz_sizeinbase(s.num().get_mpz_t(), 2) + mpz_sizeinbase(s.den().get_mpz_t(), 2);
}
}  // namespace

RrefResult QMatrix::rref() const {
  QMatrix m(*this);
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols_ && lead < rows_; ++c) {
    // Pick the simplest nonzero entry in column c at or below row `lead`.
    std::size_t best = rows_;
    std::size_t best_cost = 0;
    for (std::size_t r = lead; r < rows_; ++r) {
      const Scalar& x = m.at(r, c);
      if (x.is_zero()) continue;
      std::size_t cost = scalar_cost(x);
      if (best == rows_ || cost < best_cost) {
        best = r;
        best_cost = cost;
      }
    }
    if (best == rows_) continue;
    if (best != lead)
      for (std::size_t k = 0; k < cols_; ++k) std::swap(m.at(best, k), m.at(lead, k));
    // Normalize the pivot row.
    Scalar inv = m.at(lead, c).inverse();
    if (!inv.is_one())
      for (std::size_t k = c; k < cols_; ++k) {
        Scalar& x = m.at(lead, k);
        if (!x.is_zero()) x *= inv;
      }
    // Eliminate the column everywhere else.
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == lead) continue;
      Scalar f = m.at(r, c);
      if (f.is_zero()) continue;
      m.at(r, c) = Scalar(0);
      for (std::size_t k = c + 1; k < cols_; ++k) {
        const Scalar& x = m.at(lead, k);
        if (!x.is_zero()) m.at(r, k) -= f * x;
      }
    }
    pivots.push_back(c);
    ++lead;
  }
  return RrefResult{std::move(m), std::move(pivots)};
}

std::size_t QMatrix::rank() const { return rref().pivots.size(); }

std::vector<Vec> QMatrix::nullspace() const {
  RrefResult r = rref();
  std::vector<bool> is_pivot(cols_, false);
  for (std::size_t p : r.pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < cols_; ++f) {
    if (is_pivot[f]) continue;
    Vec v(cols_);
    v[f] = Scalar(1);
    for (std::size_t pr = 0; pr < r.pivots.size(); ++pr)
      v[r.pivots[pr]] = -r.mat.at(pr, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> QMatrix::solve(const Vec& b) const {
  if (b.size() != rows_) throw std::invalid_argument("QMatrix::solve: size mismatch");
  QMatrix aug(rows_, cols_ + 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) aug.at(r, c) = at(r, c);
    aug.at(r, cols_) = b[r];
  }
  RrefResult r = aug.rref();
  if (!r.pivots.empty() && r.pivots.back() == cols_) return std::nullopt;
  Vec x(cols_);
  for (std::size_t pr = 0; pr < r.pivots.size(); ++pr)
    x[r.pivots[pr]] = r.mat.at(pr, cols_);
  return x;
}

std::string QMatrix::str() const {
  std::ostringstream os;
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r == 0 ? "[" : " ");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? " " : "[") << at(r, c).str();
    os << "]" << (r + 1 == rows_ ? "]" : "\n");
  }
  return os.str();
}

Vec vec_add(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec_add: size mismatch");
  Vec v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i] + b[i];
  return v;
}

Vec vec_sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec_sub: size mismatch");
  Vec v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i] - b[i];
  return v;
}

Vec vec_scale(const Scalar& c, const Vec& a) {
  Vec v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = c * a[i];
  return v;
}

bool vec_is_zero(const Vec& a) {
  for (const auto& x : a)
    if (!x.is_zero()) return false;
  return true;
}

}  // namespace g3f4
