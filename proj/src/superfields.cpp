#include <g3f4/superfields.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace g3f4 {

namespace {

void check_same_system(const CoordSystemPtr& a, const CoordSystemPtr& b, const char* op) {
  if (a == b) return;
  if (a && b && *a == *b) return;
  throw std::invalid_argument(std::string(op) + ": different coordinate systems");
}

// Merges two strictly increasing odd index lists; nullopt on a repeated
// index (the product vanishes), otherwise the merged list and the Koszul
// sign (-1 per transposition moving b-factors past larger a-factors).
std::optional<std::pair<std::vector<std::size_t>, int>> merge_odd(
    const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  out.reserve(a.size() + b.size());
  std::size_t inversions = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return std::nullopt;
    if (a[i] < b[j]) {
      out.push_back(a[i++]);
    } else {
      inversions += a.size() - i;  // b[j] moves past the remaining a-factors
      out.push_back(b[j++]);
    }
  }
  while (i < a.size()) out.push_back(a[i++]);
  while (j < b.size()) out.push_back(b[j++]);
  return std::make_pair(std::move(out), (inversions & 1) ? -1 : 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// Coordinate systems

CoordSystemPtr contact_coords() {
  static const CoordSystemPtr sys = std::make_shared<const CoordSystem>(CoordSystem{
      {"u"}, {"xi1", "xi2", "xi3", "xi4", "xi5", "xi6", "xi7"}});
  return sys;
}

CoordSystemPtr realization_coords() {
  static const CoordSystemPtr sys = std::make_shared<const CoordSystem>(CoordSystem{
      {"x1", "x2", "x3", "x4", "x5", "x6"}, {"xi1", "xi2", "xi3", "xi4"}});
  return sys;
}

std::size_t Monomial::total_degree() const {
  std::size_t d = odd.size();
  for (unsigned e : even) d += e;
  return d;
}

// ---------------------------------------------------------------------------
// SuperPolynomial

SuperPolynomial::SuperPolynomial(CoordSystemPtr sys) : sys_(std::move(sys)) {
  if (!sys_) throw std::invalid_argument("SuperPolynomial: null coordinate system");
}

SuperPolynomial SuperPolynomial::constant(CoordSystemPtr sys, const Scalar& c) {
  SuperPolynomial p(std::move(sys));
  p.add_term(Monomial{std::vector<unsigned>(p.sys_->even_names.size(), 0), {}}, c);
  return p;
}

SuperPolynomial SuperPolynomial::even_coord(CoordSystemPtr sys, std::size_t i) {
  SuperPolynomial p(std::move(sys));
  if (i >= p.sys_->even_names.size())
    throw std::invalid_argument("SuperPolynomial: even coordinate index out of range");
  Monomial m{std::vector<unsigned>(p.sys_->even_names.size(), 0), {}};
  m.even[i] = 1;
  p.add_term(std::move(m), Scalar(1));
  return p;
}

SuperPolynomial SuperPolynomial::odd_coord(CoordSystemPtr sys, std::size_t j) {
  SuperPolynomial p(std::move(sys));
  if (j >= p.sys_->odd_names.size())
    throw std::invalid_argument("SuperPolynomial: odd coordinate index out of range");
  p.add_term(Monomial{std::vector<unsigned>(p.sys_->even_names.size(), 0), {j}}, Scalar(1));
  return p;
}

void SuperPolynomial::add_term(Monomial m, Scalar c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(std::move(m), std::move(c));
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SuperPolynomial& SuperPolynomial::operator+=(const SuperPolynomial& o) {
  check_same_system(sys_, o.sys_, "SuperPolynomial::operator+");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SuperPolynomial operator-(const SuperPolynomial& a, const SuperPolynomial& b) {
  return a + (-b);
}

SuperPolynomial SuperPolynomial::operator-() const { return *this * Scalar(-1); }

SuperPolynomial SuperPolynomial::operator*(const Scalar& c) const {
  SuperPolynomial r(sys_);
  if (c.is_zero()) return r;
  for (const auto& [m, a] : terms_) r.terms_.emplace(m, a * c);
  return r;
}

SuperPolynomial operator*(const SuperPolynomial& a, const SuperPolynomial& b) {
  check_same_system(a.system(), b.system(), "SuperPolynomial::operator*");
  SuperPolynomial r(a.system());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      auto merged = merge_odd(ma.odd, mb.odd);
      if (!merged) continue;
      Monomial m{ma.even, std::move(merged->first)};
      for (std::size_t i = 0; i < m.even.size(); ++i) m.even[i] += mb.even[i];
      r.add_term(std::move(m), ca * cb * Scalar(merged->second));
    }
  }
  return r;
}

bool operator==(const SuperPolynomial& a, const SuperPolynomial& b) {
  return (a.system() == b.system() || *a.system() == *b.system()) && a.terms() == b.terms();
}

SuperPolynomial SuperPolynomial::d_even(std::size_t i) const {
  SuperPolynomial r(sys_);
  for (const auto& [m, c] : terms_) {
    if (m.even[i] == 0) continue;
    Monomial d = m;
    d.even[i] -= 1;
    r.add_term(std::move(d), c * Scalar(long(m.even[i])));
  }
  return r;
}

SuperPolynomial SuperPolynomial::d_odd(std::size_t j) const {
  SuperPolynomial r(sys_);
  for (const auto& [m, c] : terms_) {
    auto it = std::find(m.odd.begin(), m.odd.end(), j);
    if (it == m.odd.end()) continue;
    const std::size_t pos = std::size_t(it - m.odd.begin());
    Monomial d = m;
    d.odd.erase(d.odd.begin() + long(pos));
    r.add_term(std::move(d), c * sign_pow(int(pos)));
  }
  return r;
}

Scalar SuperPolynomial::constant_term() const {
  Monomial unit{std::vector<unsigned>(sys_->even_names.size(), 0), {}};
  auto it = terms_.find(unit);
  return it == terms_.end() ? Scalar(0) : it->second;
}

std::optional<Parity> SuperPolynomial::pure_parity() const {
  bool seen[2] = {false, false};
  for (const auto& [m, c] : terms_) seen[m.parity()] = true;
  if (seen[Even] && seen[Odd]) return std::nullopt;
  return seen[Odd] ? Odd : Even;
}

std::pair<SuperPolynomial, SuperPolynomial> SuperPolynomial::parity_parts() const {
  SuperPolynomial ev(sys_), od(sys_);
  for (const auto& [m, c] : terms_) (m.parity() == Even ? ev : od).terms_.emplace(m, c);
  return {std::move(ev), std::move(od)};
}

std::string SuperPolynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool neg = c.sign() < 0;
    if (first) {
      if (neg) out += "-";
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    const Scalar a = c.abs();
    std::string mono;
    for (std::size_t i = 0; i < m.even.size(); ++i)
      for (unsigned e = 0; e < m.even[i]; ++e)
        mono += (mono.empty() ? "" : " ") + sys_->even_names[i];
    for (std::size_t j : m.odd) mono += (mono.empty() ? "" : " ") + sys_->odd_names[j];
    if (mono.empty()) {
      out += a.str();
    } else {
      if (!a.is_one()) out += a.str() + " ";
      out += mono;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SuperVectorField

SuperVectorField::SuperVectorField(CoordSystemPtr sys) : sys_(std::move(sys)) {
  if (!sys_) throw std::invalid_argument("SuperVectorField: null coordinate system");
  even_.assign(sys_->even_names.size(), SuperPolynomial(sys_));
  odd_.assign(sys_->odd_names.size(), SuperPolynomial(sys_));
}

bool SuperVectorField::is_zero() const {
  for (const auto& p : even_)
    if (!p.is_zero()) return false;
  for (const auto& p : odd_)
    if (!p.is_zero()) return false;
  return true;
}

SuperPolynomial SuperVectorField::apply(const SuperPolynomial& f) const {
  check_same_system(sys_, f.system(), "SuperVectorField::apply");
  SuperPolynomial r(sys_);
  for (std::size_t i = 0; i < even_.size(); ++i)
    if (!even_[i].is_zero()) r += even_[i] * f.d_even(i);
  for (std::size_t j = 0; j < odd_.size(); ++j)
    if (!odd_[j].is_zero()) r += odd_[j] * f.d_odd(j);
  return r;
}

SuperVectorField& SuperVectorField::operator+=(const SuperVectorField& o) {
  check_same_system(sys_, o.sys_, "SuperVectorField::operator+");
  for (std::size_t i = 0; i < even_.size(); ++i) even_[i] += o.even_[i];
  for (std::size_t j = 0; j < odd_.size(); ++j) odd_[j] += o.odd_[j];
  return *this;
}

SuperVectorField operator-(const SuperVectorField& a, const SuperVectorField& b) {
  return a + (-b);
}

SuperVectorField SuperVectorField::operator-() const { return *this * Scalar(-1); }

SuperVectorField SuperVectorField::operator*(const Scalar& c) const {
  SuperVectorField r(sys_);
  for (std::size_t i = 0; i < even_.size(); ++i) r.even_[i] = even_[i] * c;
  for (std::size_t j = 0; j < odd_.size(); ++j) r.odd_[j] = odd_[j] * c;
  return r;
}

SuperVectorField operator*(const SuperPolynomial& f, const SuperVectorField& x) {
  check_same_system(f.system(), x.system(), "SuperVectorField scaling");
  SuperVectorField r(x.system());
  for (std::size_t i = 0; i < r.even_.size(); ++i) r.even_[i] = f * x.even_[i];
  for (std::size_t j = 0; j < r.odd_.size(); ++j) r.odd_[j] = f * x.odd_[j];
  return r;
}

bool operator==(const SuperVectorField& a, const SuperVectorField& b) {
  if (!(a.sys_ == b.sys_ || *a.sys_ == *b.sys_)) return false;
  return a.even_ == b.even_ && a.odd_ == b.odd_;
}

std::optional<Parity> SuperVectorField::pure_parity() const {
  bool seen[2] = {false, false};
  for (std::size_t i = 0; i < even_.size(); ++i)
    for (const auto& [m, c] : even_[i].terms()) seen[m.parity()] = true;
  for (std::size_t j = 0; j < odd_.size(); ++j)
    for (const auto& [m, c] : odd_[j].terms()) seen[parity_add(m.parity(), Odd)] = true;
  if (seen[Even] && seen[Odd]) return std::nullopt;
  return seen[Odd] ? Odd : Even;
}

std::pair<SuperVectorField, SuperVectorField> SuperVectorField::parity_parts() const {
  SuperVectorField ev(sys_), od(sys_);
  for (std::size_t i = 0; i < even_.size(); ++i) {
    auto [pe, po] = even_[i].parity_parts();
    ev.even_[i] = std::move(pe);
    od.even_[i] = std::move(po);
  }
  for (std::size_t j = 0; j < odd_.size(); ++j) {
    auto [pe, po] = odd_[j].parity_parts();
    ev.odd_[j] = std::move(po);  // odd coefficient + odd coordinate = even field
    od.odd_[j] = std::move(pe);
  }
  return {std::move(ev), std::move(od)};
}

std::string SuperVectorField::str() const {
  std::string out;
  auto emit = [&](const SuperPolynomial& c, const std::string& name) {
    if (c.is_zero()) return;
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ") D[" + name + "]";
  };
  for (std::size_t i = 0; i < even_.size(); ++i) emit(even_[i], sys_->even_names[i]);
  for (std::size_t j = 0; j < odd_.size(); ++j) emit(odd_[j], sys_->odd_names[j]);
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Super bracket

namespace {

// Bracket of two pure-parity fields.
SuperVectorField pure_bracket(const SuperVectorField& x, Parity px,
                              const SuperVectorField& y, Parity py) {
  const auto& sys = x.system();
  const Scalar s = sign_pow(int(px) * int(py));
  SuperVectorField r(sys);
  for (std::size_t i = 0; i < sys->even_names.size(); ++i)
    r.even_coeff(i) = x.apply(y.even_coeff(i)) - y.apply(x.even_coeff(i)) * s;
  for (std::size_t j = 0; j < sys->odd_names.size(); ++j)
    r.odd_coeff(j) = x.apply(y.odd_coeff(j)) - y.apply(x.odd_coeff(j)) * s;
  return r;
}

}  // namespace

SuperVectorField super_bracket(const SuperVectorField& x, const SuperVectorField& y) {
  check_same_system(x.system(), y.system(), "super_bracket");
  auto [x0, x1] = x.parity_parts();
  auto [y0, y1] = y.parity_parts();
  SuperVectorField r(x.system());
  if (!x0.is_zero() && !y0.is_zero()) r += pure_bracket(x0, Even, y0, Even);
  if (!x0.is_zero() && !y1.is_zero()) r += pure_bracket(x0, Even, y1, Odd);
  if (!x1.is_zero() && !y0.is_zero()) r += pure_bracket(x1, Odd, y0, Even);
  if (!x1.is_zero() && !y1.is_zero()) r += pure_bracket(x1, Odd, y1, Odd);
  return r;
}

// ---------------------------------------------------------------------------
// Odd contact structure

std::vector<SuperVectorField> contact_frame() {
  const auto sys = contact_coords();
  auto xi = [&](std::size_t j) { return SuperPolynomial::odd_coord(sys, j); };
  std::vector<SuperVectorField> frame;
  for (std::size_t j = 0; j < 7; ++j) {
    SuperVectorField d(sys);
    d.odd_coeff(j) = SuperPolynomial::constant(sys, Scalar(1));
    // Hatted corrections: d^_{xi4} = d_{xi4} - xi1 d_u, ..., d^_{xi7} =
    // d_{xi7} - xi7 d_u.
    if (j >= 3 && j <= 5) d.even_coeff(0) = -xi(j - 3);
    if (j == 6) d.even_coeff(0) = -xi(6);
    frame.push_back(std::move(d));
  }
  return frame;
}

namespace {

SuperVectorField contact_field_pure(const SuperPolynomial& f, Parity pf) {
  const auto& sys = f.system();
  const Scalar s = sign_pow(int(pf));
  const Scalar half(1, 2);
  auto xi = [&](std::size_t j) { return SuperPolynomial::odd_coord(sys, j); };
  const SuperPolynomial du = f.d_even(0);
  const SuperPolynomial b1 = f.d_odd(0), b2 = f.d_odd(1), b3 = f.d_odd(2);
  const SuperPolynomial a4 = f.d_odd(3) - xi(0) * du;
  const SuperPolynomial a5 = f.d_odd(4) - xi(1) * du;
  const SuperPolynomial a6 = f.d_odd(5) - xi(2) * du;
  const SuperPolynomial a7 = f.d_odd(6) - xi(6) * du;
  SuperVectorField x(sys);
  x.even_coeff(0) =
      f + (b1 * xi(0) + b2 * xi(1) + b3 * xi(2) + a7 * xi(6) * half) * s;
  x.odd_coeff(0) = -(a4 * s);
  x.odd_coeff(1) = -(a5 * s);
  x.odd_coeff(2) = -(a6 * s);
  x.odd_coeff(3) = -(b1 * s);
  x.odd_coeff(4) = -(b2 * s);
  x.odd_coeff(5) = -(b3 * s);
  x.odd_coeff(6) = -(a7 * half * s);
  return x;
}

void check_contact_system(const CoordSystemPtr& sys, const char* op) {
  check_same_system(sys, contact_coords(), op);
}

}  // namespace

SuperVectorField contact_field(const GeneratingFunction& f) {
  check_contact_system(f.system(), "contact_field");
  auto [f0, f1] = f.parity_parts();
  SuperVectorField x(f.system());
  if (!f0.is_zero()) x += contact_field_pure(f0, Even);
  if (!f1.is_zero()) x += contact_field_pure(f1, Odd);
  return x;
}

GeneratingFunction generating_function(const SuperVectorField& x) {
  check_contact_system(x.system(), "generating_function");
  const auto& sys = x.system();
  auto xi = [&](std::size_t j) { return SuperPolynomial::odd_coord(sys, j); };
  GeneratingFunction f = x.even_coeff(0);
  f += x.odd_coeff(3) * xi(0);
  f += x.odd_coeff(4) * xi(1);
  f += x.odd_coeff(5) * xi(2);
  f += x.odd_coeff(6) * xi(6);
  return f;
}

bool preserves_contact_structure(const SuperVectorField& x) {
  check_contact_system(x.system(), "preserves_contact_structure");
  for (const auto& d : contact_frame())
    if (!generating_function(super_bracket(x, d)).is_zero()) return false;
  return true;
}

GeneratingFunction lagrange_bracket(const GeneratingFunction& f, const GeneratingFunction& h) {
  const SuperVectorField b = super_bracket(contact_field(f), contact_field(h));
  GeneratingFunction r = generating_function(b);
  if (!(contact_field(r) == b))
    throw std::logic_error("lagrange_bracket: [X_f, X_h] is not a contact field");
  return r;
}

// ---------------------------------------------------------------------------
// Closure verification

namespace {

// Assigns one column per (coordinate slot, monomial) pair occurring in a
// collection of fields, so fields become exact rational row vectors.
struct FieldFlattener {
  std::size_t n_even = 0;
  std::map<std::pair<std::size_t, Monomial>, std::size_t> cols;
  std::vector<std::pair<std::size_t, Monomial>> slots;  // by column index

  void absorb(const SuperVectorField& f) {
    const auto& sys = f.system();
    n_even = sys->even_names.size();
    auto reg = [&](std::size_t slot, const SuperPolynomial& p) {
      for (const auto& [m, c] : p.terms()) {
        auto key = std::make_pair(slot, m);
        if (cols.find(key) == cols.end()) {
          cols.emplace(key, slots.size());
          slots.push_back(key);
        }
      }
    };
    for (std::size_t i = 0; i < n_even; ++i) reg(i, f.even_coeff(i));
    for (std::size_t j = 0; j < sys->odd_names.size(); ++j)
      reg(n_even + j, f.odd_coeff(j));
  }

  Vec flat(const SuperVectorField& f) const {
    Vec v(slots.size(), Scalar(0));
    auto put = [&](std::size_t slot, const SuperPolynomial& p) {
      for (const auto& [m, c] : p.terms()) v[cols.at({slot, m})] = c;
    };
    for (std::size_t i = 0; i < n_even; ++i) put(i, f.even_coeff(i));
    for (std::size_t j = 0; j < f.system()->odd_names.size(); ++j)
      put(n_even + j, f.odd_coeff(j));
    return v;
  }

  SuperVectorField unflatten(const Vec& v, const CoordSystemPtr& sys) const {
    SuperVectorField f(sys);
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (v[c].is_zero()) continue;
      const auto& [slot, m] = slots[c];
      SuperPolynomial& coeff =
          slot < n_even ? f.even_coeff(slot) : f.odd_coeff(slot - n_even);
      SuperPolynomial unit = SuperPolynomial::constant(sys, v[c]);
      for (std::size_t i = 0; i < m.even.size(); ++i)
        for (unsigned e = 0; e < m.even[i]; ++e)
          unit = unit * SuperPolynomial::even_coord(sys, i);
      for (std::size_t j : m.odd) unit = unit * SuperPolynomial::odd_coord(sys, j);
      coeff += unit;
    }
    return f;
  }
};

// Inverse of a square invertible matrix via elimination on [m | I].
QMatrix invert(const QMatrix& m) {
  const std::size_t n = m.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, n + r) = Scalar(1);
  }
  const RrefResult rr = aug.rref();
  if (rr.pivots.size() != n || rr.pivots.back() != n - 1)
    throw std::logic_error("invert: matrix is singular");
  QMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv.at(r, c) = rr.mat.at(r, n + c);
  return inv;
}

}  // namespace

ClosureResult closure_check(const FieldBasis& basis) {
  const std::size_t n = basis.fields.size();
  if (n == 0 || basis.labels.size() != n || basis.degrees.size() != n)
    throw std::invalid_argument("closure_check: empty basis or misaligned labels/degrees");
  const auto& sys = basis.fields[0].system();
  std::vector<Parity> parities;
  for (std::size_t i = 0; i < n; ++i) {
    check_same_system(sys, basis.fields[i].system(), "closure_check");
    auto p = basis.fields[i].pure_parity();
    if (!p)
      throw std::invalid_argument("closure_check: field '" + basis.labels[i] +
                                  "' has mixed parity");
    parities.push_back(*p);
  }

  // All pairwise brackets (odd self-brackets included; even ones vanish).
  std::map<std::pair<std::size_t, std::size_t>, SuperVectorField> brackets;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      if (i == j && parities[i] == Even) continue;
      brackets.emplace(std::make_pair(i, j),
                       super_bracket(basis.fields[i], basis.fields[j]));
    }

  FieldFlattener fl;
  for (const auto& f : basis.fields) fl.absorb(f);
  for (const auto& [key, b] : brackets) fl.absorb(b);

  std::vector<Vec> rows;
  rows.reserve(n);
  for (const auto& f : basis.fields) rows.push_back(fl.flat(f));
  const QMatrix span = QMatrix::from_rows(rows);
  const RrefResult rr = span.rref();
  if (rr.pivots.size() != n)
    throw std::invalid_argument("closure_check: fields are not linearly independent");

  // The pivot-column square of the span is invertible; candidate
  // coefficients come from one small product and are then verified exactly
  // against the whole flattened bracket.
  QMatrix pivot_square(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) pivot_square.at(r, c) = span.at(r, rr.pivots[c]);
  const QMatrix pivot_inv = invert(pivot_square);

  ClosureResult result;
  StructureTable table;
  for (const auto& [key, b] : brackets) {
    if (b.is_zero()) continue;
    const Vec flat = fl.flat(b);
    Vec coeffs(n, Scalar(0));  // solves coeffs . span = flat if solvable
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t c = 0; c < n; ++c)
        coeffs[k] += flat[rr.pivots[c]] * pivot_inv.at(c, k);
    Vec residual = flat;
    for (std::size_t k = 0; k < n; ++k) {
      if (coeffs[k].is_zero()) continue;
      for (std::size_t c = 0; c < residual.size(); ++c)
        residual[c] -= coeffs[k] * span.at(k, c);
    }
    if (!vec_is_zero(residual)) {
      result.verdict.closed = false;
      result.verdict.detail = "[" + basis.labels[key.first] + ", " +
                              basis.labels[key.second] + "] lies outside the span; residual = " +
                              fl.unflatten(residual, sys).str();
      return result;
    }
    SparseVec entry;
    for (std::size_t k = 0; k < n; ++k)
      if (!coeffs[k].is_zero()) entry.emplace_back(k, coeffs[k]);
    table.emplace(key, std::move(entry));
  }

  std::vector<BasisElement> elems;
  for (std::size_t i = 0; i < n; ++i)
    elems.push_back(BasisElement{basis.labels[i], parities[i], basis.degrees[i], {}});
  GradedLieSuperalgebra alg(std::move(elems), std::move(table),
                            {{"construction", "field closure"}});
  result.verdict.jacobi = alg.check_jacobi();
  result.algebra = std::move(alg);
  return result;
}

SuperDim field_span_dims(const std::vector<SuperVectorField>& fields) {
  if (fields.empty()) return SuperDim{0, 0};
  FieldFlattener fl;
  std::vector<SuperVectorField> evens, odds;
  for (const auto& f : fields) {
    auto [e, o] = f.parity_parts();
    if (!e.is_zero()) evens.push_back(std::move(e));
    if (!o.is_zero()) odds.push_back(std::move(o));
  }
  for (const auto& f : evens) fl.absorb(f);
  for (const auto& f : odds) fl.absorb(f);
  auto rank_of = [&](const std::vector<SuperVectorField>& part) -> long {
    if (part.empty()) return 0;
    std::vector<Vec> rows;
    for (const auto& f : part) rows.push_back(fl.flat(f));
    return long(QMatrix::from_rows(rows).rank());
  };
  return SuperDim{rank_of(evens), rank_of(odds)};
}

OriginSpanReport fundamental_field_check(const std::vector<SuperVectorField>& fields,
                                         SuperDim expected) {
  OriginSpanReport report;
  report.expected = expected;
  if (!fields.empty()) {
    const auto& sys = fields[0].system();
    std::vector<Vec> ev, od;
    for (const auto& f : fields) {
      check_same_system(sys, f.system(), "fundamental_field_check");
      Vec e, o;
      for (std::size_t i = 0; i < sys->even_names.size(); ++i)
        e.push_back(f.even_coeff(i).constant_term());
      for (std::size_t j = 0; j < sys->odd_names.size(); ++j)
        o.push_back(f.odd_coeff(j).constant_term());
      if (!vec_is_zero(e)) ev.push_back(std::move(e));
      if (!vec_is_zero(o)) od.push_back(std::move(o));
    }
    report.span.even = ev.empty() ? 0 : long(QMatrix::from_rows(ev).rank());
    report.span.odd = od.empty() ? 0 : long(QMatrix::from_rows(od).rank());
  }
  report.pass = report.span == expected;
  return report;
}

// ---------------------------------------------------------------------------
// Contact Heisenberg algebra and the cubic annihilator

SymbolAlgebra contact_heisenberg() {
  std::vector<BasisElement> basis;
  for (int j = 1; j <= 7; ++j)
    basis.push_back(BasisElement{"xi" + std::to_string(j), Odd, -1, {}});
  basis.push_back(BasisElement{"z", Even, -2, {}});
  StructureTable table;
  table[{0, 3}] = {{7, Scalar(1)}};
  table[{1, 4}] = {{7, Scalar(1)}};
  table[{2, 5}] = {{7, Scalar(1)}};
  table[{6, 6}] = {{7, Scalar(2)}};
  GradedLieSuperalgebra alg(std::move(basis), std::move(table),
                            {{"model", "contact heisenberg (1|7)"}});
  return SymbolAlgebra{ParabolicId{DiagramId{Algebra::G3, 1}, Crossing{1}}, {}, std::move(alg)};
}

namespace {

Vec flatten_matrix(const QMatrix& m) {
  Vec v;
  v.reserve(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) v.push_back(m.at(r, c));
  return v;
}

}  // namespace

CubicAnnihilator cubic_annihilator() {
  const SymbolAlgebra m = contact_heisenberg();
  ProlongationState st = prolong_begin(m);
  const ProlongLevel& l0 = prolong_step(st, 0);

  CubicAnnihilator out;
  out.ambient = l0.dims;
  const std::size_t n = l0.act.size();
  for (std::size_t e = 0; e < n; ++e)
    if (l0.parities[e] == Odd)
      throw std::logic_error("cubic_annihilator: unexpected odd derivation of heis(1|7)");

  // q = e^147 + e^257 + e^367 - e^123 + e^456 (0-based triples below),
  // extended antisymmetrically.
  struct Entry {
    int i, j, k;
    int c;
  };
  static const Entry kCubic[] = {{0, 3, 6, 1}, {1, 4, 6, 1}, {2, 5, 6, 1}, {0, 1, 2, -1}, {3, 4, 5, 1}};
  auto qval = [&](int a, int b, int c) -> Scalar {
    int v[3] = {a, b, c};
    int sgn = 1;
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2 - s; ++t)
        if (v[t] > v[t + 1]) {
          std::swap(v[t], v[t + 1]);
          sgn = -sgn;
        }
    if (v[0] == v[1] || v[1] == v[2]) return Scalar(0);
    for (const Entry& q : kCubic)
      if (q.i == v[0] && q.j == v[1] && q.k == v[2]) return Scalar(q.c * sgn);
    return Scalar(0);
  };

  // One row per triple i<j<k: the (i,j,k) component of A.q as a linear
  // functional in the coefficients over the level-0 basis.
  QMatrix constraints(35, n);
  std::size_t row = 0;
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j)
      for (int k = j + 1; k < 7; ++k, ++row)
        for (std::size_t e = 0; e < n; ++e) {
          const QMatrix& a = l0.act[e][0];
          Scalar v(0);
          for (int l = 0; l < 7; ++l) {
            v += a.at(std::size_t(l), std::size_t(i)) * qval(l, j, k);
            v += a.at(std::size_t(l), std::size_t(j)) * qval(i, l, k);
            v += a.at(std::size_t(l), std::size_t(k)) * qval(i, j, l);
          }
          constraints.at(row, e) = v;
        }

  std::vector<Vec> flats;
  for (const Vec& coeffs : constraints.nullspace()) {
    QMatrix map(7, 7);
    for (std::size_t e = 0; e < n; ++e) {
      if (coeffs[e].is_zero()) continue;
      map = map + l0.act[e][0] * coeffs[e];
    }
    out.action.push_back(map);
    flats.push_back(flatten_matrix(map));
  }
  const std::size_t strict_rank = flats.empty() ? 0 : QMatrix::from_rows(flats).rank();

  const QMatrix grading = QMatrix::identity(7) * Scalar(-1);
  flats.push_back(flatten_matrix(grading));
  const std::size_t full_rank = QMatrix::from_rows(flats).rank();
  out.grading_appended = full_rank > strict_rank;
  out.action.push_back(grading);
  out.dims = SuperDim{long(full_rank), 0};

  std::vector<Vec> derived;
  for (std::size_t a = 0; a < out.action.size(); ++a)
    for (std::size_t b = a + 1; b < out.action.size(); ++b)
      derived.push_back(
          flatten_matrix(out.action[a] * out.action[b] - out.action[b] * out.action[a]));
  out.derived_dims =
      SuperDim{derived.empty() ? 0 : long(QMatrix::from_rows(derived).rank()), 0};
  return out;
}

// ---------------------------------------------------------------------------
// Fixture grammar

namespace {

struct Token {
  enum Kind { Num, Ident, Plus, Minus, Star, LParen, RParen, LBracket, RBracket, End };
  Kind kind;
  std::string text;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string t;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) t += s[i++];
      if (i + 1 < s.size() && s[i] == '/' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
        t += s[i++];
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) t += s[i++];
      }
      out.push_back({Token::Num, std::move(t)});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string t;
      while (i < s.size() && std::isalnum(static_cast<unsigned char>(s[i]))) t += s[i++];
      out.push_back({Token::Ident, std::move(t)});
      continue;
    }
    Token::Kind k;
    switch (c) {
      case '+': k = Token::Plus; break;
      case '-': k = Token::Minus; break;
      case '*': k = Token::Star; break;
      case '(': k = Token::LParen; break;
      case ')': k = Token::RParen; break;
      case '[': k = Token::LBracket; break;
      case ']': k = Token::RBracket; break;
      default:
        throw std::invalid_argument(std::string("parse: unexpected character '") + c + "'");
    }
    out.push_back({k, std::string(1, c)});
    ++i;
  }
  out.push_back({Token::End, ""});
  return out;
}

// Either a polynomial or a first-order derivation; sums must not mix the
// two kinds and a derivation factor ends its term.
struct ExprValue {
  std::optional<SuperPolynomial> poly;
  std::optional<SuperVectorField> field;
};

class ExprParser {
 public:
  ExprParser(std::vector<Token> tokens, CoordSystemPtr sys)
      : ts_(std::move(tokens)), sys_(std::move(sys)) {}

  ExprValue parse() {
    ExprValue v = parse_expr();
    if (peek().kind != Token::End) throw std::invalid_argument("parse: trailing input");
    return v;
  }

 private:
  std::vector<Token> ts_;
  std::size_t pos_ = 0;
  CoordSystemPtr sys_;

  const Token& peek() const { return ts_[pos_]; }
  Token take() { return ts_[pos_++]; }
  void expect(Token::Kind k, const char* what) {
    if (peek().kind != k) throw std::invalid_argument(std::string("parse: expected ") + what);
    ++pos_;
  }

  static ExprValue negate(ExprValue v) {
    if (v.poly) v.poly = -*v.poly;
    if (v.field) v.field = -*v.field;
    return v;
  }

  void accumulate(ExprValue& acc, ExprValue v, bool subtract) {
    if (subtract) v = negate(std::move(v));
    if (acc.poly && v.poly) {
      *acc.poly += *v.poly;
    } else if (acc.field && v.field) {
      *acc.field += *v.field;
    } else {
      throw std::invalid_argument("parse: sum mixes polynomials and vector fields");
    }
  }

  ExprValue parse_expr() {
    bool neg = false;
    if (peek().kind == Token::Plus || peek().kind == Token::Minus)
      neg = take().kind == Token::Minus;
    ExprValue acc = parse_term();
    if (neg) acc = negate(std::move(acc));
    while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
      const bool subtract = take().kind == Token::Minus;
      accumulate(acc, parse_term(), subtract);
    }
    return acc;
  }

  static bool starts_factor(Token::Kind k) {
    return k == Token::Num || k == Token::Ident || k == Token::LParen;
  }

  ExprValue parse_term() {
    ExprValue acc;
    acc.poly = SuperPolynomial::constant(sys_, Scalar(1));
    bool any = false;
    while (true) {
      if (peek().kind == Token::Star) {
        take();
        if (!starts_factor(peek().kind))
          throw std::invalid_argument("parse: '*' must be followed by a factor");
        continue;
      }
      if (!starts_factor(peek().kind)) break;
      any = true;
      ExprValue f = parse_factor();
      if (acc.field)
        throw std::invalid_argument("parse: a derivation factor must end its term");
      if (f.poly) {
        acc.poly = *acc.poly * *f.poly;
      } else {
        acc.field = *acc.poly * *f.field;
        acc.poly.reset();
      }
    }
    if (!any) throw std::invalid_argument("parse: empty term");
    return acc;
  }

  ExprValue parse_factor() {
    ExprValue v;
    const Token t = take();
    switch (t.kind) {
      case Token::Num:
        v.poly = SuperPolynomial::constant(sys_, Scalar::from_string(t.text));
        return v;
      case Token::Ident: {
        if (t.text == "D") {
          expect(Token::LBracket, "'[' after D");
          if (peek().kind != Token::Ident)
            throw std::invalid_argument("parse: expected a coordinate inside D[...]");
          const std::string name = take().text;
          expect(Token::RBracket, "']' after D[coord");
          SuperVectorField f(sys_);
          if (auto i = even_index(name)) {
            f.even_coeff(*i) = SuperPolynomial::constant(sys_, Scalar(1));
          } else if (auto j = odd_index(name)) {
            f.odd_coeff(*j) = SuperPolynomial::constant(sys_, Scalar(1));
          } else {
            throw std::invalid_argument("parse: unknown coordinate '" + name + "'");
          }
          v.field = std::move(f);
          return v;
        }
        if (auto i = even_index(t.text)) {
          v.poly = SuperPolynomial::even_coord(sys_, *i);
          return v;
        }
        if (auto j = odd_index(t.text)) {
          v.poly = SuperPolynomial::odd_coord(sys_, *j);
          return v;
        }
        throw std::invalid_argument("parse: unknown coordinate '" + t.text + "'");
      }
      case Token::LParen: {
        v = parse_expr();
        if (peek().kind != Token::RParen)
          throw std::invalid_argument("parse: missing ')'");
        ++pos_;
        return v;
      }
      default:
        throw std::invalid_argument("parse: unexpected token '" + t.text + "'");
    }
  }

  std::optional<std::size_t> even_index(const std::string& name) const {
    for (std::size_t i = 0; i < sys_->even_names.size(); ++i)
      if (sys_->even_names[i] == name) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> odd_index(const std::string& name) const {
    for (std::size_t j = 0; j < sys_->odd_names.size(); ++j)
      if (sys_->odd_names[j] == name) return j;
    return std::nullopt;
  }
};

}  // namespace

SuperPolynomial parse_super_polynomial(const std::string& text, const CoordSystemPtr& sys) {
  ExprValue v = ExprParser(lex(text), sys).parse();
  if (!v.poly)
    throw std::invalid_argument("parse: expected a polynomial, found a vector field");
  return std::move(*v.poly);
}

SuperVectorField parse_super_field(const std::string& text, const CoordSystemPtr& sys) {
  ExprValue v = ExprParser(lex(text), sys).parse();
  if (v.field) return std::move(*v.field);
  if (v.poly && v.poly->is_zero()) return SuperVectorField(sys);
  throw std::invalid_argument("parse: expected a vector field, found a polynomial");
}

std::map<std::string, std::vector<std::string>> read_fixture_sections(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture file: " + path);
  std::map<std::string, std::vector<std::string>> sections;
  std::string line, current;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    if (line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      current = line.substr(1, line.size() - 2);
      sections[current];  // a section may legitimately stay empty
      continue;
    }
    if (current.empty())
      throw std::runtime_error("fixture line outside any section: " + line);
    sections[current].push_back(line);
  }
  return sections;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open fixture file: " + path);
  std::uint64_t h = 14695981039346656037ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Curated field lists

namespace {

const std::vector<std::string>& fixture_section(
    const std::map<std::string, std::vector<std::string>>& sections, const std::string& name,
    std::size_t expected, const std::string& path) {
  auto it = sections.find(name);
  if (it == sections.end())
    throw std::runtime_error("fixture " + path + ": missing section [" + name + "]");
  if (it->second.size() != expected)
    throw std::runtime_error("fixture " + path + ": section [" + name + "] has " +
                             std::to_string(it->second.size()) + " entries, expected " +
                             std::to_string(expected));
  return it->second;
}

// Contact weight (u -> 2, xi -> 1); throws unless f is weight-homogeneous.
int contact_weight(const SuperPolynomial& f, const std::string& label) {
  if (f.is_zero())
    throw std::runtime_error("generating function '" + label + "' is zero");
  std::optional<int> w;
  for (const auto& [m, c] : f.terms()) {
    const int mw = 2 * int(m.even[0]) + int(m.odd.size());
    if (!w) w = mw;
    if (*w != mw)
      throw std::runtime_error("generating function '" + label +
                               "' is not contact-weight homogeneous");
  }
  return *w;
}

// Common total coefficient degree of a field; throws unless homogeneous.
int coefficient_degree(const SuperVectorField& f, const std::string& label) {
  std::optional<int> d;
  auto scan = [&](const SuperPolynomial& p) {
    for (const auto& [m, c] : p.terms()) {
      const int md = int(m.total_degree());
      if (!d) d = md;
      if (*d != md)
        throw std::runtime_error("field '" + label + "' is not degree-homogeneous");
    }
  };
  const auto& sys = f.system();
  for (std::size_t i = 0; i < sys->even_names.size(); ++i) scan(f.even_coeff(i));
  for (std::size_t j = 0; j < sys->odd_names.size(); ++j) scan(f.odd_coeff(j));
  if (!d) throw std::runtime_error("field '" + label + "' is zero");
  return *d;
}

std::string default_fixture(const char* name) {
  return std::string(G3F4_SOURCE_DIR) + "/tests/fixtures/" + name;
}

}  // namespace

ContactRealization g3_contact_realization(const std::string& path) {
  const std::string file = path.empty() ? default_fixture("contact_g3.txt") : path;
  const auto sections = read_fixture_sections(file);
  ContactRealization r;
  const auto sys = contact_coords();
  for (const std::string& text : fixture_section(sections, "s0", 17, file)) {
    auto f = parse_super_polynomial(text, sys);
    if (f.pure_parity() != Even)
      throw std::runtime_error("even generating function has odd terms: " + text);
    r.even_functions.push_back(std::move(f));
  }
  for (const std::string& text : fixture_section(sections, "s1", 14, file)) {
    auto f = parse_super_polynomial(text, sys);
    if (f.pure_parity() != Odd)
      throw std::runtime_error("odd generating function has even terms: " + text);
    r.odd_functions.push_back(std::move(f));
  }
  return r;
}

FieldBasis ContactRealization::field_basis() const {
  FieldBasis basis;
  auto add = [&](const std::vector<GeneratingFunction>& fns, const std::string& prefix) {
    for (std::size_t i = 0; i < fns.size(); ++i) {
      const std::string label = prefix + std::to_string(i + 1);
      basis.fields.push_back(contact_field(fns[i]));
      basis.labels.push_back(label);
      basis.degrees.push_back(contact_weight(fns[i], label) - 2);
    }
  };
  add(even_functions, "s0_");
  add(odd_functions, "s1_");
  return basis;
}

FlatRealization f4_flat_realization(const std::string& path) {
  const std::string file = path.empty() ? default_fixture("f4_fields.txt") : path;
  const auto sections = read_fixture_sections(file);
  const auto sys = realization_coords();

  FlatRealization r;
  // Expected parity per entry: uniform for every section except the degree
  // -1 frame, whose first six fields (d_{x_i}) are even and last four
  // (d_{xi_j}) odd.
  auto add = [&](const std::string& name, std::size_t count, int degree,
                 auto expected_parity) {
    const auto& lines = fixture_section(sections, name, count, file);
    for (std::size_t k = 0; k < lines.size(); ++k) {
      const std::string label = name + "_" + std::to_string(k + 1);
      SuperVectorField f = parse_super_field(lines[k], sys);
      if (f.pure_parity() != std::optional<Parity>(expected_parity(k)))
        throw std::runtime_error("fixture " + file + ": field '" + label +
                                 "' has unexpected parity: " + lines[k]);
      if (coefficient_degree(f, label) - 1 != degree)
        throw std::runtime_error("fixture " + file + ": field '" + label +
                                 "' has unexpected degree: " + lines[k]);
      r.basis.fields.push_back(std::move(f));
      r.basis.labels.push_back(label);
      r.basis.degrees.push_back(degree);
    }
  };
  auto uniform = [](Parity p) { return [p](std::size_t) { return p; }; };
  add("gm1", 10, -1, [](std::size_t k) { return k < 6 ? Even : Odd; });
  add("g0_even", 12, 0, uniform(Even));
  add("g0_odd", 8, 0, uniform(Odd));
  add("g1_even", 6, 1, uniform(Even));
  add("g1_odd", 4, 1, uniform(Odd));
  r.grading_index = 21;  // the Euler field is the last g0_even entry
  return r;
}

}  // namespace g3f4
