#include <g3f4/super.hpp>

#include <json.hpp>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace g3f4 {

SparseVec sparse_normalize(SparseVec v) {
  std::sort(v.begin(), v.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  for (auto& [i, c] : v) {
    if (!out.empty() && out.back().first == i)
      out.back().second += c;
    else
      out.emplace_back(i, c);
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const auto& p) { return p.second.is_zero(); }),
            out.end());
  return out;
}

SparseVec sparse_add(const SparseVec& a, const SparseVec& b) {
  SparseVec v = a;
  v.insert(v.end(), b.begin(), b.end());
  return sparse_normalize(std::move(v));
}

SparseVec sparse_scale(const Scalar& c, const SparseVec& a) {
  if (c.is_zero()) return {};
  SparseVec v;
  v.reserve(a.size());
  for (const auto& [i, x] : a) v.emplace_back(i, c * x);
  return v;
}

SparseVec sparse_from_dense(const Vec& v) {
  SparseVec out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) out.emplace_back(i, v[i]);
  return out;
}

Vec dense_from_sparse(const SparseVec& v, std::size_t n) {
  Vec out(n);
  for (const auto& [i, c] : v) {
    if (i >= n) throw std::out_of_range("dense_from_sparse: index out of range");
    out[i] = c;
  }
  return out;
}

GradedLieSuperalgebra::GradedLieSuperalgebra(std::vector<BasisElement> basis,
                                             StructureTable table,
                                             std::map<std::string, std::string> metadata)
    : basis_(std::move(basis)), table_(std::move(table)), metadata_(std::move(metadata)) {
  std::set<std::string> labels;
  for (const auto& b : basis_)
    if (!labels.insert(b.label).second)
      throw std::invalid_argument("duplicate basis label: " + b.label);
  for (const auto& [key, val] : table_) {
    auto [i, j] = key;
    if (i >= basis_.size() || j >= basis_.size())
      throw std::invalid_argument("structure table index out of range");
    if (i > j) throw std::invalid_argument("structure table must be stored with i <= j");
    if (i == j && basis_[i].parity == Even)
      throw std::invalid_argument("even diagonal bracket must be implicit zero");
    Parity p = parity_add(basis_[i].parity, basis_[j].parity);
    int deg = basis_[i].degree + basis_[j].degree;
    std::size_t prev = 0;
    bool first = true;
    for (const auto& [k, c] : val) {
      if (k >= basis_.size()) throw std::invalid_argument("bracket target out of range");
      if (!first && k <= prev) throw std::invalid_argument("sparse vector not sorted");
      first = false;
      prev = k;
      if (c.is_zero()) throw std::invalid_argument("stored zero coefficient");
      if (basis_[k].parity != p)
        throw std::invalid_argument("parity additivity violated at [" + basis_[i].label +
                                    "," + basis_[j].label + "]");
      if (basis_[k].degree != deg)
        throw std::invalid_argument("degree additivity violated at [" + basis_[i].label +
                                    "," + basis_[j].label + "]");
    }
  }
}

SuperDim GradedLieSuperalgebra::super_dim() const {
  SuperDim d;
  for (const auto& b : basis_) (b.parity == Even ? d.even : d.odd)++;
  return d;
}

std::map<int, SuperDim> GradedLieSuperalgebra::graded_dims() const {
  std::map<int, SuperDim> m;
  for (const auto& b : basis_) {
    auto& d = m[b.degree];
    (b.parity == Even ? d.even : d.odd)++;
  }
  return m;
}

SparseVec GradedLieSuperalgebra::bracket_basis(std::size_t i, std::size_t j) const {
  if (i >= basis_.size() || j >= basis_.size())
    throw std::out_of_range("bracket_basis: index out of range");
  if (i == j && basis_[i].parity == Even) return {};
  const bool flip = i > j;
  auto it = table_.find(flip ? std::make_pair(j, i) : std::make_pair(i, j));
  if (it == table_.end()) return {};
  if (!flip) return it->second;
  // [b_i, b_j] = -(-1)^{|b_i||b_j|} [b_j, b_i]
  Scalar s = -sign_pow(basis_[i].parity * basis_[j].parity);
  return sparse_scale(s, it->second);
}

Vec GradedLieSuperalgebra::bracket(const Vec& x, const Vec& y) const {
  if (x.size() != basis_.size() || y.size() != basis_.size())
    throw std::invalid_argument("bracket: dimension mismatch");
  Vec out(basis_.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j].is_zero()) continue;
      Scalar c = x[i] * y[j];
      for (const auto& [k, v] : bracket_basis(i, j)) out[k] += c * v;
    }
  }
  return out;
}

SparseVec GradedLieSuperalgebra::bracket_sparse(const SparseVec& x, const SparseVec& y) const {
  SparseVec acc;
  for (const auto& [i, xi] : x)
    for (const auto& [j, yj] : y) {
      Scalar c = xi * yj;
      for (const auto& [k, v] : bracket_basis(i, j)) acc.emplace_back(k, c * v);
    }
  return sparse_normalize(std::move(acc));
}

std::optional<JacobiFailure> GradedLieSuperalgebra::check_jacobi() const {
  const std::size_t n = basis_.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        const int pi = basis_[i].parity, pj = basis_[j].parity, pk = basis_[k].parity;
        // (-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]] + (-1)^{|z||y|}[z,[x,y]]
        SparseVec acc;
        {
          SparseVec t;
          for (const auto& [m, c] : bracket_basis(j, k))
            for (const auto& [l, v] : bracket_basis(i, m))
              t.emplace_back(l, sign_pow(pi * pk) * c * v);
          acc = sparse_add(acc, sparse_normalize(std::move(t)));
        }
        {
          SparseVec t;
          for (const auto& [m, c] : bracket_basis(k, i))
            for (const auto& [l, v] : bracket_basis(j, m))
              t.emplace_back(l, sign_pow(pj * pi) * c * v);
          acc = sparse_add(acc, sparse_normalize(std::move(t)));
        }
        {
          SparseVec t;
          for (const auto& [m, c] : bracket_basis(i, j))
            for (const auto& [l, v] : bracket_basis(k, m))
              t.emplace_back(l, sign_pow(pk * pj) * c * v);
          acc = sparse_add(acc, sparse_normalize(std::move(t)));
        }
        if (!acc.empty()) return JacobiFailure{i, j, k, acc};
      }
  return std::nullopt;
}

std::vector<std::size_t> GradedLieSuperalgebra::canonical_order() const {
  std::vector<std::size_t> idx(basis_.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [this](std::size_t a, std::size_t b) {
    const auto& x = basis_[a];
    const auto& y = basis_[b];
    if (x.degree != y.degree) return x.degree > y.degree;
    if (x.parity != y.parity) return x.parity < y.parity;
    return x.label < y.label;
  });
  return idx;
}

std::optional<Parity> GradedMap::pure_parity() const {
  bool has[2] = {false, false};
  for (std::size_t r = 0; r < mat.rows(); ++r)
    for (std::size_t c = 0; c < mat.cols(); ++c)
      if (!mat.at(r, c).is_zero()) has[block_parity(r, c)] = true;
  if (has[0] && has[1]) return std::nullopt;
  if (has[1]) return Odd;
  return Even;  // zero map counts as even
}

std::pair<GradedMap, GradedMap> parity_split(const GradedMap& a) {
  GradedMap a0(a.src, a.dst), a1(a.src, a.dst);
  for (std::size_t r = 0; r < a.mat.rows(); ++r)
    for (std::size_t c = 0; c < a.mat.cols(); ++c) {
      const Scalar& x = a.mat.at(r, c);
      if (x.is_zero()) continue;
      (a.block_parity(r, c) == Even ? a0 : a1).mat.at(r, c) = x;
    }
  return {a0, a1};
}

namespace {
long long to_ll(const mpz_class& z) {
  if (!z.fits_slong_p())
    throw std::runtime_error("structure constant exceeds JSON integer range");
  return z.get_si();
}
}  // namespace

std::string to_json(const GradedLieSuperalgebra& alg) {
  using nlohmann::json;
  auto order = alg.canonical_order();
  std::vector<std::size_t> pos(order.size());
  for (std::size_t new_i = 0; new_i < order.size(); ++new_i) pos[order[new_i]] = new_i;

  json basis = json::array();
  for (std::size_t new_i = 0; new_i < order.size(); ++new_i) {
    const auto& b = alg.element(order[new_i]);
    basis.push_back({{"label", b.label},
                     {"parity", int(b.parity)},
                     {"degree", b.degree},
                     {"multidegree", b.multidegree}});
  }

  // Re-key entries by canonical positions, keeping (i <= j) storage.
  std::map<std::pair<std::size_t, std::size_t>, SparseVec> entries;
  for (const auto& [key, val] : alg.table()) {
    std::size_t i = pos[key.first], j = pos[key.second];
    SparseVec v;
    if (i <= j) {
      v = val;
    } else {
      std::swap(i, j);
      Scalar s = -sign_pow(alg.element(key.first).parity * alg.element(key.second).parity);
      v = sparse_scale(s, val);
    }
    SparseVec remapped;
    for (const auto& [k, c] : v) remapped.emplace_back(pos[k], c);
    entries[{i, j}] = sparse_normalize(std::move(remapped));
  }

  json brackets = json::array();
  for (const auto& [key, val] : entries) {
    json coeffs = json::array();
    for (const auto& [k, c] : val)
      coeffs.push_back({k, to_ll(c.num()), to_ll(c.den())});
    brackets.push_back({key.first, key.second, coeffs});
  }

  json meta = json::object();
  for (const auto& [k, v] : alg.metadata()) meta[k] = v;

  json out{{"basis", basis}, {"brackets", brackets}, {"metadata", meta}};
  return out.dump(1);
}

GradedLieSuperalgebra algebra_from_json(const std::string& text) {
  using nlohmann::json;
  json j = json::parse(text);
  std::vector<BasisElement> basis;
  for (const auto& b : j.at("basis")) {
    BasisElement e;
    e.label = b.at("label").get<std::string>();
    e.parity = b.at("parity").get<int>() ? Odd : Even;
    e.degree = b.at("degree").get<int>();
    e.multidegree = b.at("multidegree").get<std::vector<int>>();
    basis.push_back(std::move(e));
  }
  StructureTable table;
  for (const auto& ent : j.at("brackets")) {
    std::size_t i = ent.at(0).get<std::size_t>();
    std::size_t jj = ent.at(1).get<std::size_t>();
    SparseVec v;
    for (const auto& kc : ent.at(2)) {
      long long num = kc.at(1).get<long long>();
      long long den = kc.at(2).get<long long>();
      v.emplace_back(kc.at(0).get<std::size_t>(), Scalar(long(num), long(den)));
    }
    table[{i, jj}] = sparse_normalize(std::move(v));
  }
  std::map<std::string, std::string> meta;
  if (j.contains("metadata"))
    for (auto it = j["metadata"].begin(); it != j["metadata"].end(); ++it)
      meta[it.key()] = it.value().get<std::string>();
  return GradedLieSuperalgebra(std::move(basis), std::move(table), std::move(meta));
}

}  // namespace g3f4
