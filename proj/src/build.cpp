#include <g3f4/build.hpp>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace g3f4 {

std::string root_label(const std::vector<int>& m) {
  std::string s = "e(";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(m[i]);
  }
  return s + ")";
}

std::optional<std::pair<Scalar, std::size_t>> HalfTable::bracket(
    std::size_t i, std::size_t j) const {
  if (i > j) {
    auto r = bracket(j, i);
    if (!r) return std::nullopt;
    // [e_i, e_j] = -(-1)^{|i||j|} [e_j, e_i]
    Scalar flip = (roots[i].parity == Odd && roots[j].parity == Odd)
                      ? Scalar(1)
                      : Scalar(-1);
    return std::make_pair(flip * r->first, r->second);
  }
  if (i == j && roots[i].parity == Even) return std::nullopt;
  std::vector<int> sum(roots[i].m.size());
  for (std::size_t k = 0; k < sum.size(); ++k)
    sum[k] = roots[i].m[k] + roots[j].m[k];
  auto it = index.find(sum);
  if (it == index.end()) return std::nullopt;
  auto c = constants.find({i, j});
  if (c == constants.end())
    throw std::logic_error("structure constant not yet solved");
  return std::make_pair(c->second, it->second);
}

namespace {

std::vector<int> vec_sum_m(const std::vector<int>& a,
                           const std::vector<int>& b) {
  std::vector<int> s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
  return s;
}

std::vector<RootVector> positive_roots_sorted(const DiagramId& d) {
  std::vector<RootVector> out;
  for (const auto& r : enumerate_roots(d))
    if (r.is_positive()) out.push_back(r);
  return out;  // enumerate_roots emits positives in (height asc, lex) order
}

// Brute-force graded Jacobi over all triples of one sign half (the half is
// closed under brackets); throws on the first failing triple.
void check_half_jacobi(const HalfTable& t) {
  const std::size_t n = t.roots.size();
  auto par = [&](std::size_t i) { return int(t.roots[i].parity); };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        std::map<std::size_t, Scalar> acc;
        const std::array<std::array<std::size_t, 3>, 3> cyc = {
            {{i, j, k}, {j, k, i}, {k, i, j}}};
        for (const auto& term : cyc) {
          const std::size_t a = term[0], b = term[1], c = term[2];
          auto inner = t.bracket(b, c);
          if (!inner) continue;
          auto outer = t.bracket(a, inner->second);
          if (!outer) continue;
          acc[outer->second] +=
              sign_pow(par(a) * par(c)) * inner->first * outer->first;
        }
        for (const auto& [tgt, v] : acc) {
          (void)tgt;
          if (!(v == Scalar(0)))
            throw std::logic_error("half table fails Jacobi at triple (" +
                                   t.roots[i].m_str() + ", " +
                                   t.roots[j].m_str() + ", " +
                                   t.roots[k].m_str() + ")");
        }
      }
}

// ---------------------------------------------------------------------------
// Unified per-diagram construction.
//
// Both sign halves are built together with the mixed brackets, by recursion
// on root height.  For each non-simple positive root g the lexicographically
// smallest decomposition pair (in basis order) is pinned to constant 1 in
// both halves — this defines the root vectors e_g and f_g.  Every other
// decomposition constant is then derived, not solved: applying a lowering
// operator f_i (resp. raising e_i) with [e_g, f_i] != 0 to the defining
// relation [e_a, e_b] = N e_g expresses N as a ratio of brackets of strictly
// smaller total height, all already known.  The derivation is exact and
// leaves nothing underdetermined (unlike a per-root Jacobi solve, which has
// too few same-height equations when a simple-root triangle sums to a root).
//
// Full-basis layout used by the mixed vectors: negatives [0,n), Cartan
// [n,n+r), positives [n+r,n+r+n).

struct TablesBuilder {
  DiagramId d;
  std::size_t r, n;
  HalfTable neg, pos;
  std::vector<AmbientWeight> simples;
  std::map<std::pair<std::size_t, std::size_t>, SparseVec> mixed;

  explicit TablesBuilder(const DiagramId& dd)
      : d(dd), r(std::size_t(rank(dd.alg))), simples(simple_system(dd)) {
    neg.diagram = pos.diagram = dd;
    neg.roots = negative_roots(dd);
    pos.roots = positive_roots_sorted(dd);
    n = neg.roots.size();
    for (std::size_t i = 0; i < n; ++i) {
      neg.index[neg.roots[i].m] = i;
      pos.index[pos.roots[i].m] = i;
      std::vector<int> mm = pos.roots[i].m;
      for (int& x : mm) x = -x;
      if (neg.roots[i].m != mm)
        throw std::logic_error("halves are not mirror-aligned");
    }
  }

  std::size_t fneg(std::size_t i) const { return i; }
  std::size_t fh(std::size_t j) const { return n + j; }
  std::size_t fpos(std::size_t i) const { return n + r + i; }

  static SparseVec unit(std::size_t k, Scalar c) {
    return SparseVec{{k, std::move(c)}};
  }

  // Killing dual of the coroot of the positive root i, over the h-basis:
  // 2<.,a>/<a,a> for non-isotropic a, <.,a> for isotropic a.
  SparseVec coroot(std::size_t i) const {
    const AmbientWeight& a = pos.roots[i].ambient;
    const Scalar aa = killing_pairing(a, a);
    SparseVec v;
    for (std::size_t j = 0; j < r; ++j) {
      Scalar cj = killing_pairing(simples[j], a);
      if (!(aa == Scalar(0))) cj = Scalar(2) * cj / aa;
      if (!(cj == Scalar(0))) v.emplace_back(fh(j), cj);
    }
    return v;
  }

  // [e_i, v] for a vector over the full basis.
  SparseVec bracket_e(std::size_t i, const SparseVec& v) {
    SparseVec res;
    for (const auto& [k, c] : v) {
      if (k < n) {
        res = sparse_add(res, sparse_scale(c, M(i, k)));
      } else if (k < n + r) {
        const int mj = pos.roots[i].m[k - n];
        if (mj) res = sparse_add(res, unit(fpos(i), Scalar(-mj) * c));
      } else {
        auto br = pos.bracket(i, k - n - r);
        if (br) res = sparse_add(res, unit(fpos(br->second), c * br->first));
      }
    }
    return res;
  }

  // [v, f_j].
  SparseVec bracket_f(const SparseVec& v, std::size_t j) {
    SparseVec res;
    for (const auto& [k, c] : v) {
      if (k < n) {
        auto br = neg.bracket(k, j);
        if (br) res = sparse_add(res, unit(fneg(br->second), c * br->first));
      } else if (k < n + r) {
        const int mj = neg.roots[j].m[k - n];
        if (mj) res = sparse_add(res, unit(fneg(j), Scalar(mj) * c));
      } else {
        res = sparse_add(res, sparse_scale(c, M(k - n - r, j)));
      }
    }
    return res;
  }

  // [f_mu, v].
  SparseVec bracket_fleft(std::size_t mu, const SparseVec& v) {
    SparseVec res;
    for (const auto& [k, c] : v) {
      if (k < n) {
        auto br = neg.bracket(mu, k);
        if (br) res = sparse_add(res, unit(fneg(br->second), c * br->first));
      } else if (k < n + r) {
        const int mj = neg.roots[mu].m[k - n];
        if (mj) res = sparse_add(res, unit(fneg(mu), Scalar(-mj) * c));
      } else {
        const std::size_t q = k - n - r;
        Scalar flip =
            (neg.roots[mu].parity == Odd && pos.roots[q].parity == Odd)
                ? Scalar(1)
                : Scalar(-1);
        res = sparse_add(res, sparse_scale(c * flip, M(q, mu)));
      }
    }
    return res;
  }

  // [e_i, f_j], memoized; recursion strictly decreases total height.
  const SparseVec& M(std::size_t i, std::size_t j) {
    const auto key = std::make_pair(i, j);
    auto it = mixed.find(key);
    if (it != mixed.end()) return it->second;
    const int hp = pos.roots[i].height();
    const int hn = -neg.roots[j].height();
    SparseVec res;
    if (hp == 1 && hn == 1) {
      if (i == j) res = coroot(i);  // mirror alignment: same index = same root
    } else if (hp >= 2) {
      // e_i = [e_mu, e_nu] (pin, constant 1):
      // [[e_mu,e_nu],f_j] = [e_mu,[e_nu,f_j]] - (-1)^{|mu||nu|}[e_nu,[e_mu,f_j]]
      const auto [mu, nu] = pos.pins.at(i);
      SparseVec t1 = bracket_e(mu, M(nu, j));
      SparseVec t2 = bracket_e(nu, M(mu, j));
      Scalar s =
          sign_pow(int(pos.roots[mu].parity) * int(pos.roots[nu].parity));
      res = sparse_add(t1, sparse_scale(-s, t2));
    } else {
      // f_j = [f_mu, f_nu] (pin, constant 1):
      // [e_i,[f_mu,f_nu]] = [[e_i,f_mu],f_nu] + (-1)^{|e_i||f_mu|}[f_mu,[e_i,f_nu]]
      const auto [mu, nu] = neg.pins.at(j);
      SparseVec t1 = bracket_f(M(i, mu), nu);
      SparseVec t2 = bracket_fleft(mu, M(i, nu));
      Scalar s =
          sign_pow(int(pos.roots[i].parity) * int(neg.roots[mu].parity));
      res = sparse_add(t1, sparse_scale(s, t2));
    }
    return mixed.emplace(key, std::move(res)).first->second;
  }

  // w must be a scalar multiple of den (a single-component vector); returns
  // that scalar.  what names the constant being derived, for diagnostics.
  Scalar ratio(const SparseVec& w, const SparseVec& den,
               const std::string& what) const {
    if (den.size() != 1)
      throw std::logic_error("descent bracket is not a root vector: " + what);
    if (w.size() != 1 || w[0].first != den[0].first)
      throw std::logic_error("descent numerator off the root line: " + what);
    Scalar c = w[0].second / den[0].second;
    if (c == Scalar(0))
      throw std::logic_error("vanishing root-sum constant: " + what);
    return c;
  }

  void run() {
    for (std::size_t g = 0; g < n; ++g) {
      if (pos.roots[g].height() < 2) continue;
      const auto& mg = pos.roots[g].m;

      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
          if (i == j && pos.roots[i].parity == Even) continue;
          if (vec_sum_m(pos.roots[i].m, pos.roots[j].m) == mg)
            pairs.emplace_back(i, j);
        }
      if (pairs.empty())
        throw std::logic_error("no decomposition pair for root " +
                               pos.roots[g].m_str());
      const auto pin = pairs.front();
      pos.pins[g] = pin;
      pos.constants[pin] = Scalar(1);
      neg.pins[g] = pin;
      neg.constants[pin] = Scalar(1);
      if (pairs.size() == 1) continue;

      // Descent operators: the first simple root with a nonzero bracket
      // against e_g (resp. f_g).  One exists because the adjoint
      // representation of a simple algebra admits no lowest- or
      // highest-weight vector at nonzero height.
      std::size_t sp = n, sn = n;
      for (std::size_t i = 0; i < r && (sp == n || sn == n); ++i) {
        if (sp == n && !M(g, i).empty()) sp = i;
        if (sn == n && !M(i, g).empty()) sn = i;
      }
      if (sp == n || sn == n)
        throw std::logic_error("no descent operator for root " +
                               pos.roots[g].m_str());
      const SparseVec den_pos = M(g, sp);  // [e_g, f_sp]
      const SparseVec den_neg = M(sn, g);  // [e_sn, f_g]

      for (std::size_t q = 1; q < pairs.size(); ++q) {
        const auto [a, bb] = pairs[q];
        const int pa = int(pos.roots[a].parity);
        const int pb = int(pos.roots[bb].parity);
        const std::string what =
            pos.roots[a].m_str() + "+" + pos.roots[bb].m_str();

        // [[e_a,e_b],f_i] = [e_a,[e_b,f_i]] - (-1)^{|a||b|}[e_b,[e_a,f_i]]
        SparseVec w = sparse_add(
            bracket_e(a, M(bb, sp)),
            sparse_scale(-sign_pow(pa * pb), bracket_e(bb, M(a, sp))));
        pos.constants[pairs[q]] = ratio(w, den_pos, "e " + what);

        // [[f_a,f_b],e_i] = [f_a,[f_b,e_i]] - (-1)^{|a||b|}[f_b,[f_a,e_i]]
        // with [f_x, e_i] = -(-1)^{|x||i|} [e_i, f_x].
        auto neg_of = [&](std::size_t x) {
          Scalar flip =
              (neg.roots[x].parity == Odd && pos.roots[sn].parity == Odd)
                  ? Scalar(1)
                  : Scalar(-1);
          return sparse_scale(flip, M(sn, x));
        };
        SparseVec wn = sparse_add(
            bracket_fleft(a, neg_of(bb)),
            sparse_scale(-sign_pow(pa * pb), bracket_fleft(bb, neg_of(a))));
        Scalar flip_g =
            (neg.roots[g].parity == Odd && pos.roots[sn].parity == Odd)
                ? Scalar(1)
                : Scalar(-1);
        neg.constants[pairs[q]] =
            ratio(wn, sparse_scale(flip_g, den_neg), "f " + what);
      }
    }

    // Exhaustive mixed brackets (the laziness above fills only what the
    // derivations touched).
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) (void)M(i, j);

    check_half_jacobi(neg);
    check_half_jacobi(pos);
  }
};

struct DiagramTables {
  HalfTable neg, pos;
  std::map<std::pair<std::size_t, std::size_t>, SparseVec> mixed;
};

const DiagramTables& diagram_tables(const DiagramId& d) {
  static std::mutex mu;
  static std::map<DiagramId, DiagramTables> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it == cache.end()) {
    TablesBuilder b(d);
    b.run();
    it = cache
             .emplace(d, DiagramTables{std::move(b.neg), std::move(b.pos),
                                       std::move(b.mixed)})
             .first;
  }
  return it->second;
}

}  // namespace

const HalfTable& borel_negative(const DiagramId& d) {
  return diagram_tables(d).neg;
}

const HalfTable& borel_positive(const DiagramId& d) {
  return diagram_tables(d).pos;
}

// ---------------------------------------------------------------------------
// Symbol algebras

namespace {

std::map<std::string, std::string> case_metadata(const ParabolicId& p,
                                                 const std::string& kind) {
  return {{"algebra", algebra_name(p.diagram.alg)},
          {"diagram", diagram_name(p.diagram)},
          {"case", case_name(p)},
          {"kind", kind}};
}

void sort_symbol_roots(std::vector<RootVector>& rs, const Crossing& chi) {
  std::sort(rs.begin(), rs.end(),
            [&](const RootVector& a, const RootVector& b) {
              int da = grading_weight(a.m, chi), db = grading_weight(b.m, chi);
              if (da != db) return da > db;  // -1 block first
              if (a.parity != b.parity) return a.parity < b.parity;
              return root_label(a.m) < root_label(b.m);
            });
}

}  // namespace

SymbolAlgebra build_symbol(const ParabolicId& p) {
  const auto& neg = borel_negative(p.diagram);
  std::vector<RootVector> rs;
  for (const auto& r : neg.roots)
    if (grading_weight(r.m, p.crossing) < 0) rs.push_back(r);
  sort_symbol_roots(rs, p.crossing);

  std::map<std::vector<int>, std::size_t> idx;
  for (std::size_t i = 0; i < rs.size(); ++i) idx[rs[i].m] = i;

  StructureTable table;
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = i; j < rs.size(); ++j) {
      if (i == j && rs[i].parity == Even) continue;
      auto br = neg.bracket(neg.index.at(rs[i].m), neg.index.at(rs[j].m));
      if (!br) continue;
      // Sums of two negative-weight roots keep negative weight, so the
      // target always belongs to the symbol basis.
      table[{i, j}] = {{idx.at(neg.roots[br->second].m), br->first}};
    }

  std::vector<BasisElement> basis;
  basis.reserve(rs.size());
  for (const auto& r : rs)
    basis.push_back(BasisElement{root_label(r.m), r.parity,
                                 grading_weight(r.m, p.crossing), r.m});
  return SymbolAlgebra{
      p, rs,
      GradedLieSuperalgebra(std::move(basis), std::move(table),
                            case_metadata(p, "symbol"))};
}

SymbolAlgebra regrade(const SymbolAlgebra& s, const Crossing& chi2) {
  const DiagramId d = s.parabolic.diagram;
  if (chi2.empty()) throw std::invalid_argument("regrade: empty crossing");
  for (int k : chi2)
    if (k < 1 || k > rank(d.alg))
      throw std::invalid_argument("regrade: node out of range");
  const ParabolicId p2{d, chi2};

  std::map<std::vector<int>, std::size_t> have;
  for (std::size_t i = 0; i < s.roots.size(); ++i) have[s.roots[i].m] = i;
  for (const auto& r : negative_roots(d))
    if (grading_weight(r.m, chi2) < 0 && !have.count(r.m))
      throw std::invalid_argument(
          "regrade: crossing needs roots absent from this symbol");

  std::vector<RootVector> rs;
  for (const auto& r : s.roots)
    if (grading_weight(r.m, chi2) < 0) rs.push_back(r);
  sort_symbol_roots(rs, chi2);

  std::map<std::vector<int>, std::size_t> idx;
  for (std::size_t i = 0; i < rs.size(); ++i) idx[rs[i].m] = i;

  StructureTable table;
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = i; j < rs.size(); ++j) {
      if (i == j && rs[i].parity == Even) continue;
      SparseVec v = s.alg.bracket_basis(have.at(rs[i].m), have.at(rs[j].m));
      if (v.empty()) continue;
      if (v.size() != 1)
        throw std::logic_error("regrade: non-root-vector bracket");
      table[{i, j}] = {{idx.at(s.roots[v[0].first].m), v[0].second}};
    }

  std::vector<BasisElement> basis;
  basis.reserve(rs.size());
  for (const auto& r : rs)
    basis.push_back(BasisElement{root_label(r.m), r.parity,
                                 grading_weight(r.m, chi2), r.m});
  return SymbolAlgebra{
      p2, rs,
      GradedLieSuperalgebra(std::move(basis), std::move(table),
                            case_metadata(p2, "symbol"))};
}

// ---------------------------------------------------------------------------
// Full algebras

namespace {

FullAlgebra make_full(const DiagramId& d) {
  const DiagramTables& t = diagram_tables(d);
  const std::size_t n = t.neg.roots.size();
  const std::size_t r = std::size_t(rank(d.alg));
  const auto simples = simple_system(d);

  auto fneg = [&](std::size_t i) { return i; };
  auto fh = [&](std::size_t j) { return n + j; };
  auto fpos = [&](std::size_t i) { return n + r + i; };

  auto coroot = [&](std::size_t i) {
    const AmbientWeight& a = t.pos.roots[i].ambient;
    const Scalar aa = killing_pairing(a, a);
    SparseVec v;
    for (std::size_t j = 0; j < r; ++j) {
      Scalar cj = killing_pairing(simples[j], a);
      if (!(aa == Scalar(0))) cj = Scalar(2) * cj / aa;
      if (!(cj == Scalar(0))) v.emplace_back(fh(j), cj);
    }
    return v;
  };

  // Rescale each positive root vector so [e_a, e_{-a}] is exactly the coroot.
  std::vector<Scalar> s(n, Scalar(1));
  for (std::size_t i = 0; i < n; ++i) {
    const SparseVec& v = t.mixed.at({i, i});
    SparseVec tc = coroot(i);
    if (v.empty() || tc.empty())
      throw std::logic_error("mirror bracket or coroot vanished");
    for (const auto& [k, c] : v) {
      (void)c;
      if (k < n || k >= n + r)
        throw std::logic_error("[e, f] of a mirror pair is not in the Cartan");
    }
    Scalar cfac(0);
    for (const auto& [vk, vc] : v)
      if (vk == tc[0].first) cfac = vc / tc[0].second;
    if (cfac == Scalar(0) || sparse_scale(cfac, tc) != v)
      throw std::logic_error("mirror bracket not proportional to the coroot");
    s[i] = Scalar(1) / cfac;
  }

  StructureTable table;
  auto put = [&](std::size_t i, std::size_t j, SparseVec v) {
    v = sparse_normalize(std::move(v));
    if (!v.empty()) table[{i, j}] = std::move(v);
  };

  for (const auto& [pr, c] : t.neg.constants) {
    auto br = t.neg.bracket(pr.first, pr.second);
    put(fneg(pr.first), fneg(pr.second), {{fneg(br->second), c}});
  }
  for (const auto& [pr, c] : t.pos.constants) {
    auto br = t.pos.bracket(pr.first, pr.second);
    const std::size_t k = br->second;
    put(fpos(pr.first), fpos(pr.second),
        {{fpos(k), c * s[pr.first] * s[pr.second] / s[k]}});
  }
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const int mn = t.neg.roots[i].m[j];
      if (mn) put(fneg(i), fh(j), {{fneg(i), Scalar(-mn)}});
      const int mp = t.pos.roots[i].m[j];
      if (mp) put(fh(j), fpos(i), {{fpos(i), Scalar(mp)}});
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      SparseVec v = t.mixed.at({i, j});
      if (v.empty()) continue;
      // Rescale: e-components by s_i/s_k, Cartan and f-components by s_i,
      // then store as [f_j, e_i] = -(-1)^{|i||j|} [e_i, f_j].
      for (auto& [k, c] : v) {
        c = c * s[i];
        if (k >= n + r) c = c / s[k - n - r];
      }
      Scalar flip =
          (t.pos.roots[i].parity == Odd && t.neg.roots[j].parity == Odd)
              ? Scalar(1)
              : Scalar(-1);
      put(fneg(j), fpos(i), sparse_scale(flip, v));
    }

  std::vector<BasisElement> basis(2 * n + r);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rn = t.neg.roots[i];
    basis[fneg(i)] =
        BasisElement{root_label(rn.m), rn.parity, rn.height(), rn.m};
    const auto& rp = t.pos.roots[i];
    basis[fpos(i)] =
        BasisElement{root_label(rp.m), rp.parity, rp.height(), rp.m};
  }
  for (std::size_t j = 0; j < r; ++j)
    basis[fh(j)] = BasisElement{"h" + std::to_string(j + 1), Even, 0,
                                std::vector<int>(r, 0)};

  GradedLieSuperalgebra alg(std::move(basis), std::move(table),
                            {{"algebra", algebra_name(d.alg)},
                             {"diagram", diagram_name(d)},
                             {"kind", "full"}});
  if (auto fail = alg.check_jacobi()) {
    std::ostringstream os;
    os << "full algebra fails Jacobi at (" << fail->i << "," << fail->j << ","
       << fail->k << ")";
    throw std::logic_error(os.str());
  }

  FullAlgebra f{d, t.neg.roots, t.pos.roots, std::move(alg), r, {}};
  for (std::size_t i = 0; i < n; ++i) {
    f.root_idx_[f.neg_roots[i].m] = f.neg_index(i);
    f.root_idx_[f.pos_roots[i].m] = f.pos_index(i);
  }
  return f;
}

}  // namespace

std::size_t FullAlgebra::root_index(const std::vector<int>& m) const {
  auto it = root_idx_.find(m);
  if (it == root_idx_.end())
    throw std::invalid_argument("root_index: not a root of this diagram");
  return it->second;
}

const FullAlgebra& build_full(const DiagramId& d) {
  static std::mutex mu;
  static std::map<DiagramId, FullAlgebra> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, make_full(d)).first;
  return it->second;
}

// ---------------------------------------------------------------------------
// Parabolic regrading of the full algebra

std::map<int, std::vector<std::size_t>> graded_parts(const FullAlgebra& f,
                                                     const ParabolicId& p) {
  if (p.diagram != f.diagram)
    throw std::invalid_argument("graded_parts: diagram mismatch");
  std::map<int, std::vector<std::size_t>> parts;
  const std::size_t n = f.n_roots();
  for (std::size_t i = 0; i < n; ++i)
    parts[grading_weight(f.neg_roots[i].m, p.crossing)].push_back(
        f.neg_index(i));
  for (std::size_t j = 0; j < f.rank_; ++j)
    parts[0].push_back(f.cartan_index(j));
  for (std::size_t i = 0; i < n; ++i)
    parts[grading_weight(f.pos_roots[i].m, p.crossing)].push_back(
        f.pos_index(i));
  for (auto& [k, v] : parts) {
    (void)k;
    std::sort(v.begin(), v.end());
  }

  const int mu = depth(p);
  auto dim_of = [&](int k) {
    SuperDim dd;
    auto it = parts.find(k);
    if (it != parts.end())
      for (std::size_t idx : it->second)
        (f.alg.element(idx).parity == Even ? dd.even : dd.odd)++;
    return dd;
  };
  if (parts.begin()->first != -mu || parts.rbegin()->first != mu)
    throw std::logic_error(
        "graded_parts: weight range is not [-depth, depth]");
  for (int k = 1; k <= mu; ++k)
    if (!(dim_of(k) == dim_of(-k)))
      throw std::logic_error("graded_parts: dim g_k != dim g_{-k}");
  return parts;
}

std::vector<LeviMap> levi_action(const FullAlgebra& f, const ParabolicId& p) {
  auto parts = graded_parts(f, p);
  const auto& zero = parts.at(0);

  // g_{-1} columns in symbol basis order: even first, then label.
  std::vector<RootVector> m1;
  for (const auto& r : f.neg_roots)
    if (grading_weight(r.m, p.crossing) == -1) m1.push_back(r);
  sort_symbol_roots(m1, p.crossing);
  SuperDim dims;
  for (const auto& r : m1) (r.parity == Even ? dims.even : dims.odd)++;

  std::map<std::size_t, std::size_t> row_of;
  for (std::size_t c = 0; c < m1.size(); ++c)
    row_of[f.root_index(m1[c].m)] = c;

  std::vector<LeviMap> out;
  out.reserve(zero.size());
  for (std::size_t z : zero) {
    LeviMap lm;
    lm.label = f.alg.element(z).label;
    lm.parity = f.alg.element(z).parity;
    lm.map = GradedMap(dims, dims);
    for (std::size_t c = 0; c < m1.size(); ++c) {
      for (const auto& [k, v] :
           f.alg.bracket_basis(z, f.root_index(m1[c].m))) {
        auto it = row_of.find(k);
        if (it == row_of.end())
          throw std::logic_error("levi_action: image leaves g_{-1}");
        lm.map.mat.at(it->second, c) = v;
      }
    }
    out.push_back(std::move(lm));
  }
  return out;
}

CrossCheckReport cross_check_symbol(const FullAlgebra& f,
                                    const SymbolAlgebra& s,
                                    const ParabolicId& p) {
  if (p.diagram != f.diagram || !(p == s.parabolic))
    throw std::invalid_argument("cross_check_symbol: case mismatch");
  auto parts = graded_parts(f, p);

  std::map<int, std::vector<std::size_t>> sblocks;
  for (std::size_t i = 0; i < s.alg.size(); ++i)
    sblocks[s.alg.element(i).degree].push_back(i);

  auto dim_from = [](const GradedLieSuperalgebra& a,
                     const std::vector<std::size_t>& idx) {
    SuperDim dd;
    for (std::size_t i : idx)
      (a.element(i).parity == Even ? dd.even : dd.odd)++;
    return dd;
  };

  const int mu = depth(p);
  for (int k = 1; k <= mu; ++k) {
    SuperDim df = dim_from(f.alg, parts.at(-k));
    auto it = sblocks.find(-k);
    SuperDim ds =
        (it == sblocks.end()) ? SuperDim{} : dim_from(s.alg, it->second);
    if (!(df == ds))
      return {false, "graded dims differ at degree " + std::to_string(-k) +
                         ": full " + df.str() + " vs symbol " + ds.str()};
  }

  // Rank of the bracket map g_i (x) g_j -> g_{i+j} over all ordered pairs.
  auto bracket_rank = [](const GradedLieSuperalgebra& a,
                         const std::vector<std::size_t>& bi,
                         const std::vector<std::size_t>& bj,
                         const std::vector<std::size_t>& bt) {
    std::map<std::size_t, std::size_t> col;
    for (std::size_t c = 0; c < bt.size(); ++c) col[bt[c]] = c;
    QMatrix m(bi.size() * bj.size(), bt.size());
    std::size_t row = 0;
    for (std::size_t x : bi)
      for (std::size_t y : bj) {
        for (const auto& [k, v] : a.bracket_basis(x, y))
          m.at(row, col.at(k)) = v;
        ++row;
      }
    return m.rank();
  };

  for (int i = -1; i >= -mu; --i)
    for (int j = i; j >= -mu - i; --j) {
      std::size_t rf =
          bracket_rank(f.alg, parts.at(i), parts.at(j), parts.at(i + j));
      std::size_t rs = bracket_rank(s.alg, sblocks.at(i), sblocks.at(j),
                                    sblocks.at(i + j));
      if (rf != rs)
        return {false, "bracket rank differs at degrees (" +
                           std::to_string(i) + "," + std::to_string(j) +
                           "): full " + std::to_string(rf) + " vs symbol " +
                           std::to_string(rs)};
    }
  return {true, ""};
}

}  // namespace g3f4
