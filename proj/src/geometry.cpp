#include <g3f4/geometry.hpp>

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace g3f4 {

namespace {

// Indices of the degree `deg` basis elements in basis order (the canonical
// symbol order keeps each degree block contiguous with even elements first).
std::vector<std::size_t> block_indices(const GradedLieSuperalgebra& a,
                                       int deg) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.element(i).degree == deg) out.push_back(i);
  return out;
}

SuperDim dims_of(const GradedLieSuperalgebra& a,
                 const std::vector<std::size_t>& idx) {
  SuperDim d;
  for (std::size_t i : idx) (a.element(i).parity == Even ? d.even : d.odd)++;
  return d;
}

// Exact square root of a non-negative rational, if it is rational.
std::optional<Scalar> rational_sqrt(const Scalar& s) {
  if (s.sign() < 0) return std::nullopt;
  const mpz_class& n = s.num();
  const mpz_class& d = s.den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) ||
      !mpz_perfect_square_p(d.get_mpz_t()))
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return Scalar(mpq_class(mpq_class(rn) / mpq_class(rd)));
}

// Rational solutions t of the vector equation A + 2Bt + Ct^2 = 0.  Empty
// result also covers the identically-zero system (callers handle t-free
// solutions through the single-vector path).
std::vector<Scalar> quadratic_roots(const Vec& A, const Vec& B, const Vec& C) {
  std::size_t pivot = A.size();
  for (std::size_t k = 0; k < A.size(); ++k)
    if (!B[k].is_zero() || !C[k].is_zero()) {
      pivot = k;
      break;
    }
  std::vector<Scalar> candidates;
  if (pivot == A.size()) return candidates;
  if (C[pivot].is_zero()) {
    candidates.push_back(Scalar(0) - A[pivot] / (Scalar(2) * B[pivot]));
  } else {
    Scalar disc = B[pivot] * B[pivot] - A[pivot] * C[pivot];
    auto r = rational_sqrt(disc);
    if (!r) return candidates;
    candidates.push_back(((Scalar(0) - B[pivot]) + *r) / C[pivot]);
    if (!r->is_zero())
      candidates.push_back(((Scalar(0) - B[pivot]) - *r) / C[pivot]);
  }
  std::vector<Scalar> roots;
  for (const Scalar& t : candidates) {
    bool ok = true;
    for (std::size_t k = 0; k < A.size() && ok; ++k)
      ok = (A[k] + Scalar(2) * B[k] * t + C[k] * t * t).is_zero();
    if (ok) roots.push_back(t);
  }
  return roots;
}

// Visits all size-k subsets of {0..n-1} in lexicographic order until f
// returns true; reports whether any call did.
template <class F>
bool for_each_subset(std::size_t n, std::size_t k, F f) {
  if (k > n) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (f(idx)) return true;
    if (k == 0) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Dense coefficient vector over the whole algebra from coefficients on a
// block (block position -> global index).
Vec embed(const GradedLieSuperalgebra& a, const std::vector<std::size_t>& blk,
          const Vec& coords) {
  Vec x(a.size());
  for (std::size_t p = 0; p < coords.size(); ++p) x[blk[p]] = coords[p];
  return x;
}

std::string combo_label(const GradedLieSuperalgebra& a,
                        const std::vector<std::size_t>& blk,
                        const Vec& coords) {
  std::string s;
  for (std::size_t p = 0; p < coords.size(); ++p) {
    if (coords[p].is_zero()) continue;
    if (!s.empty()) s += " + ";
    if (!coords[p].is_one()) s += coords[p].str() + "*";
    s += a.element(blk[p]).label;
  }
  return s.empty() ? "0" : s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Growth vectors

SuperDim GrowthVector::total() const {
  SuperDim t;
  for (const auto& d : levels) t += d;
  return t;
}

std::string GrowthVector::str() const {
  std::string s;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i) s += ",";
    s += levels[i].str();
  }
  return s;
}

GrowthVector growth_vector(const SymbolAlgebra& m) {
  GrowthVector g;
  auto dims = m.alg.graded_dims();
  for (int t = 1; dims.count(-t); ++t) g.levels.push_back(dims.at(-t));
  return g;
}

// ---------------------------------------------------------------------------
// Null-cone tangent spans

NullSpanReport null_span(const SymbolAlgebra& m) {
  const auto& a = m.alg;
  NullSpanReport rep;
  rep.parabolic = m.parabolic;
  auto blk = block_indices(a, -1);
  rep.g1 = dims_of(a, blk);

  std::vector<std::size_t> odd;  // global indices of the odd degree -1 roots
  for (std::size_t i : blk)
    if (a.element(i).parity == Odd) odd.push_back(i);
  const std::size_t no = odd.size();

  std::vector<Vec> rows;  // independent null vectors over odd coordinates
  auto try_add = [&](const Vec& coords) {
    auto probe = rows;
    probe.push_back(coords);
    if (QMatrix::from_rows(probe).rank() != rows.size() + 1) return;
    Vec x = embed(a, odd, coords);
    if (!vec_is_zero(a.bracket(x, x)))
      throw std::logic_error("null_span: witness fails [v,v] = 0");
    rows.push_back(coords);
    rep.witnesses.push_back(combo_label(a, odd, coords));
  };

  // Single null root vectors: e is null exactly when its table diagonal is
  // absent (the doubled root is not a root).
  std::vector<bool> is_null(no, false);
  for (std::size_t i = 0; i < no; ++i) {
    if (!a.bracket_basis(odd[i], odd[i]).empty()) continue;
    is_null[i] = true;
    Vec coords(no);
    coords[i] = Scalar(1);
    try_add(coords);
  }

  // Three-term combinations e_d + e_a + t e_b: d non-null with diagonal on a
  // single target line, (a, b) a null pair whose bracket hits the same line,
  // both commuting with d.  Then t = -k_d / (2 k_ab) is rational and exact.
  for (std::size_t d = 0; d < no; ++d) {
    if (is_null[d]) continue;
    SparseVec qdd = a.bracket_basis(odd[d], odd[d]);
    if (qdd.size() != 1) continue;
    for (std::size_t p = 0; p < no; ++p) {
      if (!is_null[p] || p == d) continue;
      for (std::size_t q = p + 1; q < no; ++q) {
        if (!is_null[q] || q == d) continue;
        SparseVec qpq = a.bracket_basis(odd[p], odd[q]);
        if (qpq.size() != 1 || qpq[0].first != qdd[0].first) continue;
        if (!a.bracket_basis(odd[d], odd[p]).empty()) continue;
        if (!a.bracket_basis(odd[d], odd[q]).empty()) continue;
        Vec coords(no);
        coords[d] = Scalar(1);
        coords[p] = Scalar(1);
        coords[q] = Scalar(0) - qdd[0].second / (Scalar(2) * qpq[0].second);
        try_add(coords);
      }
    }
  }

  rep.span = SuperDim{rep.g1.even, static_cast<long>(rows.size())};
  rep.full = rep.span == rep.g1;
  return rep;
}

std::vector<SpecialSpan> special_tangent_spans(Algebra a) {
  if (a == Algebra::F4) return {};
  auto P = [](int xi, std::initializer_list<int> nodes) {
    return ParabolicId{DiagramId{Algebra::G3, xi}, Crossing(nodes)};
  };
  return {
      {P(2, {1}), SuperDim{2, 1}},
      {P(3, {1, 3}), SuperDim{2, 1}},
      {P(4, {2, 3}), SuperDim{0, 2}},
      {P(4, {1, 2, 3}), SuperDim{1, 1}},
  };
}

SpecialCasesReport special_cases_check(Algebra a) {
  SpecialCasesReport out;
  auto expected = special_tangent_spans(a);
  for (const ParabolicId& p : canonical_parabolics(a)) {
    NullSpanReport r = null_span(build_symbol(p));
    auto it = std::find_if(expected.begin(), expected.end(),
                           [&](const SpecialSpan& s) { return s.parabolic == p; });
    if (r.full != (it == expected.end())) {
      out.detail = full_case_name(p) + ": tangent span " + r.span.str() +
                   " of " + r.g1.str() +
                   (r.full ? " is unexpectedly full" : " is unexpectedly partial");
      out.reports.push_back(std::move(r));
      return out;
    }
    if (it != expected.end() && !(r.span == it->span)) {
      out.detail = full_case_name(p) + ": tangent span " + r.span.str() +
                   " differs from the expected " + it->span.str();
      out.reports.push_back(std::move(r));
      return out;
    }
    out.reports.push_back(std::move(r));
  }
  out.pass = true;
  return out;
}

// ---------------------------------------------------------------------------
// Graded-abelian integral witnesses

namespace {

struct WitnessSearch {
  const GradedLieSuperalgebra& a;
  std::vector<std::size_t> blk;             // degree -1 global indices
  std::vector<std::size_t> evens, odds;     // positions within blk

  explicit WitnessSearch(const GradedLieSuperalgebra& alg) : a(alg) {
    blk = block_indices(a, -1);
    for (std::size_t p = 0; p < blk.size(); ++p)
      (a.element(blk[p]).parity == Even ? evens : odds).push_back(p);
  }

  bool roots_commute(const std::vector<std::size_t>& pos) const {
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const auto& bi = a.element(blk[pos[i]]);
      for (std::size_t j = i; j < pos.size(); ++j) {
        if (i == j && bi.parity == Even) continue;
        if (!a.bracket_basis(blk[pos[i]], blk[pos[j]]).empty()) return false;
      }
    }
    return true;
  }

  Vec unit(std::size_t pos) const {
    Vec v(blk.size());
    v[pos] = Scalar(1);
    return v;
  }

  // Bracket of two block-coordinate vectors, dense over the whole algebra.
  Vec bra(const Vec& u, const Vec& v) const {
    return a.bracket(embed(a, blk, u), embed(a, blk, v));
  }

  bool graded_abelian(const std::vector<Vec>& basis,
                      const std::vector<Parity>& par) const {
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i; j < basis.size(); ++j) {
        if (i == j && par[i] == Even) continue;
        if (!vec_is_zero(bra(basis[i], basis[j]))) return false;
      }
    return true;
  }
};

// Tries to extend a graded-abelian anchor of unit root vectors by one vector
// u of the given parity supported on `supp` (disjoint from the anchor): the
// commutation conditions [u, anchor] = 0 are linear in the coefficients and
// solved by nullspace; the odd nullity [u,u] = 0 is solved exactly on single
// nullspace vectors and on rational lines through pairs of them.  On success
// hands the full basis to `accept` and returns true.
template <class Accept>
bool try_extend(const WitnessSearch& ws, const std::vector<std::size_t>& anchor,
                const std::vector<std::size_t>& supp, bool odd_extra,
                Accept accept) {
  std::vector<Vec> eqs;
  for (std::size_t r : anchor) {
    std::vector<Vec> brs;
    for (std::size_t j : supp) brs.push_back(ws.bra(ws.unit(j), ws.unit(r)));
    for (std::size_t k = 0; k < ws.a.size(); ++k) {
      Vec row(supp.size());
      bool nz = false;
      for (std::size_t j = 0; j < supp.size(); ++j) {
        row[j] = brs[j][k];
        nz = nz || !row[j].is_zero();
      }
      if (nz) eqs.push_back(std::move(row));
    }
  }
  std::vector<Vec> null;
  if (eqs.empty()) {
    for (std::size_t j = 0; j < supp.size(); ++j) {
      Vec v(supp.size());
      v[j] = Scalar(1);
      null.push_back(std::move(v));
    }
  } else {
    null = QMatrix::from_rows(eqs).nullspace();
  }
  if (null.empty()) return false;

  auto coords_of = [&](const Vec& n) {
    Vec v(ws.blk.size());
    for (std::size_t j = 0; j < supp.size(); ++j) v[supp[j]] = n[j];
    return v;
  };
  auto deliver = [&](const Vec& extra) {
    std::vector<Vec> basis;
    std::vector<Parity> par;
    for (std::size_t p : anchor) {
      basis.push_back(ws.unit(p));
      par.push_back(ws.a.element(ws.blk[p]).parity);
    }
    basis.push_back(extra);
    par.push_back(odd_extra ? Odd : Even);
    accept(basis, par);
    return true;
  };

  if (!odd_extra) return deliver(coords_of(null.front()));

  std::vector<Vec> cand;
  for (const Vec& n : null) cand.push_back(coords_of(n));
  for (const Vec& u : cand)
    if (vec_is_zero(ws.bra(u, u))) return deliver(u);
  for (std::size_t i = 0; i < cand.size(); ++i)
    for (std::size_t j = i + 1; j < cand.size(); ++j) {
      Vec A = ws.bra(cand[i], cand[i]);
      Vec B = ws.bra(cand[i], cand[j]);
      Vec C = ws.bra(cand[j], cand[j]);
      for (const Scalar& t : quadratic_roots(A, B, C))
        return deliver(vec_add(cand[i], vec_scale(t, cand[j])));
    }
  return false;
}

}  // namespace

IntegralWitness integral_witness(const SymbolAlgebra& m, SuperDim target) {
  WitnessSearch ws(m.alg);
  IntegralWitness out;
  out.target = target;
  const std::size_t ne = static_cast<std::size_t>(target.even);
  const std::size_t no = static_cast<std::size_t>(target.odd);
  if (ne > ws.evens.size() || no > ws.odds.size()) return out;

  auto finish = [&](const std::vector<Vec>& basis,
                    const std::vector<Parity>& par) {
    if (!ws.graded_abelian(basis, par))
      throw std::logic_error("integral_witness: candidate fails re-verification");
    out.found = true;
    out.basis = basis;
    for (const Vec& v : basis)
      out.labels.push_back(combo_label(m.alg, ws.blk, v));
  };

  // Stage 1: subsets of pure root vectors.
  bool found = for_each_subset(
      ws.evens.size(), ne, [&](const std::vector<std::size_t>& ei) {
        std::vector<std::size_t> pos;
        for (std::size_t i : ei) pos.push_back(ws.evens[i]);
        if (!ws.roots_commute(pos)) return false;
        return for_each_subset(
            ws.odds.size(), no, [&](const std::vector<std::size_t>& oi) {
              std::vector<std::size_t> all = pos;
              for (std::size_t i : oi) all.push_back(ws.odds[i]);
              if (!ws.roots_commute(all)) return false;
              std::vector<Vec> basis;
              std::vector<Parity> par;
              for (std::size_t p : all) {
                basis.push_back(ws.unit(p));
                par.push_back(m.alg.element(ws.blk[p]).parity);
              }
              finish(basis, par);
              return true;
            });
      });
  if (found) return out;

  // Stage 2: a graded-abelian root anchor of one element fewer, extended by
  // one vector supported on at most three other roots of the missing parity,
  // with the commutation (linear) and odd nullity (quadratic) conditions
  // solved exactly.
  for (int drop_odd = 0; drop_odd < 2 && !out.found; ++drop_odd) {
    const bool odd_extra = drop_odd == 1;
    if ((odd_extra ? no : ne) == 0) continue;
    const std::size_t ae = ne - (odd_extra ? 0 : 1);
    const std::size_t ao = no - (odd_extra ? 1 : 0);
    const auto& pool = odd_extra ? ws.odds : ws.evens;

    for_each_subset(ws.evens.size(), ae, [&](const std::vector<std::size_t>& ei) {
      std::vector<std::size_t> pos;
      for (std::size_t i : ei) pos.push_back(ws.evens[i]);
      if (!ws.roots_commute(pos)) return false;
      return for_each_subset(
          ws.odds.size(), ao, [&](const std::vector<std::size_t>& oi) {
            std::vector<std::size_t> anchor = pos;
            for (std::size_t i : oi) anchor.push_back(ws.odds[i]);
            if (!ws.roots_commute(anchor)) return false;

            std::vector<std::size_t> rest;
            for (std::size_t p : pool)
              if (std::find(anchor.begin(), anchor.end(), p) == anchor.end())
                rest.push_back(p);

            for (std::size_t sz = 1; sz <= 3 && sz <= rest.size(); ++sz) {
              bool hit = for_each_subset(
                  rest.size(), sz, [&](const std::vector<std::size_t>& si) {
                    std::vector<std::size_t> supp;
                    for (std::size_t i : si) supp.push_back(rest[i]);
                    return try_extend(ws, anchor, supp, odd_extra, finish);
                  });
              if (hit) return true;
            }
            return false;
          });
    });
  }
  return out;
}

std::vector<IntegralTargets> maximal_integral_targets(Algebra a) {
  auto P = [a](int xi, std::initializer_list<int> nodes) {
    return ParabolicId{DiagramId{a, xi}, Crossing(nodes)};
  };
  std::vector<IntegralTargets> rows;
  if (a == Algebra::G3) {
    rows = {
        {P(1, {1}), {SuperDim{0, 3}}},
        {P(1, {2}), {SuperDim{1, 1}, SuperDim{0, 2}}},
        {P(1, {3}), {SuperDim{2, 1}}},
        {P(2, {1}), {SuperDim{1, 1}}},
        {P(3, {1}), {SuperDim{2, 2}}},
        {P(4, {2}), {SuperDim{1, 2}}},
    };
  } else {
    rows = {
        {P(1, {1}), {SuperDim{0, 4}}},
        {P(1, {2}), {SuperDim{1, 1}, SuperDim{0, 3}}},
        {P(1, {3}), {SuperDim{3, 2}}},
        {P(1, {4}), {SuperDim{6, 4}}},
        {P(2, {1}), {SuperDim{1, 3}, SuperDim{2, 2}}},
        {P(3, {3}), {SuperDim{3, 2}}},
        {P(4, {3}), {SuperDim{2, 2}}},
        {P(5, {2}), {SuperDim{0, 4}}},
        {P(6, {2}), {SuperDim{0, 3}}},
    };
  }
  for (auto& r : rows) r.parabolic = canonical_representative(r.parabolic);
  return rows;
}

// ---------------------------------------------------------------------------
// Case adjacency and equivalence classes

std::vector<std::pair<ParabolicId, ParabolicId>> adjacency_graph(Algebra a) {
  std::map<DiagramId, std::vector<ParabolicId>> by_diagram;
  for (const ParabolicId& p : all_parabolics(a))
    by_diagram[p.diagram].push_back(p);

  std::set<std::pair<ParabolicId, ParabolicId>> edges;
  for (const auto& [d, ps] : by_diagram) {
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        std::vector<int> diff;
        std::set_symmetric_difference(
            ps[i].crossing.begin(), ps[i].crossing.end(),
            ps[j].crossing.begin(), ps[j].crossing.end(),
            std::back_inserter(diff));
        if (diff.size() != 1) continue;
        ParabolicId c1 = canonical_representative(ps[i]);
        ParabolicId c2 = canonical_representative(ps[j]);
        if (c1 == c2) continue;
        if (c2 < c1) std::swap(c1, c2);
        edges.insert({c1, c2});
      }
  }
  return {edges.begin(), edges.end()};
}

std::string render_graph(Algebra a) {
  auto edges = adjacency_graph(a);
  std::ostringstream os;
  os << "# " << algebra_name(a)
     << " case adjacency: " << canonical_parabolics(a).size() << " nodes, "
     << edges.size() << " edges\n";
  for (const auto& [p, q] : edges)
    os << case_name(p) << " " << case_name(q) << "\n";
  return os.str();
}

std::map<std::pair<int, int>, std::size_t> bracket_rank_table(
    const SymbolAlgebra& m) {
  const auto& a = m.alg;
  std::map<int, std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < a.size(); ++i)
    blocks[a.element(i).degree].push_back(i);
  int mu = -blocks.begin()->first;

  std::map<std::pair<int, int>, std::size_t> out;
  for (int i = -1; i >= -mu; --i)
    for (int j = i; j >= -mu - i; --j) {
      const auto& bi = blocks.at(i);
      const auto& bj = blocks.at(j);
      const auto& bt = blocks.at(i + j);
      std::map<std::size_t, std::size_t> col;
      for (std::size_t c = 0; c < bt.size(); ++c) col[bt[c]] = c;
      QMatrix mat(bi.size() * bj.size(), bt.size());
      std::size_t row = 0;
      for (std::size_t x : bi) {
        for (std::size_t y : bj) {
          for (const auto& [k, v] : a.bracket_basis(x, y))
            mat.at(row, col.at(k)) = v;
          ++row;
        }
      }
      out[{i, j}] = mat.rank();
    }
  return out;
}

EquivalenceReport verify_equivalences(Algebra a) {
  const EquivalenceClasses& cls = equivalence_chains(a);
  for (std::size_t c = 0; c < cls.classes.size(); ++c) {
    const ParabolicId& rep = cls.representatives[c];
    SymbolAlgebra sr = build_symbol(rep);
    GrowthVector gr = growth_vector(sr);
    auto rr = bracket_rank_table(sr);
    for (const ParabolicId& p : cls.classes[c]) {
      if (p == rep) continue;
      SymbolAlgebra sp = build_symbol(p);
      if (!(growth_vector(sp) == gr))
        return {false, full_case_name(p) + ": growth " +
                           growth_vector(sp).str() + " differs from " +
                           full_case_name(rep) + " growth " + gr.str()};
      if (bracket_rank_table(sp) != rr)
        return {false, full_case_name(p) + ": bracket ranks differ from " +
                           full_case_name(rep)};
    }
  }
  return {true, ""};
}

// ---------------------------------------------------------------------------
// Atlas rendering

std::string render_atlas(Algebra a) {
  auto cases = canonical_parabolics(a);
  std::ostringstream os;
  os << "# " << algebra_name(a) << " atlas: " << cases.size()
     << " canonical parabolic cases\n";
  for (const ParabolicId& p : cases) {
    GrowthVector g = growth_vector(build_symbol(p));
    os << case_name(p) << " dimM=" << g.total().str()
       << " depth=" << g.levels.size() << " growth=" << g.str() << "\n";
  }
  return os.str();
}

}  // namespace g3f4
