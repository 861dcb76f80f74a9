#include <g3f4/roots.hpp>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace g3f4 {

namespace {

Scalar half() { return Scalar(1, 2); }

AmbientWeight make_weight(Algebra a, Scalar d, Scalar e1, Scalar e2,
                          Scalar e3) {
  return AmbientWeight(a, {d, e1, e2, e3});
}

}  // namespace

std::string algebra_name(Algebra a) { return a == Algebra::G3 ? "g3" : "f4"; }

Algebra algebra_from_name(const std::string& s) {
  if (s == "g3" || s == "G3") return Algebra::G3;
  if (s == "f4" || s == "F4") return Algebra::F4;
  throw std::invalid_argument("unknown algebra name: " + s);
}

int rank(Algebra a) { return a == Algebra::G3 ? 3 : 4; }

int num_diagrams(Algebra a) { return a == Algebra::G3 ? 4 : 6; }

// ---------------------------------------------------------------------------
// AmbientWeight

AmbientWeight::AmbientWeight(Algebra a, std::array<Scalar, 4> coeffs)
    : alg(a), c(std::move(coeffs)) {
  if (alg == Algebra::G3 && !c[3].is_zero()) {
    // eps3 = -eps1 - eps2
    c[1] -= c[3];
    c[2] -= c[3];
    c[3] = Scalar(0);
  }
}

bool AmbientWeight::is_zero() const {
  return c[0].is_zero() && c[1].is_zero() && c[2].is_zero() && c[3].is_zero();
}

AmbientWeight AmbientWeight::operator+(const AmbientWeight& o) const {
  if (alg != o.alg) throw std::invalid_argument("mixed-algebra weights");
  return AmbientWeight(alg,
                       {c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2],
                        c[3] + o.c[3]});
}

AmbientWeight AmbientWeight::operator-(const AmbientWeight& o) const {
  return *this + (-o);
}

AmbientWeight AmbientWeight::operator-() const {
  return AmbientWeight(alg, {-c[0], -c[1], -c[2], -c[3]});
}

AmbientWeight AmbientWeight::operator*(const Scalar& s) const {
  return AmbientWeight(alg, {c[0] * s, c[1] * s, c[2] * s, c[3] * s});
}

bool AmbientWeight::operator==(const AmbientWeight& o) const {
  return alg == o.alg && c[0] == o.c[0] && c[1] == o.c[1] && c[2] == o.c[2] &&
         c[3] == o.c[3];
}

bool AmbientWeight::operator<(const AmbientWeight& o) const {
  if (alg != o.alg) return alg < o.alg;
  for (int i = 0; i < 4; ++i)
    if (c[i] != o.c[i]) return c[i] < o.c[i];
  return false;
}

std::string AmbientWeight::str() const {
  static const char* names[4] = {"d", "e1", "e2", "e3"};
  // Common denominator (only 1 or 2 occurs for these root systems, but the
  // code is generic).
  mpz_class den = 1;
  for (const auto& x : c) den = lcm(den, x.den());
  std::ostringstream body;
  bool wrote = false;
  for (int i = 0; i < 4; ++i) {
    Scalar v = c[i] * Scalar(mpq_class(den));
    if (v.is_zero()) continue;
    if (wrote && v.sign() > 0) body << "+";
    if (v == Scalar(-1))
      body << "-";
    else if (v != Scalar(1))
      body << v.str();
    body << names[i];
    wrote = true;
  }
  if (!wrote) return "0";
  if (den == 1) return body.str();
  return "(" + body.str() + ")/" + den.get_str();
}

Scalar killing_pairing(const AmbientWeight& a, const AmbientWeight& b) {
  if (a.alg != b.alg)
    throw std::invalid_argument("killing_pairing: mixed algebras");
  if (a.alg == Algebra::F4) {
    // <delta,delta> = -3, <eps_i,eps_j> = delta_ij, cross terms 0.
    Scalar r = a.c[0] * b.c[0] * Scalar(-3);
    for (int i = 1; i <= 3; ++i) r += a.c[i] * b.c[i];
    return r;
  }
  // G3 (inputs are canonicalized: c[3] == 0):
  // <delta,delta> = 2, <eps_i,eps_j> = 1 - 3*delta_ij, cross terms 0.
  Scalar r = a.c[0] * b.c[0] * Scalar(2);
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      r += a.c[i] * b.c[j] * Scalar(i == j ? -2 : 1);
  return r;
}

// ---------------------------------------------------------------------------
// Root sets in ambient coordinates

namespace {

const std::set<AmbientWeight>& even_root_set(Algebra a) {
  static std::map<Algebra, std::set<AmbientWeight>> cache;
  auto it = cache.find(a);
  if (it != cache.end()) return it->second;
  std::set<AmbientWeight> s;
  Scalar z(0), one(1);
  if (a == Algebra::G3) {
    // {±2delta, ±eps_i, eps_i - eps_j (i != j)}
    for (int sg : {1, -1})
      s.insert(make_weight(a, Scalar(2 * sg), z, z, z));
    std::array<AmbientWeight, 3> eps = {
        make_weight(a, z, one, z, z), make_weight(a, z, z, one, z),
        make_weight(a, z, z, z, one)};
    for (int i = 0; i < 3; ++i) {
      s.insert(eps[i]);
      s.insert(-eps[i]);
      for (int j = 0; j < 3; ++j)
        if (i != j) s.insert(eps[i] - eps[j]);
    }
  } else {
    // {±delta, ±eps_i, ±eps_i ± eps_j (i < j)}
    for (int sg : {1, -1}) s.insert(make_weight(a, Scalar(sg), z, z, z));
    std::array<AmbientWeight, 3> eps = {
        make_weight(a, z, one, z, z), make_weight(a, z, z, one, z),
        make_weight(a, z, z, z, one)};
    for (int i = 0; i < 3; ++i) {
      s.insert(eps[i]);
      s.insert(-eps[i]);
      for (int j = i + 1; j < 3; ++j)
        for (int si : {1, -1})
          for (int sj : {1, -1})
            s.insert(eps[i] * Scalar(si) + eps[j] * Scalar(sj));
    }
  }
  return cache.emplace(a, std::move(s)).first->second;
}

const std::set<AmbientWeight>& odd_root_set(Algebra a) {
  static std::map<Algebra, std::set<AmbientWeight>> cache;
  auto it = cache.find(a);
  if (it != cache.end()) return it->second;
  std::set<AmbientWeight> s;
  Scalar z(0), one(1);
  if (a == Algebra::G3) {
    // {±delta, ±delta ± eps_i}
    for (int sd : {1, -1}) {
      AmbientWeight d = make_weight(a, Scalar(sd), z, z, z);
      s.insert(d);
      std::array<AmbientWeight, 3> eps = {
          make_weight(a, z, one, z, z), make_weight(a, z, z, one, z),
          make_weight(a, z, z, z, one)};
      for (int i = 0; i < 3; ++i)
        for (int si : {1, -1}) s.insert(d + eps[i] * Scalar(si));
    }
  } else {
    // {(±delta ± eps1 ± eps2 ± eps3)/2}
    for (int sd : {1, -1})
      for (int s1 : {1, -1})
        for (int s2 : {1, -1})
          for (int s3 : {1, -1})
            s.insert(make_weight(a, half() * Scalar(sd), half() * Scalar(s1),
                                 half() * Scalar(s2), half() * Scalar(s3)));
  }
  return cache.emplace(a, std::move(s)).first->second;
}

}  // namespace

bool is_even_root(Algebra a, const AmbientWeight& w) {
  return even_root_set(a).count(w) > 0;
}

bool is_odd_root(Algebra a, const AmbientWeight& w) {
  return odd_root_set(a).count(w) > 0;
}

bool is_root(Algebra a, const AmbientWeight& w) {
  return is_even_root(a, w) || is_odd_root(a, w);
}

Parity root_parity(Algebra a, const AmbientWeight& w) {
  if (is_even_root(a, w)) return Parity::Even;
  if (is_odd_root(a, w)) return Parity::Odd;
  throw std::invalid_argument("root_parity: not a root: " + w.str());
}

// ---------------------------------------------------------------------------
// Diagrams

std::string diagram_name(const DiagramId& d) {
  static const char* names[] = {"I", "II", "III", "IV", "V", "VI"};
  if (d.xi < 1 || d.xi > num_diagrams(d.alg))
    throw std::invalid_argument("bad diagram index");
  return names[d.xi - 1];
}

DiagramId diagram_from_name(Algebra a, const std::string& s) {
  static const char* names[] = {"I", "II", "III", "IV", "V", "VI"};
  for (int i = 0; i < num_diagrams(a); ++i)
    if (s == names[i]) return DiagramId{a, i + 1};
  throw std::invalid_argument("unknown diagram name for " + algebra_name(a) +
                              ": " + s);
}

std::vector<DiagramId> all_diagrams(Algebra a) {
  std::vector<DiagramId> v;
  for (int i = 1; i <= num_diagrams(a); ++i) v.push_back(DiagramId{a, i});
  return v;
}

std::vector<AmbientWeight> simple_system(const DiagramId& d) {
  Scalar z(0), one(1), m1(-1), h = half(), mh = -half();
  if (d.alg == Algebra::G3) {
    switch (d.xi) {
      case 1:  // I: delta-eps1-eps2, eps1, eps2-eps1
        return {make_weight(d.alg, one, m1, m1, z),
                make_weight(d.alg, z, one, z, z),
                make_weight(d.alg, z, m1, one, z)};
      case 2:  // II: eps1+eps2-delta, delta-eps2, eps2-eps1
        return {make_weight(d.alg, m1, one, one, z),
                make_weight(d.alg, one, z, m1, z),
                make_weight(d.alg, z, m1, one, z)};
      case 3:  // III: eps2-delta, delta-eps1, eps1
        return {make_weight(d.alg, m1, z, one, z),
                make_weight(d.alg, one, m1, z, z),
                make_weight(d.alg, z, one, z, z)};
      case 4:  // IV: eps2-eps1, eps1-delta, delta
        return {make_weight(d.alg, z, m1, one, z),
                make_weight(d.alg, m1, one, z, z),
                make_weight(d.alg, one, z, z, z)};
    }
  } else {
    switch (d.xi) {
      case 1:  // I: (d-e1-e2-e3)/2, e3, e2-e3, e1-e2
        return {make_weight(d.alg, h, mh, mh, mh),
                make_weight(d.alg, z, z, z, one),
                make_weight(d.alg, z, z, one, m1),
                make_weight(d.alg, z, one, m1, z)};
      case 2:  // II: (-d+e1+e2+e3)/2, (d-e1-e2+e3)/2, e2-e3, e1-e2
        return {make_weight(d.alg, mh, h, h, h),
                make_weight(d.alg, h, mh, mh, h),
                make_weight(d.alg, z, z, one, m1),
                make_weight(d.alg, z, one, m1, z)};
      case 3:  // III: e1-e2, (d-e1+e2-e3)/2, (-d+e1+e2-e3)/2, e3
        return {make_weight(d.alg, z, one, m1, z),
                make_weight(d.alg, h, mh, h, mh),
                make_weight(d.alg, mh, h, h, mh),
                make_weight(d.alg, z, z, z, one)};
      case 4:  // IV: (d+e1-e2-e3)/2, (d-e1+e2+e3)/2, (-d+e1-e2+e3)/2, e2-e3
        return {make_weight(d.alg, h, h, mh, mh),
                make_weight(d.alg, h, mh, h, h),
                make_weight(d.alg, mh, h, mh, h),
                make_weight(d.alg, z, z, one, m1)};
      case 5:  // V: d, (-d+e1-e2-e3)/2, e3, e2-e3
        return {make_weight(d.alg, one, z, z, z),
                make_weight(d.alg, mh, h, mh, mh),
                make_weight(d.alg, z, z, z, one),
                make_weight(d.alg, z, z, one, m1)};
      case 6:  // VI: d, (-d-e1+e2+e3)/2, e1-e2, e2-e3
        return {make_weight(d.alg, one, z, z, z),
                make_weight(d.alg, mh, mh, h, h),
                make_weight(d.alg, z, one, m1, z),
                make_weight(d.alg, z, z, one, m1)};
    }
  }
  throw std::invalid_argument("bad diagram index");
}

// ---------------------------------------------------------------------------
// Root enumeration over a simple system

int RootVector::height() const {
  int h = 0;
  for (int x : m) h += x;
  return h;
}

bool RootVector::is_positive() const { return height() > 0; }

std::string RootVector::m_str() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < m.size(); ++i) {
    if (i) os << ",";
    os << m[i];
  }
  os << ")";
  return os.str();
}

namespace {

// Positive roots via bounded search over coefficient vectors (|m_i| <= 4),
// testing ambient membership; verified to biject with the ambient root set.
std::vector<RootVector> positive_roots_impl(const DiagramId& d) {
  const int r = rank(d.alg);
  const auto simples = simple_system(d);
  std::vector<RootVector> found;
  std::vector<int> m(r, 0);
  const int kMax = 4;
  while (true) {
    // advance odometer
    int i = 0;
    while (i < r && m[i] == kMax) m[i++] = 0;
    if (i == r) break;
    ++m[i];
    AmbientWeight w = simples[0] * Scalar(m[0]);
    for (int j = 1; j < r; ++j) w = w + simples[j] * Scalar(m[j]);
    if (!is_root(d.alg, w)) continue;
    found.push_back(RootVector{d, m, root_parity(d.alg, w), w});
  }
  // Verify the bijection with the ambient positive system: together with
  // their negatives these must exhaust the root set exactly.
  size_t total = even_root_set(d.alg).size() + odd_root_set(d.alg).size();
  std::set<AmbientWeight> seen;
  for (const auto& rv : found) {
    if (!seen.insert(rv.ambient).second)
      throw std::logic_error("duplicate root in enumeration");
    if (!seen.insert(-rv.ambient).second)
      throw std::logic_error("root and its negative both positive");
  }
  if (seen.size() != total)
    throw std::logic_error("root enumeration does not exhaust the root set");
  // Canonical order: height ascending, then lexicographic on m.
  std::sort(found.begin(), found.end(),
            [](const RootVector& a, const RootVector& b) {
              int ha = 0, hb = 0;
              for (int x : a.m) ha += x;
              for (int x : b.m) hb += x;
              if (ha != hb) return ha < hb;
              return a.m < b.m;
            });
  return found;
}

const std::vector<RootVector>& positive_roots_cached(const DiagramId& d) {
  static std::map<DiagramId, std::vector<RootVector>> cache;
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  return cache.emplace(d, positive_roots_impl(d)).first->second;
}

}  // namespace

std::vector<RootVector> negative_roots(const DiagramId& d) {
  std::vector<RootVector> out;
  for (const auto& p : positive_roots_cached(d)) {
    std::vector<int> m(p.m);
    for (int& x : m) x = -x;
    out.push_back(RootVector{d, std::move(m), p.parity, -p.ambient});
  }
  // positive order is (height asc, lex asc); for negatives this is already
  // (|height| asc, |m| lex asc) — the canonical symbol basis order.
  return out;
}

std::vector<RootVector> enumerate_roots(const DiagramId& d) {
  std::vector<RootVector> out = negative_roots(d);
  const auto& pos = positive_roots_cached(d);
  out.insert(out.end(), pos.begin(), pos.end());
  return out;
}

// ---------------------------------------------------------------------------
// Parabolic cases

std::string case_name(const ParabolicId& p) {
  std::string s = diagram_name(p.diagram) + "_";
  for (int k : p.crossing) s += std::to_string(k);
  return s;
}

std::string full_case_name(const ParabolicId& p) {
  return algebra_name(p.diagram.alg) + ":" + case_name(p);
}

ParabolicId case_from_name(Algebra a, const std::string& name) {
  auto us = name.find('_');
  if (us == std::string::npos)
    throw std::invalid_argument("malformed case name: " + name);
  DiagramId d = diagram_from_name(a, name.substr(0, us));
  Crossing chi;
  for (size_t i = us + 1; i < name.size(); ++i) {
    char ch = name[i];
    if (ch < '1' || ch > '0' + rank(a))
      throw std::invalid_argument("bad crossing node in: " + name);
    if (!chi.insert(ch - '0').second)
      throw std::invalid_argument("repeated crossing node in: " + name);
  }
  if (chi.empty()) throw std::invalid_argument("empty crossing in: " + name);
  return ParabolicId{d, chi};
}

int grading_weight(const std::vector<int>& m, const Crossing& chi) {
  int w = 0;
  for (int k : chi) w += m[k - 1];
  return w;
}

int grading_weight(const RootVector& r, const ParabolicId& p) {
  if (!(r.diagram == p.diagram))
    throw std::invalid_argument("grading_weight: diagram mismatch");
  return grading_weight(r.m, p.crossing);
}

int depth(const ParabolicId& p) {
  int mu = 0;
  for (const auto& r : negative_roots(p.diagram))
    mu = std::max(mu, -grading_weight(r.m, p.crossing));
  return mu;
}

std::map<int, SuperDim> negative_level_dims(const ParabolicId& p) {
  std::map<int, SuperDim> dims;
  for (const auto& r : negative_roots(p.diagram)) {
    int w = grading_weight(r.m, p.crossing);
    if (w >= 0) continue;
    auto& d = dims[w];
    if (r.parity == Parity::Even)
      d.even += 1;
    else
      d.odd += 1;
  }
  return dims;
}

std::vector<ParabolicId> all_parabolics(Algebra a) {
  std::vector<ParabolicId> out;
  const int r = rank(a);
  for (const auto& d : all_diagrams(a)) {
    for (int mask = 1; mask < (1 << r); ++mask) {
      Crossing chi;
      for (int k = 1; k <= r; ++k)
        if (mask & (1 << (k - 1))) chi.insert(k);
      out.push_back(ParabolicId{d, chi});
    }
  }
  return out;
}

namespace {

ParabolicId pc(Algebra a, int xi, std::initializer_list<int> nodes) {
  return ParabolicId{DiagramId{a, xi}, Crossing(nodes)};
}

}  // namespace

std::vector<ParabolicId> canonical_parabolics(Algebra a) {
  std::vector<ParabolicId> v;
  if (a == Algebra::G3) {
    v = {pc(a, 1, {1}),    pc(a, 1, {2}),    pc(a, 1, {3}),
         pc(a, 1, {1, 2}), pc(a, 1, {1, 3}), pc(a, 1, {2, 3}),
         pc(a, 1, {1, 2, 3}),
         pc(a, 2, {1}),    pc(a, 2, {1, 2}), pc(a, 2, {1, 3}),
         pc(a, 2, {1, 2, 3}),
         pc(a, 3, {1}),    pc(a, 3, {1, 2}), pc(a, 3, {1, 3}),
         pc(a, 3, {1, 2, 3}),
         pc(a, 4, {2}),    pc(a, 4, {1, 2}), pc(a, 4, {2, 3}),
         pc(a, 4, {1, 2, 3})};
  } else {
    // Diagram I: all 15 nonempty crossings.
    v = {pc(a, 1, {1}),       pc(a, 1, {2}),       pc(a, 1, {3}),
         pc(a, 1, {4}),       pc(a, 1, {1, 2}),    pc(a, 1, {1, 3}),
         pc(a, 1, {1, 4}),    pc(a, 1, {2, 3}),    pc(a, 1, {2, 4}),
         pc(a, 1, {3, 4}),    pc(a, 1, {1, 2, 3}), pc(a, 1, {1, 2, 4}),
         pc(a, 1, {1, 3, 4}), pc(a, 1, {2, 3, 4}), pc(a, 1, {1, 2, 3, 4})};
    auto add8 = [&](int xi, std::vector<std::initializer_list<int>> lists) {
      for (auto& l : lists) v.push_back(pc(a, xi, l));
    };
    add8(2, {{1}, {1, 2}, {1, 3}, {1, 4}, {1, 2, 3}, {1, 2, 4}, {1, 3, 4},
             {1, 2, 3, 4}});
    add8(3, {{3}, {1, 3}, {2, 3}, {3, 4}, {1, 2, 3}, {1, 3, 4}, {2, 3, 4},
             {1, 2, 3, 4}});
    add8(4, {{3}, {1, 3}, {2, 3}, {3, 4}, {1, 2, 3}, {1, 3, 4}, {2, 3, 4},
             {1, 2, 3, 4}});
    add8(5, {{2}, {1, 2}, {2, 3}, {2, 4}, {1, 2, 3}, {1, 2, 4}, {2, 3, 4},
             {1, 2, 3, 4}});
    add8(6, {{2}, {1, 2}, {2, 3}, {2, 4}, {1, 2, 3}, {1, 2, 4}, {2, 3, 4},
             {1, 2, 3, 4}});
  }
  return v;
}

// ---------------------------------------------------------------------------
// Odd reflections

std::vector<OddReflection> odd_reflections(Algebra a) {
  std::vector<OddReflection> out;
  for (const auto& d : all_diagrams(a)) {
    const auto simples = simple_system(d);
    const int r = rank(a);
    for (int i = 1; i <= r; ++i) {
      const AmbientWeight& alpha = simples[i - 1];
      if (root_parity(a, alpha) != Parity::Odd) continue;
      if (!killing_pairing(alpha, alpha).is_zero()) continue;  // isotropic only
      // Image simple system.
      std::vector<AmbientWeight> image;
      for (int j = 1; j <= r; ++j) {
        if (j == i) {
          image.push_back(-alpha);
        } else {
          AmbientWeight s = simples[j - 1] + alpha;
          image.push_back(is_root(a, s) ? s : simples[j - 1]);
        }
      }
      // Match against the table systems (set equality).
      std::optional<OddReflection> match;
      for (const auto& d2 : all_diagrams(a)) {
        const auto target = simple_system(d2);
        std::set<AmbientWeight> ts(target.begin(), target.end());
        std::set<AmbientWeight> is(image.begin(), image.end());
        if (ts != is) continue;
        std::vector<int> node_map(r, 0);
        for (int j = 0; j < r; ++j) {
          for (int k = 0; k < r; ++k)
            if (image[j] == target[k]) node_map[j] = k + 1;
        }
        if (match.has_value())
          throw std::logic_error("odd reflection image matches two diagrams");
        match = OddReflection{d, i, d2, std::move(node_map)};
      }
      if (!match.has_value())
        throw std::logic_error("odd reflection image matches no diagram (" +
                               algebra_name(a) + " " + diagram_name(d) +
                               " node " + std::to_string(i) + ")");
      out.push_back(*match);
    }
  }
  // Involution check: reflecting back at the image node restores the source.
  for (const auto& refl : out) {
    int image_node = refl.node_map[refl.node - 1];
    bool found = false;
    for (const auto& back : out) {
      if (!(back.from == refl.to) || back.node != image_node) continue;
      found = true;
      if (!(back.to == refl.from))
        throw std::logic_error("odd reflection is not an involution");
      for (int j = 1; j <= rank(a); ++j)
        if (back.node_map[refl.node_map[j - 1] - 1] != j)
          throw std::logic_error("odd reflection node maps do not invert");
    }
    if (!found) throw std::logic_error("missing inverse odd reflection");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equivalence classes under odd reflections

int EquivalenceClasses::class_index(const ParabolicId& p) const {
  for (size_t i = 0; i < classes.size(); ++i)
    for (const auto& q : classes[i])
      if (q == p) return static_cast<int>(i);
  return -1;
}

namespace {

EquivalenceClasses compute_equivalence_chains(Algebra a) {
  const auto cases = all_parabolics(a);
  std::map<ParabolicId, size_t> index;
  for (size_t i = 0; i < cases.size(); ++i) index[cases[i]] = i;

  // Union-find.
  std::vector<size_t> parent(cases.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](size_t x, size_t y) { parent[find(x)] = find(y); };

  for (const auto& refl : odd_reflections(a)) {
    for (const auto& p : cases) {
      if (!(p.diagram == refl.from)) continue;
      if (p.crossing.count(refl.node)) continue;  // node itself not crossed
      Crossing image;
      for (int k : p.crossing) image.insert(refl.node_map[k - 1]);
      unite(index.at(p), index.at(ParabolicId{refl.to, image}));
    }
  }

  // Gather classes keyed by root index.
  std::map<size_t, std::vector<ParabolicId>> groups;
  for (size_t i = 0; i < cases.size(); ++i)
    groups[find(i)].push_back(cases[i]);

  const auto canon = canonical_parabolics(a);
  std::set<ParabolicId> canon_set(canon.begin(), canon.end());

  EquivalenceClasses ec;
  ec.classes.resize(canon.size());
  ec.representatives.resize(canon.size(),
                            ParabolicId{DiagramId{a, 1}, Crossing{1}});
  if (groups.size() != canon.size())
    throw std::logic_error("equivalence class count mismatch: got " +
                           std::to_string(groups.size()) + ", expected " +
                           std::to_string(canon.size()));
  for (auto& [root, members] : groups) {
    (void)root;
    std::sort(members.begin(), members.end());
    // Exactly one canonical representative per class.
    std::optional<ParabolicId> rep;
    for (const auto& p : members) {
      if (!canon_set.count(p)) continue;
      if (rep.has_value())
        throw std::logic_error("two canonical representatives in one class");
      rep = p;
    }
    if (!rep.has_value())
      throw std::logic_error("class without canonical representative");
    size_t pos =
        std::find(canon.begin(), canon.end(), *rep) - canon.begin();
    ec.classes[pos] = members;
    ec.representatives[pos] = *rep;
  }

  // Per-level dimension consistency across each class.
  for (const auto& members : ec.classes) {
    auto dims0 = negative_level_dims(members.front());
    for (const auto& p : members)
      if (negative_level_dims(p) != dims0)
        throw std::logic_error(
            "per-level dimensions differ within an equivalence class (" +
            full_case_name(p) + ")");
  }
  return ec;
}

}  // namespace

const EquivalenceClasses& equivalence_chains(Algebra a) {
  static std::map<Algebra, EquivalenceClasses> cache;
  auto it = cache.find(a);
  if (it != cache.end()) return it->second;
  return cache.emplace(a, compute_equivalence_chains(a)).first->second;
}

ParabolicId canonical_representative(const ParabolicId& p) {
  const auto& ec = equivalence_chains(p.diagram.alg);
  int i = ec.class_index(p);
  if (i < 0) throw std::invalid_argument("unknown parabolic case");
  return ec.representatives[i];
}

bool is_dark(const ParabolicId& p) {
  ParabolicId rep = canonical_representative(p);
  Algebra a = rep.diagram.alg;
  static const std::vector<ParabolicId> dark_g3 = {
      pc(Algebra::G3, 1, {1}), pc(Algebra::G3, 3, {1})};
  static const std::vector<ParabolicId> dark_f4 = {
      pc(Algebra::F4, 1, {1}), pc(Algebra::F4, 1, {4}),
      pc(Algebra::F4, 3, {3})};
  const auto& dark = (a == Algebra::G3) ? dark_g3 : dark_f4;
  return std::find(dark.begin(), dark.end(), rep) != dark.end();
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_root_table(const DiagramId& d) {
  std::ostringstream os;
  os << algebra_name(d.alg) << " diagram " << diagram_name(d)
     << " negative roots\n";
  for (Parity par : {Parity::Even, Parity::Odd}) {
    os << (par == Parity::Even ? "even:\n" : "odd:\n");
    for (const auto& r : negative_roots(d)) {
      if (r.parity != par) continue;
      os << "  " << r.m_str() << "  " << r.ambient.str() << "\n";
    }
  }
  return os.str();
}

}  // namespace g3f4
