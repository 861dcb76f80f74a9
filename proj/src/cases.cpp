#include <g3f4/cases.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace g3f4 {

namespace {

SuperDim parity_count(const GradedLieSuperalgebra& alg,
                      const std::vector<std::size_t>& idxs) {
  SuperDim d;
  for (std::size_t i : idxs) {
    if (alg.element(i).parity == Even)
      ++d.even;
    else
      ++d.odd;
  }
  return d;
}

// Per-degree dimensions of the full algebra under the parabolic grading: the
// independent oracle every finite prolongation is compared against.
std::map<int, SuperDim> oracle_dims(const ParabolicId& p) {
  const FullAlgebra& f = build_full(p.diagram);
  std::map<int, SuperDim> want;
  for (const auto& [deg, idxs] : graded_parts(f, p))
    want[deg] = parity_count(f.alg, idxs);
  return want;
}

void compare_with_oracle(CaseReport& rep, const GradedLieSuperalgebra& got) {
  const std::map<int, SuperDim> want = oracle_dims(rep.request.parabolic);
  const std::map<int, SuperDim> have = got.graded_dims();
  std::set<int> degrees;
  for (const auto& [deg, d] : want) degrees.insert(deg);
  for (const auto& [deg, d] : have) degrees.insert(deg);
  for (int deg : degrees) {
    const SuperDim w = want.count(deg) ? want.at(deg) : SuperDim{};
    const SuperDim h = have.count(deg) ? have.at(deg) : SuperDim{};
    if (w == h) continue;
    rep.oracle_match = false;
    rep.oracle_detail = "degree " + std::to_string(deg) + ": computed " +
                        h.str() + ", full algebra " + w.str();
    return;
  }
  rep.oracle_match = true;
}

// The curated tangent-span entry for the case's canonical representative, or
// nullptr when the span is expected to be full.
std::optional<SuperDim> curated_span(const CaseReport& r) {
  for (const auto& s : special_tangent_spans(r.request.parabolic.diagram.alg))
    if (s.parabolic == r.representative) return s.span;
  return std::nullopt;
}

bool span_consistent(const CaseReport& r) {
  std::optional<SuperDim> want = curated_span(r);
  if (r.span.full) return !want.has_value();
  return want.has_value() && *want == r.span.span;
}

}  // namespace

// ---------------------------------------------------------------------------
// Requests and reports

std::string reduce_mode_name(ReduceMode m) {
  return m == ReduceMode::Auto ? "auto" : "none";
}

ReduceMode reduce_mode_from_name(const std::string& name) {
  if (name == "auto") return ReduceMode::Auto;
  if (name == "none") return ReduceMode::None;
  throw std::invalid_argument("unknown reduce mode: " + name);
}

CaseReport run_case_over(const SymbolAlgebra& m, const CaseRequest& req) {
  const auto t0 = std::chrono::steady_clock::now();
  CaseReport rep;
  rep.request = req;
  rep.representative = canonical_representative(req.parabolic);
  rep.dark = is_dark(req.parabolic);

  std::optional<ReductionSpec> red;
  if (req.reduce == ReduceMode::Auto && rep.dark) {
    red = reduction_from_levi(
        levi_action(build_full(req.parabolic.diagram), req.parabolic));
    rep.reduction_applied = true;
  }
  rep.threshold_used =
      req.threshold ? *req.threshold : depth(req.parabolic) + 1;

  ProlongationState st = prolong(m, red, rep.threshold_used);
  rep.status = st.status;
  for (const auto& [deg, d] : m.alg.graded_dims()) rep.level_dims[deg] = d;
  for (const auto& [k, d] : st.level_dims()) rep.level_dims[k] = d;
  for (const auto& [deg, d] : rep.level_dims) rep.total += d;

  rep.growth = growth_vector(m);
  rep.span = null_span(m);
  if (st.status == ProlongStatus::Finite) compare_with_oracle(rep, *st.assembled);

  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

CaseReport run_case(const CaseRequest& req) {
  return run_case_over(build_symbol(req.parabolic), req);
}

bool case_passes(const CaseReport& r) {
  return r.status == ProlongStatus::Finite && r.oracle_match.has_value() &&
         *r.oracle_match && span_consistent(r);
}

std::string render_report(const CaseReport& r) {
  std::ostringstream os;
  os << "case: " << full_case_name(r.request.parabolic) << "\n";
  os << "class representative: " << full_case_name(r.representative)
     << (r.dark ? " (dark)" : "") << "\n";
  os << "reduce: " << reduce_mode_name(r.request.reduce)
     << (r.reduction_applied ? " (Levi reduction applied)" : " (no reduction)")
     << "\n";
  os << "threshold: " << r.threshold_used
     << (r.request.threshold ? " (override)" : " (default depth+1)") << "\n";
  os << "status: " << status_name(r.status) << "\n";
  os << "total: " << r.total.str() << "\n";
  os << "levels:";
  for (const auto& [deg, d] : r.level_dims) os << " " << deg << ":" << d.str();
  os << "\n";
  os << "growth: " << r.growth.str() << "\n";
  os << "tangent span: ";
  if (r.span.full)
    os << "full " << r.span.g1.str();
  else
    os << r.span.span.str() << " of " << r.span.g1.str();
  os << "\n";
  os << "oracle: ";
  if (!r.oracle_match.has_value())
    os << "not applicable (prolongation did not terminate)";
  else if (*r.oracle_match)
    os << "match";
  else
    os << "MISMATCH — " << r.oracle_detail;
  os << "\n";
  return os.str();
}

std::string render_report_json(const CaseReport& r) {
  using nlohmann::json;
  const ParabolicId& p = r.request.parabolic;
  json req{{"algebra", algebra_name(p.diagram.alg)},
           {"diagram", diagram_name(p.diagram)},
           {"parabolic", std::vector<int>(p.crossing.begin(), p.crossing.end())},
           {"reduce", reduce_mode_name(r.request.reduce)},
           {"threshold",
            r.request.threshold ? json(*r.request.threshold) : json(nullptr)}};

  json levels = json::array();
  for (const auto& [deg, d] : r.level_dims)
    levels.push_back({deg, d.even, d.odd});
  json growth = json::array();
  for (const auto& d : r.growth.levels) growth.push_back({d.even, d.odd});

  json span{{"g1", {r.span.g1.even, r.span.g1.odd}},
            {"span", {r.span.span.even, r.span.span.odd}},
            {"full", r.span.full},
            {"witnesses", r.span.witnesses}};

  json j{{"case", full_case_name(p)},
         {"request", req},
         {"representative", full_case_name(r.representative)},
         {"dark", r.dark},
         {"reduction_applied", r.reduction_applied},
         {"threshold_used", r.threshold_used},
         {"status", status_name(r.status)},
         {"levels", levels},
         {"total", {r.total.even, r.total.odd}},
         {"growth", growth},
         {"span", span},
         {"oracle", r.oracle_match.has_value()
                        ? json{{"match", *r.oracle_match},
                               {"detail", r.oracle_detail}}
                        : json(nullptr)}};
  return j.dump(1);
}

// ---------------------------------------------------------------------------
// Batch verification

namespace {

struct CaseOutcome {
  CaseReport report;
  std::optional<CaseReport> unreduced;  // dark cases: run without reduction
  CrossCheckReport cross;
  std::string error;  // nonempty when the pipeline threw
};

void emit(VerifySummary& s, bool ok, const std::string& line) {
  ++s.checks;
  if (!ok) ++s.failures;
  s.report += (ok ? "[PASS] " : "[FAIL] ") + line + "\n";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// 1-based line number of the first difference between two texts.
std::size_t first_diff_line(const std::string& a, const std::string& b) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] != b[i]) return line;
    if (a[i] == '\n') ++line;
  }
  return line;
}

}  // namespace

VerifySummary verify_all(Algebra a, const VerifyOptions& opt) {
  // Serial pre-warm of every lazily built shared table (memoized root
  // enumerations, full algebras, equivalence classes), so that worker
  // threads only ever read them.
  for (const DiagramId& d : all_diagrams(a)) {
    build_full(d);
    enumerate_roots(d);
  }
  equivalence_chains(a);

  const std::vector<ParabolicId> cases = canonical_parabolics(a);
  std::vector<CaseOutcome> out(cases.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i; (i = next.fetch_add(1)) < cases.size();) {
      CaseOutcome& o = out[i];
      const ParabolicId& p = cases[i];
      try {
        SymbolAlgebra m = build_symbol(p);
        o.report = run_case_over(m, CaseRequest{p, ReduceMode::Auto, {}});
        o.cross = cross_check_symbol(build_full(p.diagram), m, p);
        if (o.report.dark)
          o.unreduced = run_case_over(m, CaseRequest{p, ReduceMode::None, {}});
      } catch (const std::exception& e) {
        o.error = e.what();
      }
    }
  };
  const int jobs = std::clamp<int>(opt.jobs, 1, static_cast<int>(cases.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  VerifySummary s;
  const std::string an = algebra_name(a);

  // One line per canonical case.
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const CaseOutcome& o = out[i];
    const std::string name = full_case_name(cases[i]);
    if (!o.error.empty()) {
      emit(s, false, name + " error: " + o.error);
      continue;
    }
    const CaseReport& r = o.report;
    std::ostringstream line;
    line << name << (r.reduction_applied ? " reduced " : " ")
         << status_name(r.status) << " " << r.total.str()
         << " growth=" << r.growth.str()
         << " span=" << (r.span.full ? "full" : r.span.span.str())
         << " oracle=";
    if (!r.oracle_match.has_value())
      line << "n/a";
    else if (*r.oracle_match)
      line << "match";
    else
      line << "MISMATCH(" << r.oracle_detail << ")";
    emit(s, case_passes(r), line.str());
  }

  // One line per dark case: without reduction the tower must keep growing.
  std::vector<std::string> dark_names;
  bool all_dark_exceed = true;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (!out[i].unreduced) continue;
    dark_names.push_back(case_name(cases[i]));
    const CaseReport& u = *out[i].unreduced;
    const bool ok = u.status == ProlongStatus::ThresholdExceeded;
    all_dark_exceed = all_dark_exceed && ok;
    std::ostringstream line;
    line << full_case_name(cases[i])
         << " without reduction: " << status_name(u.status) << " level0="
         << (u.level_dims.count(0) ? u.level_dims.at(0).str() : "(none)");
    emit(s, ok, line.str());
  }

  // Dichotomy: exactly the dark classes are infinite unreduced; every other
  // class already terminated without any reduction in its case line above.
  {
    bool nondark_unreduced_finite = true;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      if (!out[i].error.empty() || out[i].report.dark) continue;
      nondark_unreduced_finite = nondark_unreduced_finite &&
                                 !out[i].report.reduction_applied &&
                                 out[i].report.status == ProlongStatus::Finite;
    }
    const std::size_t expected = a == Algebra::G3 ? 2 : 3;
    std::ostringstream line;
    line << an << " dark dichotomy: " << dark_names.size() << " of "
         << cases.size() << " classes are infinite without reduction (";
    for (std::size_t k = 0; k < dark_names.size(); ++k)
      line << (k ? ", " : "") << dark_names[k];
    line << ")";
    emit(s,
         dark_names.size() == expected && all_dark_exceed &&
             nondark_unreduced_finite,
         line.str());
  }

  // Symbol vs full-algebra cross-checks (graded dims and bracket ranks).
  {
    std::size_t ok = 0;
    std::string detail;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      if (out[i].error.empty() && out[i].cross.pass) {
        ++ok;
      } else if (detail.empty()) {
        detail = full_case_name(cases[i]) + ": " +
                 (out[i].error.empty() ? out[i].cross.detail : out[i].error);
      }
    }
    std::ostringstream line;
    line << an << " symbol/full cross-checks: " << ok << " of " << cases.size()
         << " agree";
    if (!detail.empty()) line << " — first failure: " << detail;
    emit(s, ok == cases.size(), line.str());
  }

  // Atlas against the golden table.
  {
    const std::string dir = opt.golden_dir
                                ? *opt.golden_dir
                                : std::string(G3F4_SOURCE_DIR) + "/tests/golden";
    const std::string path = dir + "/atlas_" + an + ".txt";
    std::string msg;
    bool ok = false;
    try {
      const std::string golden = slurp(path);
      const std::string fresh = render_atlas(a);
      if (fresh == golden) {
        ok = true;
        msg = an + " atlas golden diff: empty (" +
              std::to_string(cases.size()) + " rows)";
      } else {
        msg = an + " atlas differs from " + path + " at line " +
              std::to_string(first_diff_line(fresh, golden));
      }
    } catch (const std::exception& e) {
      msg = an + " atlas golden diff: " + e.what();
    }
    emit(s, ok, msg);
  }

  // Odd-reflection equivalences: growth vectors and bracket ranks per class.
  {
    const EquivalenceReport eq = verify_equivalences(a);
    std::ostringstream line;
    line << an << " equivalence classes: growth vectors and bracket ranks"
         << " agree across " << all_parabolics(a).size() << " crossings in "
         << cases.size() << " classes";
    if (!eq.pass) line << " — " << eq.detail;
    emit(s, eq.pass, line.str());
  }

  // Tangent spans: full everywhere except the curated special cases.
  {
    const SpecialCasesReport sp = special_cases_check(a);
    std::size_t full = 0;
    for (const auto& r : sp.reports) full += r.full ? 1 : 0;
    std::ostringstream line;
    line << an << " tangent spans: " << full << " full, "
         << (sp.reports.size() - full) << " special matching curated values";
    if (!sp.pass) line << " — " << sp.detail;
    emit(s, sp.pass, line.str());
  }

  s.report += an + " summary: " + std::to_string(s.checks) + " checks, " +
              std::to_string(s.failures) + " failures\n";
  return s;
}

VerifySummary verify_everything(const VerifyOptions& opt) {
  VerifySummary g = verify_all(Algebra::G3, opt);
  VerifySummary f = verify_all(Algebra::F4, opt);
  VerifySummary s;
  s.checks = g.checks + f.checks;
  s.failures = g.failures + f.failures;
  s.report = g.report + f.report + "total: " + std::to_string(s.checks) +
             " checks, " + std::to_string(s.failures) + " failures\n";
  return s;
}

// ---------------------------------------------------------------------------
// JSON exports

std::string export_full_json(const DiagramId& d) {
  return to_json(build_full(d).alg);
}

std::string export_symbol_json(const ParabolicId& p) {
  return to_json(build_symbol(p).alg);
}

std::string export_basename(const DiagramId& d) {
  return "full_" + algebra_name(d.alg) + "_" + diagram_name(d) + ".json";
}

std::string export_basename(const ParabolicId& p) {
  return "symbol_" + algebra_name(p.diagram.alg) + "_" + case_name(p) +
         ".json";
}

}  // namespace g3f4
