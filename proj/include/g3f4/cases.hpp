#pragma once

// Case driver and batch verification.
//
// A "case" is one parabolic geometry (diagram + crossing).  run_case executes
// the full pipeline for it: build the negatively graded symbol algebra,
// install the Levi reduction when the reduction mode is `auto` and the case
// class is one of the five whose unreduced prolongation is infinite, run the
// Tanaka-Weisfeiler prolongation, attach the geometric analyses (growth
// vector, tangent span of integral curves), and — whenever the prolongation
// terminates — compare the resulting graded dimensions degree by degree
// against the parabolic grading of the full algebra built independently from
// the root data.
//
// verify_all runs every canonical case of one algebra, plus the global
// consistency checks (dark dichotomy, atlas golden diff, equivalence
// classes, tangent spans, symbol/full cross-checks), and renders one
// deterministic pass/fail line per check: reports are byte-identical across
// runs and across worker counts.  Reports never include timings; wall-clock
// data lives only in the CaseReport struct for callers that want it.

#include <g3f4/geometry.hpp>
#include <g3f4/prolong.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace g3f4 {

// ---------------------------------------------------------------------------
// Requests and reports

enum class ReduceMode { Auto, None };

std::string reduce_mode_name(ReduceMode m);                // "auto" | "none"
ReduceMode reduce_mode_from_name(const std::string& name); // throws on unknown

struct CaseRequest {
  ParabolicId parabolic;
  ReduceMode reduce = ReduceMode::Auto;
  // Prolongation threshold override.  Defaults to depth+1: the lowest level
  // whose vanishing certifies termination (levels are maps into the previous
  // level, so the first empty level closes the tower).
  std::optional<int> threshold;
};

struct CaseReport {
  CaseRequest request;
  ParabolicId representative;  // canonical member of the odd-reflection class
  bool dark = false;
  bool reduction_applied = false;
  int threshold_used = 0;  // effective prolongation threshold
  ProlongStatus status = ProlongStatus::InProgress;
  // Per-degree dimensions: negative degrees from the symbol, non-negative
  // degrees from the computed prolongation levels (a trailing empty level is
  // kept — it is the termination witness).
  std::map<int, SuperDim> level_dims;
  SuperDim total;  // sum over level_dims
  GrowthVector growth;
  NullSpanReport span;
  // Set exactly when status == Finite: per-degree dimensions agree with the
  // parabolic grading of the independently built full algebra.
  std::optional<bool> oracle_match;
  std::string oracle_detail;  // first mismatch; empty when matching
  double seconds = 0.0;       // wall clock; excluded from all renderings
};

CaseReport run_case(const CaseRequest& req);

// Same pipeline over a caller-supplied symbol algebra (test seam for
// injected mutations).  The symbol must share the degree -1 block layout of
// build_symbol(req.parabolic); the oracle is still the one named by the
// request.
CaseReport run_case_over(const SymbolAlgebra& m, const CaseRequest& req);

// The per-case verdict used by verify_all: finite, oracle match, and a
// tangent span consistent with the curated special-span table.
bool case_passes(const CaseReport& r);

std::string render_report(const CaseReport& r);       // plain-text block
std::string render_report_json(const CaseReport& r);  // one JSON object

// ---------------------------------------------------------------------------
// Batch verification

struct VerifyOptions {
  int jobs = 1;  // case-level parallelism; output is identical for any value
  // Directory holding the golden atlas files (atlas_g3.txt / atlas_f4.txt);
  // defaults to the source tree's tests/golden.
  std::optional<std::string> golden_dir;
};

struct VerifySummary {
  int checks = 0;
  int failures = 0;
  std::string report;  // one deterministic "[PASS]/[FAIL] ..." line per check
  bool pass() const { return failures == 0; }
};

VerifySummary verify_all(Algebra a, const VerifyOptions& opt = {});
// Both algebras, concatenated reports, one combined summary line at the end.
VerifySummary verify_everything(const VerifyOptions& opt = {});

// ---------------------------------------------------------------------------
// JSON exports (canonical serialization of the constructed algebras)

std::string export_full_json(const DiagramId& d);
std::string export_symbol_json(const ParabolicId& p);

// Stable file names for the export corpus: "full_g3_I.json",
// "symbol_f4_III_13.json".
std::string export_basename(const DiagramId& d);
std::string export_basename(const ParabolicId& p);

}  // namespace g3f4
