// g3f4 — exact symmetry computation for the parabolic geometries of the
// exceptional Lie superalgebras G(3) and F(4).
//
// Subcommands:
//   run     one parabolic case end to end (symbol, optional Levi reduction,
//           Tanaka-Weisfeiler prolongation, geometric analyses, oracle diff)
//   verify  every canonical case of one or both algebras plus the global
//           consistency checks; deterministic report, exit 0 iff all pass
//   export  canonical JSON serialization of full/symbol algebras
//   atlas   growth-vector table of all canonical cases
//   roots   negative-root table of one Dynkin diagram
//   graph   case adjacency graph over the canonical representatives
//
// Reports are written to stdout; timings and progress go to stderr so that
// output stays byte-deterministic.

#include <g3f4/cases.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace g3f4;

Crossing parse_crossing(Algebra a, const std::string& text) {
  Crossing chi;
  for (char c : text) {
    if (c == ',' || c == ' ') continue;
    if (c < '0' || c > '9')
      throw std::invalid_argument(
          "--parabolic expects node digits, e.g. \"2\" or \"1,3\"");
    const int node = c - '0';
    if (node < 1 || node > rank(a))
      throw std::invalid_argument("--parabolic node " + std::to_string(node) +
                                  " out of range 1.." +
                                  std::to_string(rank(a)));
    chi.insert(node);
  }
  if (chi.empty())
    throw std::invalid_argument("--parabolic needs at least one node");
  return chi;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int export_corpus(const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  int written = 0;
  for (Algebra a : {Algebra::G3, Algebra::F4}) {
    for (const DiagramId& d : all_diagrams(a)) {
      write_text(out_dir + "/" + export_basename(d), export_full_json(d));
      ++written;
    }
    for (const ParabolicId& p : canonical_parabolics(a)) {
      write_text(out_dir + "/" + export_basename(p), export_symbol_json(p));
      ++written;
    }
  }
  std::cerr << "wrote " << written << " files to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact symmetry computation for the parabolic geometries of the "
      "exceptional Lie superalgebras G(3) and F(4)"};
  app.require_subcommand(1);

  std::string algebra, diagram, parabolic;
  std::string reduce = "auto", format = "text";
  int threshold = 0, jobs = 1;
  std::string out, out_dir, golden_dir;
  bool all = false;

  CLI::App* run = app.add_subcommand("run", "run one parabolic case");
  run->add_option("--algebra", algebra, "g3 or f4")->required();
  run->add_option("--diagram", diagram, "Dynkin diagram name, I..VI")
      ->required();
  run->add_option("--parabolic", parabolic, "crossed nodes, e.g. 2 or 1,3")
      ->required();
  run->add_option("--reduce", reduce, "auto or none (default auto)");
  run->add_option("--threshold", threshold,
                  "prolongation threshold override (>= depth+1)");
  run->add_option("--format", format, "text or json (default text)");

  CLI::App* verify = app.add_subcommand(
      "verify", "verify all canonical cases and the global checks");
  verify->add_option("--algebra", algebra, "g3 or f4 (default: both)");
  verify->add_option("--jobs", jobs, "case-level worker threads (default 1)");
  verify->add_option("--golden", golden_dir,
                     "directory with the golden atlas tables");

  CLI::App* exp = app.add_subcommand("export", "canonical JSON exports");
  exp->add_option("--algebra", algebra, "g3 or f4");
  exp->add_option("--diagram", diagram, "Dynkin diagram name, I..VI");
  exp->add_option("--parabolic", parabolic,
                  "crossed nodes; omit to export the full algebra");
  exp->add_option("--out", out, "output file (default stdout)");
  exp->add_flag("--all", all, "export every full and symbol algebra");
  exp->add_option("--out-dir", out_dir, "output directory for --all");

  CLI::App* atlas = app.add_subcommand("atlas", "growth-vector atlas");
  atlas->add_option("--algebra", algebra, "g3 or f4")->required();

  CLI::App* roots = app.add_subcommand("roots", "negative-root table");
  roots->add_option("--algebra", algebra, "g3 or f4")->required();
  roots->add_option("--diagram", diagram, "Dynkin diagram name, I..VI")
      ->required();

  CLI::App* graph = app.add_subcommand("graph", "case adjacency graph");
  graph->add_option("--algebra", algebra, "g3 or f4")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const Algebra a = algebra_from_name(algebra);
      CaseRequest req;
      req.parabolic = ParabolicId{diagram_from_name(a, diagram),
                                  parse_crossing(a, parabolic)};
      req.reduce = reduce_mode_from_name(reduce);
      if (threshold > 0) req.threshold = threshold;
      const CaseReport rep = run_case(req);
      std::cout << (format == "json" ? render_report_json(rep) + "\n"
                                     : render_report(rep));
      std::cerr << "time: " << static_cast<long>(rep.seconds * 1000.0)
                << " ms\n";
      return 0;
    }

    if (verify->parsed()) {
      VerifyOptions opt;
      opt.jobs = jobs;
      if (!golden_dir.empty()) opt.golden_dir = golden_dir;
      const auto t0 = std::chrono::steady_clock::now();
      const VerifySummary s = algebra.empty()
                                  ? verify_everything(opt)
                                  : verify_all(algebra_from_name(algebra), opt);
      std::cout << s.report;
      std::cerr << "time: "
                << std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count()
                << " ms\n";
      return s.pass() ? 0 : 1;
    }

    if (exp->parsed()) {
      if (all) {
        if (out_dir.empty())
          throw std::invalid_argument("--all requires --out-dir");
        return export_corpus(out_dir);
      }
      const Algebra a = algebra_from_name(algebra);
      const DiagramId d = diagram_from_name(a, diagram);
      const std::string text =
          parabolic.empty()
              ? export_full_json(d)
              : export_symbol_json(ParabolicId{d, parse_crossing(a, parabolic)});
      if (out.empty())
        std::cout << text << "\n";
      else
        write_text(out, text);
      return 0;
    }

    if (atlas->parsed()) {
      std::cout << render_atlas(algebra_from_name(algebra));
      return 0;
    }
    if (roots->parsed()) {
      const Algebra a = algebra_from_name(algebra);
      std::cout << render_root_table(diagram_from_name(a, diagram));
      return 0;
    }
    if (graph->parsed()) {
      std::cout << render_graph(algebra_from_name(algebra));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
