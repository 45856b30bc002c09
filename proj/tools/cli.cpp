#include "cli.hpp"

#include "vflite/callgraph.hpp"
#include "vflite/ci.hpp"
#include "vflite/diag.hpp"
#include "vflite/engine.hpp"
#include "vflite/frontend.hpp"
#include "vflite/oracle.hpp"
#include "vflite/pdg.hpp"
#include "vflite/reach.hpp"
#include "vflite/report.hpp"
#include "vflite/solver.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace vflite::cli {
namespace {

struct Options {
  std::string input;
  std::string out;
  std::string mode = "fusion";
  std::string reach = "bfs";
  std::string checker = "npd";
  std::string what = "pdg"; // dump target
  std::vector<std::string> sources;
  std::vector<std::string> sinks;
  std::size_t maxPathLen = 64;
  std::size_t maxSummaries = 10000;
  std::size_t guardDepth = 8;
  std::size_t sccIters = 3;
  unsigned jobs = 1;
  bool seq = false;
  bool noTiming = false;
};

std::string readFile(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw AnalysisError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int writeOut(const std::string &outPath, const std::string &text) {
  if (outPath.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(outPath, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write " << outPath << "\n";
    return 2;
  }
  f << text;
  return 0;
}

struct Pipeline {
  Program prog;
  Pdg pdg;
  CallGraph cg;
  std::string hash;
};

Pipeline runFrontend(const Options &o) {
  Pipeline p;
  p.prog = parseProgram(readFile(o.input));
  p.pdg = buildPdg(p.prog);
  if (o.checker == "custom" || !o.sources.empty() || !o.sinks.empty())
    p.pdg.applyRoleGlobs(o.sources, o.sinks);
  p.cg = buildCallGraph(p.prog);
  p.hash = programHash(p.prog.text);
  return p;
}

EngineConfig engineConfig(const Options &o) {
  EngineConfig cfg;
  cfg.maxPathLen = o.maxPathLen;
  cfg.maxSummaries = o.maxSummaries;
  cfg.guardDepth = o.guardDepth;
  cfg.sccIters = o.sccIters;
  cfg.jobs = o.seq ? 1u : o.jobs;
  cfg.collectTiming = !o.noTiming;
  return cfg;
}

/// One engine execution plus everything a report needs to reference.
struct ModeRun {
  std::string mode;
  std::string reach; // "" when no filter ran
  ContextTable ctxs;
  NecessarySet ns;
  bool filtered = false;
  AnalysisResult result{SummaryStore{0}, {}, {}};
};

ModeRun runMode(const Pipeline &p, const Options &o, const std::string &mode,
                const std::string &reach) {
  ModeRun mr;
  mr.mode = mode;
  auto solver = makeBuiltinSolver();
  EngineConfig cfg = engineConfig(o);
  if (mode == "fusion") {
    mr.result =
        runEngine(p.prog, p.pdg, p.cg, nullptr, *solver, mr.ctxs, cfg);
  } else {
    auto backend =
        reach == "cfl" ? makeCflBackend(p.pdg) : makeBfsBackend(p.pdg);
    mr.ns = identifyContrib(p.pdg, *backend, cfg.collectTiming);
    mr.filtered = true;
    mr.reach = reach;
    mr.result =
        runEngine(p.prog, p.pdg, p.cg, &mr.ns, *solver, mr.ctxs, cfg);
  }
  return mr;
}

RunRecord record(const Pipeline &p, const ModeRun &mr) {
  return RunRecord{mr.mode, mr.reach, &mr.result, &mr.ctxs,
                   mr.filtered ? &mr.ns : nullptr, p.hash};
}

int cmdDiff(const Pipeline &p, const Options &o) {
  ModeRun fusion = runMode(p, o, "fusion", "");
  ModeRun light = runMode(p, o, "light", "bfs");
  ModeRun cflLight = runMode(p, o, "cfl-light", "cfl");

  OracleResult oracle =
      classifyContributions(fusion.result.store, fusion.result.bugs);
  IdentificationStats stats =
      identificationStats(oracle, fusion.result.store, fusion.ctxs,
                          light.result.store, light.ctxs);

  DiffOutcome d =
      buildDiffReport(o.input, record(p, fusion), record(p, light),
                      record(p, cflLight), oracle, stats, p.pdg, !o.noTiming);
  if (int w = writeOut(o.out, d.json))
    return w;
  if (!d.bugSetsEqual)
    return 4;
  bool flag = fusion.result.metrics.soundnessFlag ||
              light.result.metrics.soundnessFlag ||
              cflLight.result.metrics.soundnessFlag;
  return flag ? 3 : 0;
}

int cmdAnalyze(const Options &o) {
  Pipeline p = runFrontend(o);
  if (o.mode == "diff")
    return cmdDiff(p, o);
  std::string reach = o.mode == "cfl-light" ? "cfl" : o.reach;
  ModeRun mr = runMode(p, o, o.mode, reach);
  std::string text =
      buildAnalyzeReport(o.input, record(p, mr), p.pdg, !o.noTiming);
  if (int w = writeOut(o.out, text))
    return w;
  return mr.result.metrics.soundnessFlag ? 3 : 0;
}

int cmdClassify(const Options &o) {
  Pipeline p = runFrontend(o);
  ModeRun fusion = runMode(p, o, "fusion", "");
  ModeRun light = runMode(p, o, "light", "bfs");
  OracleResult oracle =
      classifyContributions(fusion.result.store, fusion.result.bugs);
  IdentificationStats stats =
      identificationStats(oracle, fusion.result.store, fusion.ctxs,
                          light.result.store, light.ctxs);
  std::string text =
      buildClassifyReport(o.input, record(p, fusion), oracle, stats, p.pdg);
  if (int w = writeOut(o.out, text))
    return w;
  bool flag = fusion.result.metrics.soundnessFlag ||
              light.result.metrics.soundnessFlag;
  return flag ? 3 : 0;
}

int cmdDump(const Options &o) {
  Pipeline p = runFrontend(o);
  if (o.what == "pdg")
    return writeOut(o.out, p.pdg.toDot());
  if (o.what == "pdg-json")
    return writeOut(o.out, p.pdg.toJson());
  auto backend =
      o.reach == "cfl" ? makeCflBackend(p.pdg) : makeBfsBackend(p.pdg);
  NecessarySet ns = identifyContrib(p.pdg, *backend, !o.noTiming);
  return writeOut(o.out, buildVnDump(o.input, p.hash, ns, o.reach, p.pdg));
}

void addCommonFlags(CLI::App *cmd, Options &o) {
  cmd->add_option("input", o.input, "program to analyze")->required();
  cmd->add_option("--out", o.out, "write the report here instead of stdout");
  cmd->add_option("--checker", o.checker, "role preset: npd or custom")
      ->check(CLI::IsMember({"npd", "custom"}));
  cmd->add_option("--sources", o.sources,
                  "display-name globs marking sources (implies custom roles)");
  cmd->add_option("--sinks", o.sinks,
                  "display-name globs marking sinks (implies custom roles)");
  cmd->add_option("--max-path-len", o.maxPathLen, "steps per summary path");
  cmd->add_option("--max-summaries", o.maxSummaries,
                  "rows per function before giving up");
  cmd->add_option("--guard-depth", o.guardDepth,
                  "nested guard instantiation depth");
  cmd->add_option("--scc-iters", o.sccIters,
                  "fixpoint rounds per recursive component");
  cmd->add_flag("--no-timing", o.noTiming,
                "report 0.0 for every duration (byte-stable output)");
}

} // namespace

int run(int argc, const char *const *argv) {
  Options o;
  CLI::App app{"path-sensitive value-flow analysis for the mini SSA language"};
  app.require_subcommand(1);

  CLI::App *analyze =
      app.add_subcommand("analyze", "collect summaries and report flows");
  addCommonFlags(analyze, o);
  analyze->add_option("--mode", o.mode,
                      "fusion | light | cfl-light | diff")
      ->check(CLI::IsMember({"fusion", "light", "cfl-light", "diff"}));
  analyze->add_option("--reach", o.reach, "reachability backend for light")
      ->check(CLI::IsMember({"bfs", "cfl"}));
  analyze->add_option("--jobs", o.jobs, "worker threads per layer")
      ->check(CLI::Range(1u, 64u));
  analyze->add_flag("--seq", o.seq, "force sequential collection");

  CLI::App *dump = app.add_subcommand("dump", "print analysis structures");
  addCommonFlags(dump, o);
  dump->add_option("--what", o.what, "pdg | pdg-json | vn")
      ->check(CLI::IsMember({"pdg", "pdg-json", "vn"}));
  dump->add_option("--reach", o.reach, "reachability backend for vn")
      ->check(CLI::IsMember({"bfs", "cfl"}));

  CLI::App *classify = app.add_subcommand(
      "classify", "label every summary row's contribution");
  addCommonFlags(classify, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }

  try {
    if (analyze->parsed())
      return cmdAnalyze(o);
    if (dump->parsed())
      return cmdDump(o);
    if (classify->parsed())
      return cmdClassify(o);
    return 1;
  } catch (const ParseError &e) {
    std::cerr << "error: " << o.input << ": " << e.what() << "\n";
    return 2;
  } catch (const AnalysisError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}

} // namespace vflite::cli
