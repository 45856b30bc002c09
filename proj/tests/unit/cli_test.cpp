#include "doctest.h"

#include "cli.hpp"
#include "test_util.hpp"

#include "json.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace vflite::testsupport;
using nlohmann::json;

namespace {

struct CliResult {
  int exitCode;
  std::string out;
};

std::string freshTmpPath(const char *tag) {
  static int counter = 0;
  return (std::filesystem::temp_directory_path() /
          ("vflite_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++) + "_" + tag))
      .string();
}

// Run the CLI entry point in-process with stdout captured to a file.
CliResult runCli(std::vector<std::string> args) {
  std::vector<const char *> argv;
  argv.push_back("vflite");
  for (const std::string &a : args)
    argv.push_back(a.c_str());

  std::string tmp = freshTmpPath("out");
  std::fflush(stdout);
  int savedFd = ::dup(::fileno(stdout));
  REQUIRE(savedFd >= 0);
  FILE *redirected = std::freopen(tmp.c_str(), "w", stdout);
  REQUIRE(redirected != nullptr);
  int code = vflite::cli::run(static_cast<int>(argv.size()), argv.data());
  std::fflush(stdout);
  ::dup2(savedFd, ::fileno(stdout));
  ::close(savedFd);
  std::clearerr(stdout);

  std::ifstream in(tmp, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::filesystem::remove(tmp);
  return {code, ss.str()};
}

} // namespace

TEST_CASE("analyze exits clean and prints the report") {
  CliResult r = runCli({"analyze", "--mode", "fusion", "--no-timing",
                        corpusPath("interproc_nullflow.vf")});
  CHECK(r.exitCode == 0);
  json d = json::parse(r.out);
  CHECK(d["schema"] == "vflite-report-v1");
  CHECK(d["metrics"]["s_all"] == 9);
  CHECK(d["bugs"].size() == 2);
}

TEST_CASE("usage errors exit with code one") {
  CliResult bad = runCli({"analyze", "--mode", "bogus",
                          corpusPath("empty.vf")});
  CHECK(bad.exitCode == 1);
  CliResult none = runCli({});
  CHECK(none.exitCode == 1);
}

TEST_CASE("unreadable or malformed input exits with code two") {
  CliResult missing = runCli({"analyze", "--mode", "fusion",
                              corpusPath("does_not_exist.vf")});
  CHECK(missing.exitCode == 2);

  std::string bad = freshTmpPath("bad.vf");
  {
    std::ofstream f(bad);
    f << "func f( {\n";
  }
  CliResult malformed = runCli({"analyze", "--mode", "fusion", bad});
  CHECK(malformed.exitCode == 2);
  std::filesystem::remove(bad);
}

TEST_CASE("tripped soundness caps exit with code three") {
  CliResult r = runCli({"analyze", "--mode", "fusion", "--no-timing",
                        corpusPath("long_copy_chain.vf")});
  CHECK(r.exitCode == 3);
  // Raising the budget clears the flag and the flow is reported again.
  CliResult wide = runCli({"analyze", "--mode", "fusion", "--no-timing",
                           "--max-path-len", "128",
                           corpusPath("long_copy_chain.vf")});
  CHECK(wide.exitCode == 0);
  CHECK(json::parse(wide.out)["bugs"].size() == 1);
}

TEST_CASE("diff agrees on the corpus and says so") {
  CliResult r = runCli({"analyze", "--mode", "diff", "--no-timing",
                        corpusPath("interproc_nullflow.vf")});
  CHECK(r.exitCode == 0);
  json d = json::parse(r.out);
  CHECK(d["schema"] == "vflite-diff-v1");
  CHECK(d["bug_sets_equal"] == true);
  CHECK(d["contribution"]["ratio"] == 1.0);
}

TEST_CASE("reports can be written to a file instead of stdout") {
  std::string out = freshTmpPath("report.json");
  CliResult r = runCli({"analyze", "--mode", "fusion", "--no-timing",
                        "--out", out,
                        corpusPath("interproc_nullflow.vf")});
  CHECK(r.exitCode == 0);
  CHECK(r.out.empty());
  std::ifstream in(out, std::ios::binary);
  REQUIRE(in.good());
  json d;
  in >> d;
  CHECK(d["schema"] == "vflite-report-v1");
  std::filesystem::remove(out);
}

TEST_CASE("custom role globs change the analysis") {
  CliResult r = runCli({"analyze", "--mode", "fusion", "--no-timing",
                        "--sources", "null@19", "--sinks", "*a@9",
                        corpusPath("interproc_nullflow.vf")});
  CHECK(r.exitCode == 0);
  json d = json::parse(r.out);
  REQUIRE(d["bugs"].size() == 1);
  CHECK(d["bugs"][0]["source"] == "null@19");
  CHECK(d["bugs"][0]["sink"] == "*a@9");
}

TEST_CASE("dump subcommand prints each structure") {
  CliResult dot = runCli({"dump", "--what", "pdg",
                          corpusPath("single_flow.vf")});
  CHECK(dot.exitCode == 0);
  CHECK(dot.out.find("digraph") != std::string::npos);

  CliResult pj = runCli({"dump", "--what", "pdg-json",
                         corpusPath("single_flow.vf")});
  CHECK(pj.exitCode == 0);
  CHECK(json::parse(pj.out).contains("vertices"));

  CliResult vn = runCli({"dump", "--what", "vn", "--reach", "cfl",
                         "--no-timing",
                         corpusPath("interproc_nullflow.vf")});
  CHECK(vn.exitCode == 0);
  json d = json::parse(vn.out);
  CHECK(d["schema"] == "vflite-vn-v1");
  CHECK(d["reach"] == "cfl");
  CHECK(d["nec_guards"] == json::array({"g+@12"}));
}

TEST_CASE("classify prints verdicts and the identification block") {
  CliResult r = runCli({"classify", "--no-timing",
                        corpusPath("interproc_nullflow.vf")});
  CHECK(r.exitCode == 0);
  json d = json::parse(r.out);
  CHECK(d["schema"] == "vflite-classify-v1");
  CHECK(d["rows"].size() == 9);
  CHECK(d["identification"]["pruned"] == 4);
}

TEST_CASE("repeated runs with suppressed timing are byte-identical") {
  for (const char *mode : {"fusion", "light", "cfl-light", "diff"}) {
    CAPTURE(mode);
    std::vector<std::string> args{"analyze", "--mode", mode, "--no-timing",
                                  corpusPath("interproc_nullflow.vf")};
    if (std::string(mode) == "light") {
      args.push_back("--reach");
      args.push_back("bfs");
    }
    CliResult a = runCli(args);
    CliResult b = runCli(args);
    CHECK(a.exitCode == b.exitCode);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}
