#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "hhslab/report.hpp"
#include "hhslab/version.hpp"

namespace fs = std::filesystem;
using hhslab::StageError;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kResource = 3 };

unsigned thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("HHSLAB_THREADS");
  if (!env || !*env) return hw;
  try {
    long n = std::stol(env);
    if (n >= 1) return static_cast<unsigned>(std::min<long>(n, hw));
  } catch (const std::exception&) {
  }
  throw StageError(StageError::Kind::Usage, "config", "HHSLAB_THREADS must be a positive integer");
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw StageError(StageError::Kind::Resource, "output", "cannot write " + path.string());
}

int exit_for(StageError::Kind k) {
  switch (k) {
    case StageError::Kind::Usage: return kUsage;
    case StageError::Kind::Resource: return kResource;
    case StageError::Kind::Internal: return kFail;
  }
  return kFail;
}

}  // namespace

int main(int argc, char** argv) {
  hhslab::RunConfig c;
  std::string out_dir;

  CLI::App app{"Hierarchically hyperbolic structures of graph products of cyclic groups"};
  app.set_version_flag("--version", std::string(hhslab::kToolName) + " " + hhslab::kVersion);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  auto* g = app.add_option_group("common");
  g->add_option("--graph", c.graph, "graph file (.ggp)");
  g->add_option("--radius", c.radius, "ball radius")->check(CLI::NonNegativeNumber);
  g->add_option("--seed", c.seed, "seed for every sampled computation");
  g->add_option("--threshold-s", c.threshold_s, "distance-formula threshold s");
  g->add_option("--contraction-A", c.contraction_a, "contraction constant A")
      ->check(CLI::Range(0.0, 1e9));
  g->add_option("--budget", c.budget, "maximum ball size");
  g->add_option("--out", out_dir, "directory for JSON/DOT/CSV artifacts");

  auto add = [&](const std::string& name, const std::string& help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  add("ball", "geodesic ball of the Cayley graph (DOT)");
  add("walls", "walls meeting the ball (CSV)");
  add("contact", "contact graph and its hyperbolicity (DOT)");
  add("domains", "domains, types and factor boundedness (CSV)");
  add("restructure", "unbounded-products restructuring");
  add("cone", "coned-off space (DOT)")->add_option("--space", c.space, "cayley|contact|ts|original|largest|coset");
  add("largest", "largest-acylindrical-action graph compared to the others");
  auto* cl = add("classify", "elliptic/loxodromic verdict for a word");
  cl->add_option("word", c.words, "group element")->required()->expected(1);
  cl->add_option("--space", c.space, "cayley|contact|ts|original|largest|coset");
  add("check-axioms", "empirical axiom constants")
      ->add_option("--structure", c.structure, "original|unbounded-products");
  auto* df = add("distance-formula", "two-sided distance-formula fit (CSV)");
  df->add_option("--structure", c.structure, "original|unbounded-products");
  df->add_option("--pairs", c.pairs, "sampled pairs");
  add("contracting", "contraction vs bounded projections along an axis")
      ->add_option("word", c.words, "group element")->required()->expected(1);
  add("stability", "Morse / bounded projections / quasi-isometric embedding tri-test")
      ->add_option("gens", c.words, "generators")->required()->expected(1, 64);
  auto* rs = add("random-subgroups", "stability frequency of random-walk subgroups");
  rs->add_option("--k", c.k, "generators per subgroup");
  rs->add_option("--steps", c.steps, "random-walk length n");
  rs->add_option("--trials", c.trials, "trials");
  add("pentagon-report", "golden pentagon pipeline");
  add("square-report", "golden square pipeline");
  add("f2-report", "golden free-group pipeline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (c.command == "f2-report" && app.get_option_group("common")->get_option("--radius")->count() == 0)
    c.radius = 8;

  try {
    unsigned threads = thread_count();
    hhslab::Report rep = hhslab::run_report(c, threads);
    std::string doc = rep.to_json();
    std::cout << doc;
    if (!out_dir.empty()) {
      std::error_code ec;
      fs::create_directories(out_dir, ec);
      if (ec) throw StageError(StageError::Kind::Resource, "output", ec.message());
      write_file(fs::path(out_dir) / (c.command + ".json"), doc);
      for (const auto& a : rep.extra) write_file(fs::path(out_dir) / a.name, a.content);
    }
    return rep.pass ? kPass : kFail;
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return kFail;
  }
}
