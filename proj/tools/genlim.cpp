// genlim: command-line front end for runs, checks, adversaries and
// dimension searches. Records go to --out (default stdout), one JSON object
// per line.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "genlim/harness.hpp"

using namespace genlim;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> horizon;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON run configuration");
  app->add_option("--seed", c.seed, "seed for permuted schedules");
  app->add_option("--horizon", c.horizon, "number of rounds");
  app->add_option("--out", c.out, "output file (default: stdout)");
}

RunConfig load(const Common& c) {
  RunConfig cfg;
  if (!c.config.empty()) {
    std::ifstream in(c.config);
    if (!in) throw ValidationError("cannot read config '" + c.config + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = parse_config(ss.str());
  }
  if (c.seed) cfg.seed = *c.seed;
  if (c.horizon) cfg.horizon = *c.horizon;
  return cfg;
}

/// Runs `body` with the chosen output stream; returns the process status.
template <class F>
int emit(const Common& c, F&& body) {
  if (c.out.empty()) return body(std::cout);
  std::ofstream os(c.out);
  if (!os) throw ValidationError("cannot write '" + c.out + "'");
  return body(os);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generation-in-the-limit simulator"};
  app.require_subcommand(1);

  Common run_opts, fb_opts, check_opts, adv_opts, dim_opts;

  auto* run = app.add_subcommand("run", "play one transcript (plain or exhaustive mode)");
  add_common(run, run_opts);

  auto* fb = app.add_subcommand("run-feedback", "play one transcript with queries");
  add_common(fb, fb_opts);

  auto* check = app.add_subcommand("check", "check a success criterion");
  std::string check_kind;
  check->add_option("kind", check_kind, "nonuniform | exhaustive | breadth")
      ->required()
      ->check(CLI::IsMember({"nonuniform", "exhaustive", "breadth"}));
  add_common(check, check_opts);

  auto* adv = app.add_subcommand("adversary", "run a lower-bound adversary and verify its claims");
  std::string adv_kind;
  adv->add_option("kind", adv_kind, "mq | exhaustive-lb | breadth-lb | existence-violation")
      ->required()
      ->check(CLI::IsMember({"mq", "exhaustive-lb", "breadth-lb", "existence-violation"}));
  add_common(adv, adv_opts);

  auto* dim = app.add_subcommand("dimension", "search for a dimension witness");
  std::string dim_kind, collection = "cofinite12";
  std::size_t d = 2, rounds = 0;
  Int window = 8;
  dim->add_option("kind", dim_kind, "closure | nonuniform | gnf | gf")
      ->required()
      ->check(CLI::IsMember({"closure", "nonuniform", "gnf", "gf"}));
  dim->add_option("--collection", collection, "collection name");
  dim->add_option("--d", d, "witness size (for nonuniform: the language index)");
  dim->add_option("--window", window, "moves range over [-W, W]");
  dim->add_option("--rounds", rounds, "game rounds (default: d)");
  dim->add_option("--out", dim_opts.out, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed() || fb->parsed()) {
      const Common& c = run->parsed() ? run_opts : fb_opts;
      RunConfig cfg = load(c);
      return emit(c, [&](std::ostream& os) {
        const RunResult res = fb->parsed() ? run_feedback_transcript(cfg) : run_transcript(cfg);
        write_run(os, res);
        return res.error ? 2 : 0;
      });
    }
    if (check->parsed()) {
      RunConfig cfg = load(check_opts);
      return emit(check_opts, [&](std::ostream& os) {
        run_check(check_kind, cfg, os);
        return 0;
      });
    }
    if (adv->parsed()) {
      RunConfig cfg = load(adv_opts);
      cfg.adversary = adv_kind;
      return emit(adv_opts, [&](std::ostream& os) {
        if (adv_kind == "mq") run_mq(cfg, os);
        else if (adv_kind == "existence-violation") run_existence(cfg, os);
        else run_phased(cfg, os);
        return 0;
      });
    }
    if (dim->parsed()) {
      const Collection c = build_paper_collection(collection);
      return emit(dim_opts, [&](std::ostream& os) {
        Json j;
        if (dim_kind == "nonuniform") {
          j = {{"kind", "nonuniform"},
               {"collection", collection},
               {"index", d},
               {"m", nonuniform_complexity(c, d)},
               {"bound", nonuniform_bound(c, d)}};
        } else {
          const GameBudget b{rounds ? rounds : d, window, 64};
          DimensionWitness w = dim_kind == "closure" ? closure_witness(c, d, window)
                               : dim_kind == "gnf"   ? gnf_witness(c, d, b)
                                                     : gf_witness(c, d, b);
          j = witness_json(w);
          j["collection"] = collection;
        }
        os << j.dump() << '\n';
        return 0;
      });
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
