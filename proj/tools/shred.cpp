// Command-line entry point: sample, measure, experiment, render-data.
// Exit codes: 0 success, 1 assertion or inequality violation, 2 usage.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "shred/causal_map.hpp"
#include "shred/codec.hpp"
#include "shred/errors.hpp"
#include "shred/excursion.hpp"
#include "shred/experiments.hpp"
#include "shred/heightvar.hpp"
#include "shred/io.hpp"
#include "shred/metrics.hpp"
#include "shred/steps.hpp"

namespace fs = std::filesystem;
using namespace shred;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

// Open interval (1, 2) for alpha.
const CLI::Validator kAlpha(
    [](const std::string& s) {
      double a = 0.0;
      try {
        a = std::stod(s);
      } catch (...) {
        return std::string("alpha must be a number");
      }
      return (a > 1.0 && a < 2.0) ? std::string() : std::string("alpha must lie in (1, 2)");
    },
    "in (1,2)", "alpha");

struct Common {
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out = "out";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Run seed; per-trial streams are derived from it")
      ->capture_default_str();
  app->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
}

nlohmann::json run_config(const CLI::App& sub) {
  nlohmann::json j;
  j["command"] = sub.get_name();
  for (const auto* opt : sub.get_options()) {
    if (opt->get_name() == "--help" || opt->get_name() == "--config") continue;
    const auto res = opt->results();
    std::string name = opt->get_name();
    while (!name.empty() && name.front() == '-') name.erase(name.begin());
    if (res.empty()) {
      j["options"][name] = opt->get_default_str();
    } else if (res.size() == 1) {
      j["options"][name] = res.front();
    } else {
      j["options"][name] = res;
    }
  }
  return j;
}

// ---------------------------------------------------------------------------

struct SampleArgs {
  Common c;
  double alpha = 1.5;
  std::int64_t n = 1000;
  std::int64_t count = 1;
};

int cmd_sample(const SampleArgs& a, const nlohmann::json& rc) {
  const StepLaw law = build_step_law(a.alpha);
  const fs::path dir(a.c.out);
  fs::create_directories(dir);
  for (std::int64_t i = 0; i < a.count; ++i) {
    Rng rng(a.c.seed, static_cast<std::uint64_t>(i), StreamTag::kWalk);
    WalkFile w{a.alpha, a.c.seed, sample_excursion(law, a.n, rng)};
    std::ostringstream os;
    write_walk_file(os, w);
    const std::string name =
        a.count == 1 ? "walk.txt" : "walk_" + std::to_string(i) + ".txt";
    write_text_file(dir / name, os.str());
  }
  nlohmann::json law_json = law.to_json();
  write_text_file(dir / "law.json", law_json.dump(2) + "\n");
  write_manifest(dir, {{"run_config", rc}, {"law", law_json}});
  std::cout << "wrote " << a.count << " walk file(s) to " << dir.string() << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct MeasureArgs {
  Common c;
  std::string walk;
  std::int64_t pairs = 100;
  std::int64_t sources = 10;
  bool all_pairs = false;
};

int cmd_measure(const MeasureArgs& a, const nlohmann::json& rc) {
  std::ifstream in(a.walk);
  if (!in) throw MalformedConfig("cannot open walk file " + a.walk);
  const WalkFile w = read_walk_file(in);
  const auto m = build_map(w.walk);
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  if (a.all_pairs) {
    pairs = all_coded_pairs(m);
  } else {
    Rng rng(a.c.seed, 0, StreamTag::kPairs);
    const auto sources = static_cast<std::size_t>(std::max<std::int64_t>(1, std::min(a.sources, a.pairs)));
    const auto per = static_cast<std::size_t>(a.pairs) / sources;
    pairs = sample_coded_pairs(m, sources, per, rng);
    while (pairs.size() < static_cast<std::size_t>(a.pairs)) {
      pairs.push_back(sample_coded_pairs(m, 1, 1, rng).front());
    }
  }
  const auto rep = discrete_sandwich(w.walk, m, pairs, w.alpha);
  Table t{"pairs", {"u", "v", "D", "Dup", "Ddown", "Dstar", "V"}};
  for (const auto& r : rep.rows) {
    t.add({cell(r.u), cell(r.v), cell(r.d), cell(r.d_up), cell(r.d_down), cell(r.dstar),
           cell(r.v_dist)});
  }
  const fs::path dir(a.c.out);
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "pairs.csv", std::ios::binary);
    write_csv(out, t);
  }
  write_manifest(dir, {{"run_config", rc}, {"walk_sha256", sha256_file(a.walk)}});
  std::cout << "measured " << rep.rows.size() << " pairs; sandwich holds\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
  Common c;
  std::string suite;
  double alpha = 1.5;
  std::vector<std::int64_t> ns;
  std::int64_t trials = -1;
  std::int64_t pairs = -1;
  std::int64_t maps = -1;
  std::int64_t centers = -1;
  std::int64_t instances = -1;
  std::int64_t samples = -1;
  std::int64_t mc_trials = -1;
  double beta = 0.55;
  int k_min = 1;
  int k_max = 10;
};

template <typename T>
void override_if(T& field, std::int64_t v) {
  if (v >= 0) field = static_cast<T>(v);
}

Report run_experiment(const ExperimentArgs& a) {
  const auto& s = a.suite;
  if (s == "counterexample") {
    return counterexample_suite({a.beta, a.k_min, a.k_max});
  }
  if (s == "gap") {
    GapConfig g;
    g.alpha = a.alpha;
    if (!a.ns.empty()) g.ns = a.ns;
    override_if(g.trials, a.trials);
    override_if(g.pairs, a.pairs);
    g.sources = std::min(g.sources, g.pairs);
    g.seed = a.c.seed;
    g.jobs = a.c.jobs;
    return gap_study(g);
  }
  if (s == "dimension") {
    DimensionConfig d;
    d.alpha = a.alpha;
    if (!a.ns.empty()) d.n = a.ns.front();
    override_if(d.maps, a.maps);
    override_if(d.centers, a.centers);
    d.seed = a.c.seed;
    d.jobs = a.c.jobs;
    return dimension_fit(d);
  }
  if (s == "identify") {
    IdentifyConfig d;
    d.alpha = a.alpha;
    if (!a.ns.empty()) d.n = a.ns.front();
    override_if(d.maps, a.maps);
    d.seed = a.c.seed;
    d.jobs = a.c.jobs;
    return identification_probe(d);
  }
  if (s == "scaling") {
    ScalingConfig d;
    d.alpha = a.alpha;
    if (!a.ns.empty()) d.ns = a.ns;
    override_if(d.trials, a.trials);
    d.seed = a.c.seed;
    d.jobs = a.c.jobs;
    return scaling_selfconsistency(d);
  }
  if (s == "words") {
    WordsConfig d;
    d.alpha = a.alpha;
    if (!a.ns.empty()) d.walk_length = a.ns.front();
    override_if(d.instances, a.instances);
    override_if(d.tail_samples, a.samples);
    override_if(d.bad_trials, a.mc_trials);
    d.seed = a.c.seed;
    d.jobs = a.c.jobs;
    return words_suite(d);
  }
  throw std::logic_error("unreachable: suite validated by the parser");
}

int cmd_experiment(const ExperimentArgs& a, const nlohmann::json& rc) {
  Report rep = run_experiment(a);
  rep.config["run_config"] = rc;
  const fs::path dir(a.c.out);
  write_report(dir, rep);
  write_manifest(dir, {{"run_config", rc}});
  int hard_failures = 0;
  for (const auto& c : rep.checks) {
    const bool ok = c["passed"].get<bool>();
    std::cout << (ok ? "PASS " : "FAIL ") << c["name"].get<std::string>()
              << (c["calibration"].get<bool>() ? " (calibration)" : "") << "\n";
    if (!ok && !c["calibration"].get<bool>()) ++hard_failures;
  }
  return hard_failures ? kViolation : kOk;
}

// ---------------------------------------------------------------------------

struct RenderArgs {
  Common c;
  std::string walk;
  std::vector<std::int64_t> pair;
};

int cmd_render(const RenderArgs& a, const nlohmann::json& rc) {
  std::ifstream in(a.walk);
  if (!in) throw MalformedConfig("cannot open walk file " + a.walk);
  const WalkFile w = read_walk_file(in);
  const auto& e = w.walk;
  const auto m = build_map(e);
  const fs::path dir(a.c.out);
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "vertices.json", std::ios::binary);
    write_vertices_json(out, m);
  }
  {
    std::ofstream out(dir / "edges.csv", std::ios::binary);
    write_edges_csv(out, m);
  }
  Table walk_t{"walk", {"k", "height"}};
  for (std::int64_t k = 0; k <= e.n() + 1; ++k) walk_t.add({cell(k), cell(e.height(k))});
  Table slit_t{"slits", {"x", "bottom", "top", "blocking"}};
  const SlitList sl = slits_of(e);
  for (const auto& s : sl.slits) {
    slit_t.add({cell(s.x), cell(s.bottom), cell(s.top), cell(s.blocking())});
  }
  for (const auto* t : {&walk_t, &slit_t}) {
    std::ofstream out(dir / (t->name + ".csv"), std::ios::binary);
    write_csv(out, *t);
  }
  nlohmann::json extra = {{"run_config", rc},
                          {"n", e.n()},
                          {"circumference", sl.circumference},
                          {"vertices", m.vertex_count()},
                          {"edges", m.graph().edge_count()},
                          {"slits", sl.slits.size()}};
  if (a.pair.size() == 2) {
    const auto u = a.pair[0], v = a.pair[1];
    const auto r = v_distance(sl, static_cast<double>(u) + 0.5, static_cast<double>(v) + 0.5,
                              e.coded_height(u), e.coded_height(v), VMode::kCylinder, true);
    std::ofstream out(dir / "witness.csv", std::ios::binary);
    write_witness_csv(out, r);
    extra["witness"] = {{"u", u}, {"v", v}, {"V", r.value}};
  }
  write_manifest(dir, extra);
  std::cout << "wrote embedding data to " << dir.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal random planar maps and stable shredded spheres"};
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.require_subcommand(1);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Sample conditioned walks");
  sample->add_option("--alpha", sa.alpha, "Stable index")->check(kAlpha)->capture_default_str();
  sample->add_option("--n", sa.n, "Walk size")->check(CLI::PositiveNumber)->capture_default_str();
  sample->add_option("--count", sa.count, "Number of walks")->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(sample, sa.c);

  MeasureArgs ma;
  auto* measure = app.add_subcommand("measure", "Measure D, D^up, D^down, D*, V on pairs");
  measure->add_option("--walk", ma.walk, "shredwalk file")->required()->check(CLI::ExistingFile);
  measure->add_option("--pairs", ma.pairs, "Number of sampled pairs")->check(CLI::PositiveNumber)
      ->capture_default_str();
  measure->add_option("--sources", ma.sources, "Distinct sources among the pairs")
      ->check(CLI::PositiveNumber)->capture_default_str();
  measure->add_flag("--all-pairs", ma.all_pairs, "Every pair of coded vertices");
  add_common(measure, ma.c);

  ExperimentArgs ea;
  auto* exp = app.add_subcommand("experiment", "Run an experiment suite");
  exp->add_option("suite", ea.suite, "gap | dimension | identify | scaling | counterexample | words")
      ->required()
      ->check(CLI::IsMember({"gap", "dimension", "identify", "scaling", "counterexample", "words"}));
  exp->add_option("--alpha", ea.alpha, "Stable index")->check(kAlpha)->capture_default_str();
  exp->add_option("--n", ea.ns, "Sizes (comma separated); the first is used by single-n suites")
      ->delimiter(',');
  exp->add_option("--trials", ea.trials, "Trials per n (gap, scaling)");
  exp->add_option("--pairs", ea.pairs, "Pairs per trial (gap)");
  exp->add_option("--maps", ea.maps, "Maps (dimension, identify)");
  exp->add_option("--centers", ea.centers, "Ball centers in total (dimension)");
  exp->add_option("--instances", ea.instances, "Exploration-bound instances (words)");
  exp->add_option("--samples", ea.samples, "Underjump samples per alpha (words)");
  exp->add_option("--mc-trials", ea.mc_trials, "Monte Carlo trials per m (words)");
  exp->add_option("--beta", ea.beta, "Counterexample beta in [1/2, 1]")
      ->check(CLI::Range(0.5, 1.0))->capture_default_str();
  exp->add_option("--K", ea.k_max, "Counterexample depth")->check(CLI::Range(1, 14))
      ->capture_default_str();
  exp->add_option("--K-min", ea.k_min, "Smallest counterexample depth")->check(CLI::Range(1, 14))
      ->capture_default_str();
  add_common(exp, ea.c);

  RenderArgs ra;
  auto* render = app.add_subcommand("render-data", "Export embedding geometry for plots");
  render->add_option("--walk", ra.walk, "shredwalk file")->required()->check(CLI::ExistingFile);
  render->add_option("--pair", ra.pair, "Two walk indices u,v for a V witness")->delimiter(',')
      ->expected(2);
  add_common(render, ra.c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*sample) return cmd_sample(sa, run_config(*sample));
    if (*measure) return cmd_measure(ma, run_config(*measure));
    if (*exp) return cmd_experiment(ea, run_config(*exp));
    if (*render) return cmd_render(ra, run_config(*render));
  } catch (const SandwichViolation& e) {
    std::cerr << "violation: " << e.what() << "\n";
    return kViolation;
  } catch (const InequalityViolation& e) {
    std::cerr << "violation: " << e.what() << "\n";
    return kViolation;
  } catch (const MalformedConfig& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kUsage;
}
