#include "kkmass/cli/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>

namespace kkmass::cli {

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flux-integral masses and spinor identities on asymptotically flat and Kaluza-Klein ends", "kkmass"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "kkmass 0.1.0");

  std::string config_path, out_path;
  int threads = 0;
  std::uint64_t seed = 0;
  const std::pair<Task, const char*> tasks[] = {
      {Task::Mass, "flux mass on a radius ladder, extrapolated to infinity"},
      {Task::Decay, "fit the decay order of the metric perturbation"},
      {Task::VerifyIdentities, "Clifford relations, divergence identity and flux-form checks"},
      {Task::BoundaryLimit, "Witten boundary term against the flux mass"},
      {Task::Sweep, "mass over a grid of one model parameter"},
  };
  for (const auto& [task, help] : tasks) {
    CLI::App* sub = app.add_subcommand(to_string(task), help);
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_path, "write the JSON report here");
    sub->add_option("--threads", threads, "worker threads for shell quadrature")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for sampled points");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Task task = Task::Mass;
  for (const auto& [t, help] : tasks) {
    if (app.got_subcommand(to_string(t))) task = t;
  }

  RunConfig cfg;
  Report report;
  try {
    cfg = load_config(config_path, task);
    if (threads > 0) cfg.threads = threads;
    if (app.get_subcommand(to_string(task))->count("--seed") > 0) cfg.seed = seed;
    if (!out_path.empty()) cfg.output = out_path;
    report = run(cfg);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return 1;
  }

  if (!cfg.output.empty()) {
    std::ofstream file(cfg.output);
    if (!file) {
      err << "cannot write report to '" << cfg.output << "'\n";
      return 2;
    }
    file << to_json(report).dump(2) << '\n';
  }
  out << render_text(report);
  return report.passed() ? 0 : 1;
}

}  // namespace kkmass::cli
