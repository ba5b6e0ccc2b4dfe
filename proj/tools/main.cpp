#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bosonq/circuit.hpp"
#include "bosonq/experiment.hpp"
#include "bosonq/sim.hpp"

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bosonq::ConfigError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw bosonq::ConfigError("failed writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace bosonq;

  CLI::App app{"Compile truncated-boson evolutions to qubit circuits, simulate them under "
               "configurable noise, and estimate fidelities"};
  std::string config_path;
  std::string kind_name;
  std::vector<double> epsilon;
  std::vector<std::size_t> steps;
  std::string scheme_name;
  std::string noise_name;
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  std::string fidelity_name;
  bool post_select = true;
  bool mitigate = true;
  int opt_level = 2;
  std::string out_path;
  std::string qasm_path;
  std::string dat_path;

  app.add_option("--config", config_path, "key = value config file (flags override it)");
  app.add_option("--kind", kind_name,
                 "sm-squeeze-2exc | sm-squeeze-4exc | beam-splitter | tm-squeeze");
  app.add_option("--epsilon", epsilon, "evolution parameter sweep")->delimiter(',');
  app.add_option("--steps", steps, "trotter step sweep (first-order scheme)")->delimiter(',');
  app.add_option("--scheme", scheme_name, "exact | first-order | symmetric");
  app.add_option("--noise", noise_name, "ideal | santiago | casablanca");
  app.add_option("--shots", shots, "shots per executed circuit");
  app.add_option("--seed", seed, "base seed; row i uses seed + i");
  app.add_option("--fidelity", fidelity_name, "p0 | tomography | analytic");
  app.add_option("--post-select", post_select, "restrict counts to codewords (true/false)");
  app.add_option("--mitigate", mitigate, "invert readout confusion (true/false)");
  app.add_option("--opt-level", opt_level, "circuit optimization level 0-2");
  app.add_option("--out", out_path, "write CSV here instead of stdout");
  app.add_option("--dump-qasm", qasm_path, "write the first row's circuit as OpenQASM 2.0");
  app.add_option("--dat", dat_path, "also write a whitespace-separated sweep mirror");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = parse_config_file(config_path);
    if (app.count("--kind")) cfg.kind = kind_from_string(kind_name);
    if (app.count("--epsilon")) cfg.epsilon = epsilon;
    if (app.count("--steps")) cfg.steps = steps;
    if (app.count("--scheme")) cfg.scheme = scheme_from_string(scheme_name);
    if (app.count("--noise")) {
      cfg.noise = noise_preset(noise_name);
      cfg.noise_label = noise_name;
    }
    if (app.count("--shots")) cfg.shots = shots;
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--fidelity")) cfg.fidelity = fidelity_from_string(fidelity_name);
    if (app.count("--post-select")) cfg.post_select = post_select;
    if (app.count("--mitigate")) cfg.mitigate = mitigate;
    if (app.count("--opt-level")) cfg.opt_level = opt_level;
    cfg.validate();

    const std::vector<ResultRow> rows = run_experiment(cfg);
    const std::string csv = emit_csv(rows);
    if (out_path.empty()) {
      std::cout << csv;
    } else {
      write_file(out_path, csv);
    }
    if (!dat_path.empty()) write_file(dat_path, emit_dat(rows));
    if (!qasm_path.empty()) {
      Circuit first = row_circuit(cfg, cfg.epsilon.front(), cfg.steps.front());
      first.measure_all();
      write_file(qasm_path, to_qasm(first));
    }
    return 0;
  } catch (const BackendCapError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
