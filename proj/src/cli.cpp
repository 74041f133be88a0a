#include "ncsync/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "ncsync/experiment.hpp"
#include "ncsync/sim.hpp"
#include "ncsync/topology.hpp"

namespace ncsync::cli {
namespace {

constexpr int kUsageError = 2;

struct SimulateArgs {
  std::string topology;
  std::string scheme = "c-dbs";
  double pe = 0.0;
  std::uint64_t seed = 1;
  int max_slots = 0;
  std::size_t payload_len = BlockStore::kDefaultPayloadLen;
  std::string trace;
  std::string out;
};

struct SweepArgs {
  std::string config;
  std::string out;
  std::string json;
};

struct FixtureArgs {
  std::string out = ".";
};

int do_simulate(const SimulateArgs& a, std::ostream& out) {
  const Topology t = load_topology(a.topology);
  if (!t.connected()) throw std::invalid_argument(a.topology + ": topology is disconnected");
  SimConfig cfg;
  cfg.scheme = *parse_scheme(a.scheme);
  cfg.pe = a.pe;
  cfg.seed = a.seed;
  cfg.max_slots = a.max_slots;
  cfg.payload_len = a.payload_len;
  const SimResult r = run(t, cfg);
  if (!a.trace.empty()) write_trace(r.events, a.trace);
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!f) throw std::runtime_error("cannot write " + a.out);
    f << "{\"scheme\":\"" << scheme_name(cfg.scheme) << "\",\"n\":" << t.size() << ",\"pe\":" << cfg.pe
      << ",\"seed\":" << cfg.seed << ",\"slots\":" << r.slots
      << ",\"converged\":" << (r.converged ? "true" : "false") << ",\"op_count\":" << r.op_count << "}\n";
  }
  out << "slots=" << r.slots << " converged=" << (r.converged ? "true" : "false") << '\n';
  out << "scheme=" << scheme_name(cfg.scheme) << " n=" << t.size() << " op_count=" << r.op_count << '\n';
  return 0;
}

int do_sweep(const SweepArgs& a, std::ostream& out) {
  const SweepConfig cfg = load_sweep_config(a.config);
  const SweepSamples samples = run_samples(cfg);
  const auto records = aggregate(samples.rows);
  write_csv(records, a.out);
  if (!a.json.empty()) {
    std::ofstream f(a.json);
    if (!f) throw std::runtime_error("cannot write " + a.json);
    f << format_records_json(records) << '\n';
  }
  out << "samples=" << samples.rows.size() << " records=" << records.size()
      << " empty_cells=" << samples.empty_cells.size() << " -> " << a.out << '\n';
  for (const auto& [n, radius] : samples.empty_cells) {
    out << "empty cell: n=" << n << " radius=" << radius << '\n';
  }
  return 0;
}

int do_fixtures(const FixtureArgs& a, std::ostream& out) {
  const std::filesystem::path dir(a.out);
  std::filesystem::create_directories(dir);
  const std::pair<const char*, Topology> fixtures[] = {
      {"path3.json", fixtures::path(3)},  {"k3.json", fixtures::complete(3)},
      {"k4.json", fixtures::complete(4)}, {"k5.json", fixtures::complete(5)},
      {"star5.json", fixtures::star(5)},
  };
  for (const auto& [name, t] : fixtures) {
    save_topology(t, dir / name);
    out << (dir / name).string() << '\n';
  }
  return 0;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"All-to-all broadcast data synchronization simulator (uncoded and XOR-coded schemes)", "ncsync"};
  app.require_subcommand(1, 1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one synchronization on a topology file");
  simulate->add_option("--topology", sim.topology, "Topology JSON file {n, edges, positions}")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--scheme", sim.scheme, "Scheme: u-dbs, c-dbs or c-dbs-ns")
      ->check(CLI::IsMember({"u-dbs", "c-dbs", "c-dbs-ns"}))
      ->capture_default_str();
  simulate->add_option("--pe", sim.pe, "Per-hop packet error rate in [0, 1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Random seed for payloads and losses")->capture_default_str();
  simulate->add_option("--max-slots", sim.max_slots, "Slot cap (0 = 10*N^2)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  simulate->add_option("--payload-len", sim.payload_len, "Payload bytes per block")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--trace", sim.trace, "Write the slot trace as JSON lines");
  simulate->add_option("--out", sim.out, "Write a JSON summary");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep and write the results CSV");
  sweep->add_option("--config", sw.config, "Sweep config (.toml or .json)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", sw.out, "Output CSV path")->required();
  sweep->add_option("--json", sw.json, "Optional JSON mirror of the records");
  sweep->footer("Worker threads: NCSYNC_THREADS (default: available cores).");

  FixtureArgs fx;
  auto* fixtures = app.add_subcommand("fixtures", "Write the built-in test topologies as JSON");
  fixtures->add_option("--out", fx.out, "Output directory")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kUsageError;
  }

  try {
    if (simulate->parsed()) return do_simulate(sim, out);
    if (sweep->parsed()) return do_sweep(sw, out);
    if (fixtures->parsed()) return do_fixtures(fx, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsageError;
}

}  // namespace ncsync::cli
