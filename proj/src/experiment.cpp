#include "ncsync/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "json.hpp"

namespace ncsync {

void SweepConfig::validate() const {
  if (node_sizes.empty() || pe_values.empty() || radius_grid.empty()) {
    throw std::invalid_argument("sweep config: node_sizes, pe_values and radius_grid must be nonempty");
  }
  for (int n : node_sizes) {
    if (n < 2 || n > kMaxNodes) throw std::invalid_argument(fmt::format("sweep config: bad node size {}", n));
  }
  for (double pe : pe_values) {
    if (!(pe >= 0.0 && pe <= 1.0)) throw std::invalid_argument(fmt::format("sweep config: bad pe {}", pe));
  }
  for (double r : radius_grid) {
    if (!(r > 0.0) || r > std::sqrt(2.0) + 1e-9) {
      throw std::invalid_argument(fmt::format("sweep config: radius {} outside (0, sqrt(2)]", r));
    }
  }
  if (samples_per_cell < 1) throw std::invalid_argument("sweep config: samples_per_cell must be >= 1");
  if (!(degree_bucket_width > 0.0)) throw std::invalid_argument("sweep config: degree_bucket_width must be > 0");
  if (payload_len < 1) throw std::invalid_argument("sweep config: payload_len must be >= 1");
  if (max_rejections < 0) throw std::invalid_argument("sweep config: max_rejections must be >= 0");
}

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

SweepConfig sweep_config_from_json(const std::string& text) {
  SweepConfig cfg;
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("sweep config: expected a JSON object");
    if (j.contains("node_sizes")) cfg.node_sizes = j["node_sizes"].get<std::vector<int>>();
    if (j.contains("pe_values")) cfg.pe_values = j["pe_values"].get<std::vector<double>>();
    if (j.contains("radius_grid")) cfg.radius_grid = j["radius_grid"].get<std::vector<double>>();
    if (j.contains("samples_per_cell")) cfg.samples_per_cell = j["samples_per_cell"].get<int>();
    if (j.contains("root_seed")) cfg.root_seed = j["root_seed"].get<std::uint64_t>();
    if (j.contains("degree_bucket_width")) cfg.degree_bucket_width = j["degree_bucket_width"].get<double>();
    if (j.contains("payload_len")) cfg.payload_len = j["payload_len"].get<std::size_t>();
    if (j.contains("max_rejections")) cfg.max_rejections = j["max_rejections"].get<int>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("sweep config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  try {
    return path.extension() == ".toml" ? sweep_config_from_toml(text) : sweep_config_from_json(text);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

double degree_bucket(const Rational& avg_degree, double width) {
  const double idx = std::floor(static_cast<double>(avg_degree.num) /
                                (static_cast<double>(avg_degree.den) * width));
  return idx * width;
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NCSYNC_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

namespace {

struct Cell {
  int n;
  int radius_index;
  double radius;
};

template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next.store(count);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::optional<Topology> draw_sample(const SweepConfig& cfg, const Cell& cell, int sample) {
  Rng rng(derive_seed(cfg.root_seed, {static_cast<std::uint64_t>(cell.n),
                                      static_cast<std::uint64_t>(cell.radius_index),
                                      static_cast<std::uint64_t>(sample), 0}));
  try {
    return sample_connected_geometric(cell.n, cell.radius, rng, cfg.max_rejections);
  } catch (const GenerationError&) {
    return std::nullopt;
  }
}

// Runs every (pe, scheme) combination on one topology sample.
std::vector<SampleRow> simulate_sample(const SweepConfig& cfg, const Cell& cell, int sample,
                                       const Topology& t) {
  const auto n = static_cast<std::uint64_t>(cell.n);
  const auto ri = static_cast<std::uint64_t>(cell.radius_index);
  const auto si = static_cast<std::uint64_t>(sample);
  Rng store_rng(derive_seed(cfg.root_seed, {n, ri, si, 1}));
  const BlockStore store = BlockStore::random(t.size(), cfg.payload_len, store_rng);
  const Rational d = average_degree(t);

  std::vector<SampleRow> rows;
  for (std::size_t p = 0; p < cfg.pe_values.size(); ++p) {
    SampleRow row;
    row.n = cell.n;
    row.radius_index = cell.radius_index;
    row.sample = sample;
    row.pe_index = static_cast<int>(p);
    row.pe = cfg.pe_values[p];
    row.avg_degree = d;
    row.bucket = degree_bucket(d, cfg.degree_bucket_width);
    for (Scheme s : kAllSchemes) {
      SimConfig sc;
      sc.scheme = s;
      sc.pe = cfg.pe_values[p];
      sc.payload_len = cfg.payload_len;
      sc.record_events = false;
      sc.seed = derive_seed(cfg.root_seed, {n, ri, si, 2, p, static_cast<std::uint64_t>(s)});
      const SimResult r = run(t, sc, store);
      row.runs[static_cast<std::size_t>(s)] = SchemeRun{r.slots, r.converged, r.op_count, r.idle_turns};
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

SweepSamples run_samples(const SweepConfig& cfg) {
  cfg.validate();
  const int workers = worker_count(cfg.threads);

  std::vector<Cell> cells;
  for (int n : cfg.node_sizes) {
    for (std::size_t r = 0; r < cfg.radius_grid.size(); ++r) {
      cells.push_back({n, static_cast<int>(r), cfg.radius_grid[r]});
    }
  }

  // A cell whose first sample already exhausts the rejection cap is skipped
  // outright instead of paying the cap once per sample.
  std::vector<char> cell_ok(cells.size(), 1);
  parallel_for(cells.size(), workers, [&](std::size_t c) {
    if (!draw_sample(cfg, cells[c], 0)) cell_ok[c] = 0;
  });

  std::vector<std::pair<std::size_t, int>> items;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (!cell_ok[c]) continue;
    for (int s = 0; s < cfg.samples_per_cell; ++s) items.emplace_back(c, s);
  }

  std::vector<std::vector<SampleRow>> results(items.size());
  std::vector<char> item_ok(items.size(), 1);
  parallel_for(items.size(), workers, [&](std::size_t i) {
    const auto& [c, s] = items[i];
    const auto t = draw_sample(cfg, cells[c], s);
    if (!t) {
      item_ok[i] = 0;
      return;
    }
    results[i] = simulate_sample(cfg, cells[c], s, *t);
  });
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!item_ok[i]) cell_ok[items[i].first] = 0;
  }

  SweepSamples out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!cell_ok[items[i].first]) continue;
    for (auto& row : results[i]) out.rows.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (!cell_ok[c]) out.empty_cells.emplace_back(cells[c].n, cells[c].radius);
  }
  return out;
}

std::vector<ExperimentRecord> aggregate(std::span<const SampleRow> rows) {
  struct Acc {
    int total = 0;
    int converged = 0;
    double slots = 0.0;
    double ops = 0.0;
    int rpg_count = 0;
    double rpg = 0.0;
  };
  using Key = std::tuple<int, int, double, double>;
  std::map<Key, Acc> groups;
  for (const auto& row : rows) {
    const SchemeRun& base = row.run(Scheme::UDbs);
    for (Scheme s : kAllSchemes) {
      Acc& acc = groups[Key{static_cast<int>(s), row.n, row.pe, row.bucket}];
      const SchemeRun& r = row.run(s);
      ++acc.total;
      if (!r.converged) continue;
      ++acc.converged;
      acc.slots += r.slots;
      acc.ops += static_cast<double>(r.ops);
      if (s != Scheme::UDbs && base.converged) {
        ++acc.rpg_count;
        acc.rpg += static_cast<double>(base.slots) / static_cast<double>(r.slots);
      }
    }
  }
  std::vector<ExperimentRecord> out;
  out.reserve(groups.size());
  for (const auto& [key, acc] : groups) {
    ExperimentRecord rec;
    rec.scheme = static_cast<Scheme>(std::get<0>(key));
    rec.n = std::get<1>(key);
    rec.pe = std::get<2>(key);
    rec.degree_bucket = std::get<3>(key);
    rec.n_samples = acc.total;
    rec.convergence_rate = static_cast<double>(acc.converged) / acc.total;
    if (acc.converged > 0) {
      rec.mean_slots = acc.slots / acc.converged;
      rec.mean_ops = acc.ops / acc.converged;
    }
    if (rec.scheme != Scheme::UDbs && acc.rpg_count > 0) rec.mean_rpg = acc.rpg / acc.rpg_count;
    out.push_back(rec);
  }
  return out;
}

std::vector<ExperimentRecord> run_sweep(const SweepConfig& cfg) { return aggregate(run_samples(cfg).rows); }

double compute_sd(std::span<const int> slots) {
  if (slots.empty()) throw std::invalid_argument("compute_sd: no samples");
  const double sum = std::accumulate(slots.begin(), slots.end(), 0.0);
  return sum / static_cast<double>(slots.size());
}

double compute_gd(std::span<const std::pair<int, int>> uncoded_coded) {
  if (uncoded_coded.empty()) throw std::invalid_argument("compute_gd: no samples");
  double sum = 0.0;
  for (const auto& [uncoded, coded] : uncoded_coded) {
    if (coded < 1) throw std::invalid_argument("compute_gd: coded slot count must be >= 1");
    sum += static_cast<double>(uncoded) / static_cast<double>(coded);
  }
  return sum / static_cast<double>(uncoded_coded.size());
}

namespace {

std::string shortest(double v) { return fmt::format("{}", v); }

std::string bucket_text(double v) {
  std::string s = shortest(v);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string fixed6(const std::optional<double>& v) { return v ? fmt::format("{:.6f}", *v) : std::string{}; }

}  // namespace

std::string format_csv(std::span<const ExperimentRecord> records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{},{},{},{:.6f}\n", scheme_name(r.scheme), r.n, shortest(r.pe),
                       bucket_text(r.degree_bucket), r.n_samples, fixed6(r.mean_slots), fixed6(r.mean_rpg),
                       fixed6(r.mean_ops), r.convergence_rate);
  }
  return out;
}

void write_csv(std::span<const ExperimentRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write CSV file " + path.string());
  out << format_csv(records);
  if (!out) throw std::runtime_error("write failed for CSV file " + path.string());
}

std::string format_records_json(std::span<const ExperimentRecord> records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["scheme"] = scheme_name(r.scheme);
    j["n"] = r.n;
    j["pe"] = r.pe;
    j["degree_bucket"] = r.degree_bucket;
    j["n_samples"] = r.n_samples;
    j["mean_slots"] = r.mean_slots ? nlohmann::ordered_json(*r.mean_slots) : nlohmann::ordered_json();
    j["mean_rpg"] = r.mean_rpg ? nlohmann::ordered_json(*r.mean_rpg) : nlohmann::ordered_json();
    j["mean_ops"] = r.mean_ops ? nlohmann::ordered_json(*r.mean_ops) : nlohmann::ordered_json();
    j["convergence_rate"] = r.convergence_rate;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

double bootstrap_lower_bound(std::span<const double> values, double confidence, int resamples,
                             std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("bootstrap: no samples");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("bootstrap: confidence in (0,1)");
  if (resamples < 1) throw std::invalid_argument("bootstrap: resamples >= 1");
  Rng rng(seed);
  const std::size_t n = values.size();
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto& m : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += values[static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n))];
    }
    m = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const auto k = static_cast<std::size_t>(std::floor((1.0 - confidence) * static_cast<double>(resamples)));
  return means[std::min(k, means.size() - 1)];
}

}  // namespace ncsync
