// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Usage: acceptance [results.csv]
//   The CSV of the main Monte Carlo sweep is written to the given path
//   (default: acceptance_results.csv in the working directory).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ncsync/experiment.hpp"
#include "ncsync/nc_core.hpp"
#include "ncsync/selection.hpp"
#include "ncsync/sim.hpp"
#include "ncsync/topology.hpp"
#include "oracles.hpp"

using namespace ncsync;

namespace {

constexpr double kConfidence = 0.95;
constexpr int kBootstrapResamples = 2000;
constexpr int kMinBucketSamples = 100;

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SweepConfig main_sweep_config() {
  SweepConfig cfg;
  cfg.node_sizes = {5, 6, 7, 8, 9, 10, 11};
  cfg.pe_values = {0.0, 0.1};
  cfg.radius_grid = {0.3, 0.35, 0.4, 0.45, 0.5, 0.6, 0.7, 0.85, 1.0, 1.2, std::sqrt(2.0)};
  cfg.samples_per_cell = 1000;
  cfg.root_seed = 20211;
  cfg.degree_bucket_width = 0.5;
  return cfg;
}

std::vector<const SampleRow*> select_rows(const std::vector<SampleRow>& rows,
                                          const std::function<bool(const SampleRow&)>& keep) {
  std::vector<const SampleRow*> out;
  for (const auto& r : rows)
    if (keep(r)) out.push_back(&r);
  return out;
}

std::map<double, std::vector<const SampleRow*>> by_bucket(const std::vector<const SampleRow*>& rows) {
  std::map<double, std::vector<const SampleRow*>> out;
  for (const auto* r : rows) out[r->bucket].push_back(r);
  return out;
}

double ratio(const SampleRow& r, Scheme coded) {
  return static_cast<double>(r.run(Scheme::UDbs).slots) / r.run(coded).slots;
}

// ---------------------------------------------------------------------------

Verdict codec_oracle() {
  const auto t0 = Clock::now();
  Rng rng(1);
  int failures = 0;
  int decodable = 0;
  int undecodable = 0;
  constexpr int kTrials = 10'000;
  for (int trial = 0; trial < kTrials; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 63);
    const BlockStore store = BlockStore::random(n, 32, rng);
    std::set<int> comps;
    const int want = 1 + static_cast<int>(rng() % std::min(n - 1, 12));
    while (static_cast<int>(comps.size()) < want) comps.insert(static_cast<int>(rng() % n));
    std::vector<int> cv(comps.begin(), comps.end());
    // Alternate between exactly one unknown and at least two unknowns.
    const bool one_unknown = trial % 2 == 0 || cv.size() < 2;
    std::set<int> unknown{cv[rng() % cv.size()]};
    if (!one_unknown) {
      while (unknown.size() < 2) unknown.insert(cv[rng() % cv.size()]);
      for (int c : cv)
        if (rng() % 3 == 0) unknown.insert(c);
    }
    std::set<int> held;
    for (int b = 0; b < n; ++b)
      if (!unknown.count(b) && (comps.count(b) || rng() % 2 == 0)) held.insert(b);
    int owner = 0;
    while (unknown.count(owner)) ++owner;
    held.insert(owner);

    const KnowledgeSet k(owner, n, BlockSet::of({held.begin(), held.end()}));
    const Packet pkt = encode(BlockSet::of(cv), store);
    const Classification c = classify(pkt, k);
    if (unknown.size() == 1) {
      ++decodable;
      const auto* d = std::get_if<Decodable>(&c);
      if (d == nullptr || d->missing != *unknown.begin()) {
        ++failures;
        continue;
      }
      if (decode(pkt, k, store).payload != store.payload(*unknown.begin())) ++failures;
    } else {
      ++undecodable;
      const auto* u = std::get_if<Undecodable>(&c);
      if (u == nullptr || u->unknown_count != static_cast<int>(unknown.size())) ++failures;
    }
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 5.0,
          fmt::format("{} trials ({} one-unknown, {} multi-unknown), {} failures, {:.2f}s (limit 5s)", kTrials,
                      decodable, undecodable, failures, secs)};
}

Verdict dbs_equivalence() {
  Rng rng(2);
  int mismatches = 0;
  int comparisons = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const Topology t = sample_connected_geometric(n, 0.3 + uniform01(rng), rng);
    std::vector<KnowledgeSet> k;
    const double p = uniform01(rng);
    for (int v = 0; v < n; ++v) {
      BlockSet held = BlockSet::single(v);
      for (int b = 0; b < n; ++b)
        if (uniform01(rng) < p) held.insert(b);
      k.emplace_back(v, n, held);
    }
    oracle::Held held;
    for (const auto& ks : k) {
      const auto v = ks.held().to_vector();
      held.emplace_back(v.begin(), v.end());
    }
    const auto adj = oracle::adjacency(n, t.edges());
    for (int v = 0; v < n; ++v) {
      ++comparisons;
      if (dbs(v, k, t).beta != oracle::best_beta_full(v, held, adj)) ++mismatches;
    }
  }
  return {mismatches == 0, fmt::format("500 topologies (N<=6), {} node states, {} mismatches", comparisons, mismatches)};
}

Verdict golden_traces() {
  std::vector<std::string> problems;
  const Topology path = fixtures::path(3);
  const std::pair<Scheme, int> expected[] = {{Scheme::UDbs, 5}, {Scheme::CDbs, 4}, {Scheme::CDbsNs, 4}};
  std::string measured;
  for (const auto& [s, slots] : expected) {
    SimConfig cfg;
    cfg.scheme = s;
    const SimResult r = run(path, cfg);
    measured += fmt::format("{}={} ", scheme_name(s), r.slots);
    if (r.slots != slots || !r.converged) problems.push_back(fmt::format("path3 {}", scheme_name(s)));
  }
  for (int n = 3; n <= 5; ++n) {
    std::map<Scheme, int> slots;
    for (Scheme s : kAllSchemes) {
      SimConfig cfg;
      cfg.scheme = s;
      slots[s] = run(fixtures::complete(n), cfg).slots;
      if (slots[s] != n) problems.push_back(fmt::format("K{} {}", n, scheme_name(s)));
    }
    for (Scheme coded : {Scheme::CDbs, Scheme::CDbsNs}) {
      const std::vector<std::pair<int, int>> pairs{{slots[Scheme::UDbs], slots[coded]}};
      if (compute_gd(pairs) != 1.0) problems.push_back(fmt::format("K{} G_d {}", n, scheme_name(coded)));
    }
  }
  std::string detail = "path3: " + measured + "(want 5/4/4); K3..K5: slots=N, G_d=1.0";
  for (const auto& p : problems) detail += "; mismatch " + p;
  return {problems.empty(), detail};
}

Verdict termination(const std::vector<SampleRow>& rows) {
  std::string detail;
  bool ok = true;
  for (int n : {5, 8, 11}) {
    std::set<std::pair<int, int>> topologies;
    int bad = 0;
    int lo = 1 << 30, hi = 0;
    for (const auto& r : rows) {
      if (r.n != n || r.pe != 0.0) continue;
      topologies.insert({r.radius_index, r.sample});
      for (Scheme s : kAllSchemes) {
        const SchemeRun& run = r.run(s);
        lo = std::min(lo, run.slots);
        hi = std::max(hi, run.slots);
        if (!run.converged || run.slots < n || run.slots > n * (n - 1)) ++bad;
      }
    }
    ok = ok && bad == 0 && topologies.size() >= 1000;
    detail += fmt::format("N={}: {} topologies, slots in [{}, {}] (bound [{}, {}]), {} violations; ", n,
                          topologies.size(), lo, hi, n, n * (n - 1), bad);
  }
  return {ok, detail};
}

Verdict trend_a(const std::vector<SampleRow>& rows) {
  std::string detail;
  bool ok = true;
  int qualifying = 0;
  for (double pe : {0.0, 0.1}) {
    const auto buckets = by_bucket(select_rows(rows, [&](const SampleRow& r) { return r.n == 8 && r.pe == pe; }));
    for (const auto& [bucket, members] : buckets) {
      if (bucket > 4.0 || static_cast<int>(members.size()) < kMinBucketSamples) continue;
      ++qualifying;
      std::vector<double> diff;
      std::vector<int> u, c;
      for (const auto* r : members) {
        diff.push_back(r->run(Scheme::UDbs).slots - r->run(Scheme::CDbs).slots);
        u.push_back(r->run(Scheme::UDbs).slots);
        c.push_back(r->run(Scheme::CDbs).slots);
      }
      const double lb = bootstrap_lower_bound(diff, kConfidence, kBootstrapResamples, 1000 + qualifying);
      const bool pass = lb > 0.0;
      ok = ok && pass;
      detail += fmt::format("pe={} d={:.1f} n={}: S_U={:.2f} S_C={:.2f} lb95(U-C)={:.2f}{}; ", pe, bucket,
                            members.size(), compute_sd(u), compute_sd(c), lb, pass ? "" : " FAIL");
    }
  }
  return {ok && qualifying > 0, fmt::format("{} buckets: ", qualifying) + detail};
}

Verdict trend_b(const std::vector<SampleRow>& rows, int n) {
  const auto rows11 = select_rows(rows, [&](const SampleRow& r) { return r.n == n && r.pe == 0.1; });
  const auto buckets = by_bucket(rows11);

  std::string detail = "medium degree: ";
  bool medium_ok = false;
  int k = 0;
  for (const auto& [bucket, members] : buckets) {
    if (bucket < 3.0 || bucket > 6.0 || static_cast<int>(members.size()) < kMinBucketSamples) continue;
    std::vector<double> diff;
    double g_ns = 0.0, g_c = 0.0;
    for (const auto* r : members) {
      diff.push_back(ratio(*r, Scheme::CDbsNs) - ratio(*r, Scheme::CDbs));
      g_ns += ratio(*r, Scheme::CDbsNs);
      g_c += ratio(*r, Scheme::CDbs);
    }
    const double lb = bootstrap_lower_bound(diff, kConfidence, kBootstrapResamples, 2000 + ++k);
    medium_ok = medium_ok || lb > 0.0;
    detail += fmt::format("d={:.1f} n={} G_NS={:.3f} G_C={:.3f} lb95={:.3f}; ", bucket, members.size(),
                          g_ns / members.size(), g_c / members.size(), lb);
  }

  bool high_ok = false;
  double top = -1.0;
  for (const auto& [bucket, members] : buckets) {
    if (bucket >= n - 2 && static_cast<int>(members.size()) >= kMinBucketSamples) top = bucket;
  }
  if (top < 0) {
    detail += "no high-degree bucket with enough samples";
  } else {
    const auto& members = buckets.at(top);
    std::map<Scheme, std::vector<int>> slots;
    for (const auto* r : members)
      for (Scheme s : kAllSchemes) slots[s].push_back(r->run(s).slots);
    double lo = 1e300, hi = 0.0;
    std::string sd;
    for (Scheme s : kAllSchemes) {
      const double v = compute_sd(slots[s]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sd += fmt::format("{}={:.2f} ", scheme_name(s), v);
    }
    const double spread = (hi - lo) / lo;
    high_ok = spread <= 0.10;
    detail += fmt::format("| highest bucket d={:.1f} n={}: {}spread={:.1f}% (limit 10%)", top, members.size(), sd,
                          100.0 * spread);
  }
  return {medium_ok && high_ok, detail};
}

Verdict trend_c(const std::vector<SampleRow>& rows) {
  std::string detail;
  bool ok = true;
  for (double pe : {0.0, 0.1}) {
    const auto low = select_rows(rows, [&](const SampleRow& r) { return r.n == 11 && r.pe == pe && r.bucket <= 2.5; });
    std::vector<std::pair<int, int>> pairs, pairs_frame;
    for (const auto* r : low) {
      pairs.emplace_back(r->run(Scheme::UDbs).slots, r->run(Scheme::CDbsNs).slots);
      pairs_frame.emplace_back(r->run(Scheme::UDbs).slots + r->run(Scheme::UDbs).idle_turns,
                               r->run(Scheme::CDbsNs).slots);
    }
    if (pairs.empty()) {
      ok = false;
      detail += fmt::format("pe={}: no samples; ", pe);
      continue;
    }
    const double g = compute_gd(pairs);
    ok = ok && g >= 2.0;
    detail += fmt::format("pe={} n={}: G_NS={:.3f} (floor 2.0; with idle TDMA turns charged to U-DBS: {:.3f}); ", pe,
                          low.size(), g, compute_gd(pairs_frame));
  }
  return {ok, detail};
}

Verdict trend_d(const std::vector<SampleRow>& rows) {
  std::map<int, std::map<Scheme, double>> mean_ops;
  std::map<int, int> counts;
  for (const auto& r : rows) {
    if (r.pe != 0.0) continue;
    ++counts[r.n];
    for (Scheme s : kAllSchemes) mean_ops[r.n][s] += static_cast<double>(r.run(s).ops);
  }
  bool ok = true;
  std::string detail;
  for (auto& [n, per] : mean_ops) {
    for (auto& [s, v] : per) v /= counts[n];
    const bool ordered = per[Scheme::CDbsNs] > per[Scheme::CDbs] && per[Scheme::CDbs] > per[Scheme::UDbs];
    ok = ok && ordered && counts[n] >= kMinBucketSamples;
    detail += fmt::format("N={}: U={:.0f} C={:.0f} NS={:.0f}{}; ", n, per[Scheme::UDbs], per[Scheme::CDbs],
                          per[Scheme::CDbsNs], ordered ? "" : " UNORDERED");
  }
  const int first = mean_ops.begin()->first;
  const int last = mean_ops.rbegin()->first;
  const double growth_ns = mean_ops[last][Scheme::CDbsNs] / mean_ops[first][Scheme::CDbsNs];
  const double growth_c = mean_ops[last][Scheme::CDbs] / mean_ops[first][Scheme::CDbs];
  const double slope_ns = mean_ops[last][Scheme::CDbsNs] - mean_ops[first][Scheme::CDbsNs];
  const double slope_c = mean_ops[last][Scheme::CDbs] - mean_ops[first][Scheme::CDbs];
  const bool faster = growth_ns > growth_c && slope_ns > slope_c;
  ok = ok && faster;
  detail += fmt::format("growth N={}->{}: NS x{:.2f} (+{:.0f}) vs C x{:.2f} (+{:.0f})", first, last, growth_ns,
                        slope_ns, growth_c, slope_c);
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path csv_path = argc > 1 ? argv[1] : "acceptance_results.csv";
  const auto t0 = Clock::now();
  std::vector<std::pair<std::string, Verdict>> results;
  auto report = [&](const std::string& name, Verdict v) {
    std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
    results.emplace_back(name, std::move(v));
  };

  report("1 codec oracle", codec_oracle());
  report("2 DBS brute-force equivalence", dbs_equivalence());
  report("3 golden traces", golden_traces());

  const SweepConfig cfg = main_sweep_config();
  const auto sweep_start = Clock::now();
  const SweepSamples samples = run_samples(cfg);
  const std::string csv = format_csv(aggregate(samples.rows));
  write_csv(aggregate(samples.rows), csv_path);
  std::printf("       main sweep: %zu sample rows, %zu empty cells, %.1fs, %d workers -> %s\n", samples.rows.size(),
              samples.empty_cells.size(), seconds_since(sweep_start), worker_count(cfg.threads),
              csv_path.string().c_str());

  report("4 termination and bounds", termination(samples.rows));
  report("5 trend A: coded beats uncoded at low degree (N=8)", trend_a(samples.rows));
  report("6 trend B: node selection wins at medium degree, schemes meet at high degree (N=11, pe=0.1)",
         trend_b(samples.rows, 11));
  report("7 trend C: low-degree gain floor (N=11)", trend_c(samples.rows));
  report("8 trend D: op-count ordering and growth", trend_d(samples.rows));

  SweepConfig again = cfg;
  again.threads = worker_count(cfg.threads) == 1 ? 3 : 1;
  const std::string csv_again = format_csv(run_sweep(again));
  report("9 determinism", {csv_again == csv, fmt::format("second sweep with {} workers, {} CSV bytes, {}",
                                                          worker_count(again.threads), csv.size(),
                                                          csv_again == csv ? "byte-identical" : "DIFFERENT")});

  const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.second.pass; });
  std::printf("%zu/%zu criteria passed in %.1fs\n", results.size() - static_cast<std::size_t>(failed), results.size(),
              seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
