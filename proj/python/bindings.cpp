#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ncsync/experiment.hpp"
#include "ncsync/nc_core.hpp"
#include "ncsync/selection.hpp"
#include "ncsync/sim.hpp"
#include "ncsync/topology.hpp"

namespace py = pybind11;
using namespace ncsync;

namespace {

Scheme scheme_arg(const std::string& text) {
  auto s = parse_scheme(text);
  if (!s) throw py::value_error("unknown scheme '" + text + "' (expected u-dbs, c-dbs or c-dbs-ns)");
  return *s;
}

std::vector<KnowledgeSet> knowledge_arg(const std::vector<std::vector<int>>& held) {
  const int n = static_cast<int>(held.size());
  std::vector<KnowledgeSet> out;
  for (int v = 0; v < n; ++v) out.emplace_back(v, n, BlockSet::of(held[static_cast<std::size_t>(v)]));
  return out;
}

py::dict dbs_dict(const DbsResult& r) {
  py::dict d;
  d["chosen"] = r.chosen.to_vector();
  d["beta"] = r.beta;
  d["helped"] = r.helped.to_vector();
  return d;
}

py::bytes as_bytes(const Payload& p) { return py::bytes(reinterpret_cast<const char*>(p.data()), p.size()); }

Payload from_bytes(const py::bytes& b) {
  const std::string s = b;
  return Payload(s.begin(), s.end());
}

py::dict event_dict(const SlotEvent& e) {
  py::dict d;
  d["slot"] = e.slot;
  d["tx"] = e.tx;
  d["components"] = e.components.to_vector();
  py::list outcomes;
  for (const auto& o : e.outcomes) {
    py::dict od;
    od["rx"] = o.rx;
    od["result"] = std::string(outcome_name(o.result));
    if (o.result == Outcome::Decoded) od["block"] = o.block;
    outcomes.append(od);
  }
  d["outcomes"] = outcomes;
  return d;
}

py::dict record_dict(const ExperimentRecord& r) {
  py::dict d;
  d["scheme"] = std::string(scheme_name(r.scheme));
  d["n"] = r.n;
  d["pe"] = r.pe;
  d["degree_bucket"] = r.degree_bucket;
  d["n_samples"] = r.n_samples;
  d["mean_slots"] = r.mean_slots;
  d["mean_rpg"] = r.mean_rpg;
  d["mean_ops"] = r.mean_ops;
  d["convergence_rate"] = r.convergence_rate;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "All-to-all broadcast synchronization with XOR network coding";

  py::class_<Topology>(m, "Topology")
      .def_static("from_edges", [](int n, const std::vector<Edge>& edges) { return Topology::from_edges(n, edges); },
                  py::arg("n"), py::arg("edges"))
      .def_static("from_json", &topology_from_json)
      .def_property_readonly("n", &Topology::size)
      .def_property_readonly("edge_count", &Topology::edge_count)
      .def_property_readonly("connected", &Topology::connected)
      .def("neighbors", [](const Topology& t, NodeId v) { return t.neighbors(v).to_vector(); })
      .def("degree", &Topology::degree)
      .def("edges", &Topology::edges)
      .def("positions",
           [](const Topology& t) {
             std::vector<std::pair<double, double>> out;
             for (const auto& p : t.positions()) out.emplace_back(p.x, p.y);
             return out;
           })
      .def("to_json", [](const Topology& t) { return to_json(t); })
      .def("__repr__", [](const Topology& t) {
        return "<Topology n=" + std::to_string(t.size()) + " edges=" + std::to_string(t.edge_count()) + ">";
      });

  m.def("average_degree", [](const Topology& t) {
    const Rational r = average_degree(t);
    return std::make_pair(r.num, r.den);
  }, "2|E|/N as a (numerator, denominator) pair");
  m.def("is_connected", &is_connected);
  m.def("generate_geometric", [](int n, double radius, std::uint64_t seed) {
    Rng rng(seed);
    return generate_geometric(n, radius, rng);
  }, py::arg("n"), py::arg("radius"), py::arg("seed"));
  m.def("path_graph", &fixtures::path);
  m.def("complete_graph", &fixtures::complete);
  m.def("star_graph", &fixtures::star);

  m.def("encode", [](const std::vector<int>& blocks, const std::vector<py::bytes>& payloads) {
    std::vector<Payload> p;
    for (const auto& b : payloads) p.push_back(from_bytes(b));
    const Packet pkt = encode(BlockSet::of(blocks), BlockStore(std::move(p)));
    return as_bytes(pkt.payload);
  }, py::arg("blocks"), py::arg("payloads"), "XOR of the selected payloads");
  m.def("classify", [](const std::vector<int>& components, const std::vector<int>& held, int owner,
                       int universe) -> py::tuple {
    const KnowledgeSet k(owner, universe, BlockSet::of(held));
    const Packet pkt{BlockSet::of(components), {}};
    const Classification c = classify(pkt, k);
    if (std::holds_alternative<AlreadyKnown>(c)) return py::make_tuple("already_known", py::none());
    if (const auto* d = std::get_if<Decodable>(&c)) return py::make_tuple("decodable", d->missing);
    return py::make_tuple("undecodable", std::get<Undecodable>(c).unknown_count);
  }, py::arg("components"), py::arg("held"), py::arg("owner"), py::arg("universe"));

  m.def("candidate_pool", [](NodeId n, const std::vector<std::vector<int>>& held, const Topology& t) {
    return candidate_pool(n, knowledge_arg(held), t).to_vector();
  });
  m.def("dbs", [](NodeId n, const std::vector<std::vector<int>>& held, const Topology& t) {
    return dbs_dict(dbs(n, knowledge_arg(held), t));
  }, py::arg("node"), py::arg("held"), py::arg("topology"));
  m.def("dbs_single", [](NodeId n, const std::vector<std::vector<int>>& held, const Topology& t) {
    return dbs_dict(dbs_single(n, knowledge_arg(held), t));
  }, py::arg("node"), py::arg("held"), py::arg("topology"));
  m.def("ns", [](const std::vector<std::vector<int>>& held, const Topology& t) {
    const NsResult r = ns(knowledge_arg(held), t);
    py::dict d;
    d["chosen_node"] = r.chosen_node;
    d["score"] = py::make_tuple(r.score.num, r.score.den);
    d["dbs"] = dbs_dict(r.per_node[static_cast<std::size_t>(r.chosen_node)].dbs);
    return d;
  }, py::arg("held"), py::arg("topology"));

  m.def("simulate", [](const Topology& t, const std::string& scheme, double pe, std::uint64_t seed, int max_slots,
                       std::size_t payload_len, bool trace) {
    SimConfig cfg;
    cfg.scheme = scheme_arg(scheme);
    cfg.pe = pe;
    cfg.seed = seed;
    cfg.max_slots = max_slots;
    cfg.payload_len = payload_len;
    cfg.record_events = trace;
    SimResult r;
    {
      py::gil_scoped_release release;
      r = run(t, cfg);
    }
    py::dict d;
    d["slots"] = r.slots;
    d["converged"] = r.converged;
    d["op_count"] = r.op_count;
    py::list events;
    for (const auto& e : r.events) events.append(event_dict(e));
    d["events"] = events;
    return d;
  }, py::arg("topology"), py::arg("scheme"), py::arg("pe") = 0.0, py::arg("seed") = 1, py::arg("max_slots") = 0,
     py::arg("payload_len") = BlockStore::kDefaultPayloadLen, py::arg("trace") = true);

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("node_sizes", &SweepConfig::node_sizes)
      .def_readwrite("pe_values", &SweepConfig::pe_values)
      .def_readwrite("radius_grid", &SweepConfig::radius_grid)
      .def_readwrite("samples_per_cell", &SweepConfig::samples_per_cell)
      .def_readwrite("root_seed", &SweepConfig::root_seed)
      .def_readwrite("degree_bucket_width", &SweepConfig::degree_bucket_width)
      .def_readwrite("payload_len", &SweepConfig::payload_len)
      .def_readwrite("max_rejections", &SweepConfig::max_rejections)
      .def_readwrite("threads", &SweepConfig::threads)
      .def_static("load", &load_sweep_config);

  m.def("run_sweep", [](const SweepConfig& cfg) {
    std::vector<ExperimentRecord> records;
    {
      py::gil_scoped_release release;
      records = run_sweep(cfg);
    }
    py::list out;
    for (const auto& r : records) out.append(record_dict(r));
    return out;
  });
  m.def("sweep_csv", [](const SweepConfig& cfg) {
    py::gil_scoped_release release;
    return format_csv(run_sweep(cfg));
  }, "Runs a sweep and returns the CSV text");
  m.def("write_sweep_csv", [](const SweepConfig& cfg, const std::filesystem::path& path) {
    py::gil_scoped_release release;
    write_csv(run_sweep(cfg), path);
  });
  m.def("compute_sd", [](const std::vector<int>& slots) { return compute_sd(slots); });
  m.def("compute_gd", [](const std::vector<std::pair<int, int>>& pairs) { return compute_gd(pairs); });
  m.attr("CSV_HEADER") = kCsvHeader;

  py::register_exception<ContractViolation>(m, "ContractViolation");
  py::register_exception<GenerationError>(m, "GenerationError");
}
