#include <sstream>

#include "ncsync/experiment.hpp"

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

namespace ncsync {
namespace {

template <typename T>
std::vector<T> read_list(const toml::table& tbl, std::string_view key) {
  const toml::array* arr = tbl[key].as_array();
  if (arr == nullptr) throw std::invalid_argument("sweep config: '" + std::string(key) + "' must be an array");
  std::vector<T> out;
  for (const auto& node : *arr) {
    const auto v = node.value<T>();
    if (!v) throw std::invalid_argument("sweep config: bad element in '" + std::string(key) + "'");
    out.push_back(*v);
  }
  return out;
}

template <typename T>
T read_scalar(const toml::table& tbl, std::string_view key) {
  const auto v = tbl[key].value<T>();
  if (!v) throw std::invalid_argument("sweep config: bad value for '" + std::string(key) + "'");
  return *v;
}

}  // namespace

SweepConfig sweep_config_from_toml(const std::string& text) {
  toml::table tbl;
  try {
    tbl = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "sweep config: " << e.description() << " at line " << e.source().begin.line;
    throw std::invalid_argument(msg.str());
  }
  SweepConfig cfg;
  if (tbl.contains("node_sizes")) cfg.node_sizes = read_list<int>(tbl, "node_sizes");
  if (tbl.contains("pe_values")) cfg.pe_values = read_list<double>(tbl, "pe_values");
  if (tbl.contains("radius_grid")) cfg.radius_grid = read_list<double>(tbl, "radius_grid");
  if (tbl.contains("samples_per_cell")) cfg.samples_per_cell = read_scalar<int>(tbl, "samples_per_cell");
  if (tbl.contains("root_seed")) cfg.root_seed = static_cast<std::uint64_t>(read_scalar<std::int64_t>(tbl, "root_seed"));
  if (tbl.contains("degree_bucket_width")) cfg.degree_bucket_width = read_scalar<double>(tbl, "degree_bucket_width");
  if (tbl.contains("payload_len")) cfg.payload_len = static_cast<std::size_t>(read_scalar<std::int64_t>(tbl, "payload_len"));
  if (tbl.contains("max_rejections")) cfg.max_rejections = read_scalar<int>(tbl, "max_rejections");
  if (tbl.contains("threads")) cfg.threads = read_scalar<int>(tbl, "threads");
  cfg.validate();
  return cfg;
}

}  // namespace ncsync
