#include "eigenvi/harness/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace eigenvi::harness {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

Eigen::VectorXd vector_from(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(where + " must be an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd matrix_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + " must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = vector_from(j[static_cast<std::size_t>(r)], where);
    if (row.size() != rows) throw ConfigError(where + " must be square");
    m.row(r) = row.transpose();
  }
  return m;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_json(m.row(r).transpose()));
  return rows;
}

ProposalSpec proposal_from(const json& j, const std::string& where) {
  require_keys(j, {"kind", "lo", "hi", "variance"}, where);
  ProposalSpec p;
  const std::string kind = j.value("kind", "uniform");
  if (kind == "uniform") {
    p.kind = Proposal::Kind::UniformBox;
    p.lo = j.value("lo", -6.0);
    p.hi = j.value("hi", 6.0);
    if (!(p.lo < p.hi)) throw ConfigError(where + ": uniform proposal needs lo < hi");
  } else if (kind == "gaussian") {
    p.kind = Proposal::Kind::IsotropicGaussian;
    p.variance = j.value("variance", 9.0);
    if (!(p.variance > 0.0)) throw ConfigError(where + ": gaussian proposal needs variance > 0");
  } else {
    throw ConfigError(where + ": proposal kind must be 'uniform' or 'gaussian'");
  }
  return p;
}

json proposal_json(const ProposalSpec& p) {
  if (p.kind == Proposal::Kind::UniformBox) return {{"kind", "uniform"}, {"lo", p.lo}, {"hi", p.hi}};
  return {{"kind", "gaussian"}, {"variance", p.variance}};
}

std::size_t positive_count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    throw ConfigError(where + " must be a positive integer");
  }
  return j.get<std::size_t>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    require_keys(doc, {"schema_version", "name", "seed", "target", "basis", "batch", "proposal",
                       "standardize", "metrics", "assembly", "output"},
                 "config");
    if (!doc.contains("schema_version")) throw ConfigError("config is missing schema_version");
    if (doc.at("schema_version").get<int>() != kConfigSchemaVersion) {
      throw ConfigError("unsupported config schema_version " + doc.at("schema_version").dump());
    }
    c.name = doc.value("name", c.name);
    if (!doc.contains("seed") || !doc.at("seed").is_number_unsigned()) {
      throw ConfigError("config must set a nonnegative integer seed");
    }
    c.seed = doc.at("seed").get<std::uint64_t>();

    if (!doc.contains("target")) throw ConfigError("config is missing target");
    const auto& t = doc.at("target");
    if (t.is_string()) {
      c.target.name = t.get<std::string>();
    } else {
      require_keys(t, {"name", "mean", "covariance"}, "target");
      c.target.name = t.at("name").get<std::string>();
      if (t.contains("mean")) c.target.mean = vector_from(t.at("mean"), "target.mean");
      if (t.contains("covariance")) c.target.covariance = matrix_from(t.at("covariance"), "target.covariance");
    }

    if (!doc.contains("basis")) throw ConfigError("config is missing basis");
    const auto& b = doc.at("basis");
    require_keys(b, {"family", "orders"}, "basis");
    if (b.contains("family")) {
      const auto& f = b.at("family");
      c.families = f.is_string() ? std::vector<std::string>{f.get<std::string>()}
                                 : f.get<std::vector<std::string>>();
    }
    if (!b.contains("orders") || !b.at("orders").is_array()) {
      throw ConfigError("basis.orders must be an array");
    }
    for (const auto& o : b.at("orders")) {
      if (o.is_number_integer()) {
        c.orders.push_back({o.get<int>()});
      } else {
        c.orders.push_back(o.get<std::vector<int>>());
      }
    }

    if (doc.contains("batch")) {
      const auto& bt = doc.at("batch");
      require_keys(bt, {"sizes", "multiplier"}, "batch");
      if (bt.contains("sizes")) {
        if (!bt.at("sizes").is_array()) throw ConfigError("batch.sizes must be an array");
        for (const auto& s : bt.at("sizes")) c.batch_sizes.push_back(positive_count(s, "batch.sizes entry"));
      }
      if (bt.contains("multiplier")) c.batch_multiplier = positive_count(bt.at("multiplier"), "batch.multiplier");
    }
    if (doc.contains("proposal")) c.proposal = proposal_from(doc.at("proposal"), "proposal");

    if (doc.contains("standardize")) {
      const auto& s = doc.at("standardize");
      require_keys(s, {"source", "batch", "proposal", "mean", "covariance"}, "standardize");
      const std::string source = s.value("source", "none");
      if (source == "none") {
        c.standardize.source = StandardizeSpec::Source::None;
      } else if (source == "snis") {
        c.standardize.source = StandardizeSpec::Source::Snis;
      } else if (source == "fixed") {
        c.standardize.source = StandardizeSpec::Source::Fixed;
        if (!s.contains("mean") || !s.contains("covariance")) {
          throw ConfigError("fixed standardization needs mean and covariance");
        }
      } else {
        throw ConfigError("standardize.source must be 'none', 'snis' or 'fixed'");
      }
      if (s.contains("batch")) c.standardize.batch = positive_count(s.at("batch"), "standardize.batch");
      if (s.contains("proposal")) c.standardize.proposal = proposal_from(s.at("proposal"), "standardize.proposal");
      if (s.contains("mean")) c.standardize.mean = vector_from(s.at("mean"), "standardize.mean");
      if (s.contains("covariance")) c.standardize.covariance = matrix_from(s.at("covariance"), "standardize.covariance");
    }

    if (doc.contains("metrics")) {
      const auto& m = doc.at("metrics");
      require_keys(m, {"kl_samples", "fisher_samples", "q_samples"}, "metrics");
      if (m.contains("kl_samples")) c.kl_samples = positive_count(m.at("kl_samples"), "metrics.kl_samples");
      if (m.contains("fisher_samples")) c.fisher_samples = positive_count(m.at("fisher_samples"), "metrics.fisher_samples");
      if (m.contains("q_samples")) c.q_samples = m.at("q_samples").get<std::size_t>();
    }
    if (doc.contains("assembly")) {
      const auto& a = doc.at("assembly");
      require_keys(a, {"chunk_size", "workers"}, "assembly");
      if (a.contains("chunk_size")) c.assembly.chunk_size = positive_count(a.at("chunk_size"), "assembly.chunk_size");
      if (a.contains("workers")) c.assembly.workers = a.at("workers").get<unsigned>();
    }
    if (doc.contains("output")) {
      const auto& o = doc.at("output");
      require_keys(o, {"dir", "densities"}, "output");
      if (o.contains("dir")) c.out_dir = o.at("dir").get<std::string>();
      c.write_densities = o.value("densities", true);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ExperimentConfig& c) {
  std::shared_ptr<SyntheticTarget> target;
  try {
    target = make_target(c.target);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid target: ") + e.what());
  }
  const int dim = target->dim();
  if (c.families.empty()) throw ConfigError("basis.family must name at least one family");
  if (c.families.size() != 1 && c.families.size() != static_cast<std::size_t>(dim)) {
    throw ConfigError("basis.family must list one family or one per dimension");
  }
  for (const auto& f : c.families) {
    try {
      basis_kind_from_string(f);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  if (c.orders.empty()) throw ConfigError("basis.orders sweep must be nonempty");
  for (const auto& o : c.orders) {
    if (o.size() != 1 && o.size() != static_cast<std::size_t>(dim)) {
      throw ConfigError("each basis.orders entry needs one order or one per dimension");
    }
    for (int k : o) {
      if (k < 1 || k > BasisFamily::kDefaultMaxOrder) {
        throw ConfigError("basis orders must lie in [1, " + std::to_string(BasisFamily::kDefaultMaxOrder) + "]");
      }
    }
  }
  for (auto b : c.batch_sizes) {
    if (b == 0) throw ConfigError("batch sizes must be positive");
  }
  if (c.batch_multiplier == 0) throw ConfigError("batch multiplier must be positive");
  if (c.kl_samples == 0 || c.fisher_samples == 0) throw ConfigError("metric sample counts must be positive");
  if (c.assembly.chunk_size == 0) throw ConfigError("assembly chunk size must be positive");
  if (c.standardize.source == StandardizeSpec::Source::Fixed) {
    if (c.standardize.mean.size() != dim || c.standardize.covariance.rows() != dim) {
      throw ConfigError("fixed standardization mean/covariance must match the target dimension");
    }
  }
}

std::string config_to_json(const ExperimentConfig& c) {
  json doc;
  doc["schema_version"] = kConfigSchemaVersion;
  doc["name"] = c.name;
  doc["seed"] = c.seed;
  if (c.target.mean.size() || c.target.covariance.size()) {
    doc["target"] = {{"name", c.target.name},
                     {"mean", vector_json(c.target.mean)},
                     {"covariance", matrix_json(c.target.covariance)}};
  } else {
    doc["target"] = c.target.name;
  }
  json orders = json::array();
  for (const auto& o : c.orders) orders.push_back(o);
  doc["basis"] = {{"family", c.families}, {"orders", orders}};
  json batch = {{"multiplier", c.batch_multiplier}};
  if (!c.batch_sizes.empty()) batch["sizes"] = c.batch_sizes;
  doc["batch"] = batch;
  doc["proposal"] = proposal_json(c.proposal);
  json st;
  switch (c.standardize.source) {
    case StandardizeSpec::Source::None: st["source"] = "none"; break;
    case StandardizeSpec::Source::Snis: st["source"] = "snis"; break;
    case StandardizeSpec::Source::Fixed: st["source"] = "fixed"; break;
  }
  st["batch"] = c.standardize.batch;
  st["proposal"] = proposal_json(c.standardize.proposal);
  if (c.standardize.mean.size()) st["mean"] = vector_json(c.standardize.mean);
  if (c.standardize.covariance.size()) st["covariance"] = matrix_json(c.standardize.covariance);
  doc["standardize"] = st;
  doc["metrics"] = {{"kl_samples", c.kl_samples},
                    {"fisher_samples", c.fisher_samples},
                    {"q_samples", c.q_samples}};
  doc["assembly"] = {{"chunk_size", c.assembly.chunk_size}, {"workers", c.assembly.workers}};
  doc["output"] = {{"dir", c.out_dir.string()}, {"densities", c.write_densities}};
  return doc.dump(2);
}

std::string config_hash(const ExperimentConfig& c) {
  // Worker count and output location do not change results, so they are
  // left out of the hash.
  ExperimentConfig h = c;
  h.assembly.workers = 0;
  h.out_dir.clear();
  const std::string text = config_to_json(h);
  std::uint64_t x = 1469598103934665603ull;
  for (unsigned char ch : text) {
    x ^= ch;
    x *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, x);
  return buf;
}

std::shared_ptr<SyntheticTarget> make_target(const TargetSpec& entry) {
  if (entry.name == "gaussian") {
    if (entry.mean.size() == 0 || entry.covariance.rows() != entry.mean.size()) {
      throw ConfigError("gaussian target needs a mean and a matching covariance");
    }
    return std::make_shared<GaussianTarget>(entry.mean, entry.covariance);
  }
  try {
    return target_by_name(entry.name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Proposal make_proposal(const ProposalSpec& entry, int dim) {
  if (entry.kind == Proposal::Kind::UniformBox) return Proposal::uniform_box(dim, entry.lo, entry.hi);
  return Proposal::isotropic_gaussian(dim, entry.variance);
}

ProductBasis make_basis(const ExperimentConfig& config, const std::vector<int>& orders, int dim) {
  std::vector<BasisFamily> families;
  std::vector<int> ks;
  for (int d = 0; d < dim; ++d) {
    const auto& name = config.families.size() == 1 ? config.families[0]
                                                   : config.families[static_cast<std::size_t>(d)];
    families.emplace_back(basis_kind_from_string(name));
    ks.push_back(orders.size() == 1 ? orders[0] : orders[static_cast<std::size_t>(d)]);
  }
  return ProductBasis(std::move(families), std::move(ks));
}

}  // namespace eigenvi::harness
