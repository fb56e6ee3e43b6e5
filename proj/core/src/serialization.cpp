#include "eigenvi/serialization.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace eigenvi {

namespace {

using nlohmann::json;

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string density_to_json(const OfeDensity& q, int indent) {
  json doc;
  doc["format"] = "eigenvi.density";
  doc["schema_version"] = kDensitySchemaVersion;
  doc["dim"] = q.dim();
  json basis = json::array();
  for (int d = 0; d < q.dim(); ++d) {
    const auto& fam = q.basis().family(d);
    basis.push_back({{"family", std::string(to_string(fam.kind()))},
                     {"order", q.basis().order(d)},
                     {"max_order", fam.max_order()}});
  }
  doc["basis"] = std::move(basis);
  doc["alpha"] = vector_json(q.alpha().values());
  if (q.transform()) {
    const auto& t = *q.transform();
    json rows = json::array();
    for (Eigen::Index r = 0; r < t.scale().rows(); ++r) {
      rows.push_back(vector_json(t.scale().row(r).transpose()));
    }
    doc["transform"] = {{"location", vector_json(t.location())}, {"scale", std::move(rows)}};
  } else {
    doc["transform"] = nullptr;
  }
  return doc.dump(indent);
}

OfeDensity density_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("density document is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "eigenvi.density") {
      throw std::invalid_argument("document is not an eigenvi density");
    }
    const int version = doc.at("schema_version").get<int>();
    if (version != kDensitySchemaVersion) {
      throw std::invalid_argument("unsupported density schema version " + std::to_string(version));
    }
    std::vector<BasisFamily> families;
    std::vector<int> orders;
    for (const auto& entry : doc.at("basis")) {
      const auto kind = basis_kind_from_string(entry.at("family").get<std::string>());
      families.emplace_back(kind, entry.value("max_order", BasisFamily::kDefaultMaxOrder));
      orders.push_back(entry.at("order").get<int>());
    }
    if (doc.contains("dim") && doc.at("dim").get<std::size_t>() != families.size()) {
      throw std::invalid_argument("dim field disagrees with the basis list");
    }
    ProductBasis basis(std::move(families), std::move(orders));
    WeightVector alpha(vector_from(doc.at("alpha")));
    std::optional<StandardizingTransform> transform;
    const auto& t = doc.at("transform");
    if (!t.is_null()) {
      const Eigen::VectorXd location = vector_from(t.at("location"));
      const auto& rows = t.at("scale");
      Eigen::MatrixXd scale(location.size(), location.size());
      if (rows.size() != static_cast<std::size_t>(location.size())) {
        throw std::invalid_argument("transform scale has the wrong number of rows");
      }
      for (Eigen::Index r = 0; r < scale.rows(); ++r) {
        const Eigen::VectorXd row = vector_from(rows.at(static_cast<std::size_t>(r)));
        if (row.size() != scale.cols()) throw std::invalid_argument("transform scale row has the wrong length");
        scale.row(r) = row.transpose();
      }
      transform.emplace(location, scale);
    }
    return OfeDensity(std::move(basis), std::move(alpha), std::move(transform));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed density document: ") + e.what());
  }
}

void save_density(const OfeDensity& q, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << density_to_json(q) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

OfeDensity load_density(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return density_from_json(buf.str());
}

}  // namespace eigenvi
