#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "eigenvi/density.hpp"

namespace eigenvi {

inline constexpr int kDensitySchemaVersion = 1;

/// JSON document with the basis families and orders, alpha and the optional
/// transform. Doubles are written in shortest round-trip form, so reading the
/// document back reproduces alpha bit for bit.
std::string density_to_json(const OfeDensity& q, int indent = 2);

/// Throws std::invalid_argument on malformed documents or unknown schema
/// versions.
OfeDensity density_from_json(std::string_view text);

void save_density(const OfeDensity& q, const std::filesystem::path& path);
OfeDensity load_density(const std::filesystem::path& path);

}  // namespace eigenvi
