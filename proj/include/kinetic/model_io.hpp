#pragma once

// Model files: JSON with integer coordinates, the mesh step and canonical
// reactions. Reaction indices are 1-based in the file.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "kinetic/model.hpp"

namespace kinetic {

/// Malformed or inconsistent model file.
class ModelFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Canonical serialization; byte-identical for equal models. When a report
/// is supplied its verdict is recorded, with a warning for non-normal models.
std::string model_to_json(const Model& model, const std::optional<NormalityReport>& report = std::nullopt);

/// Accepts reactions in any orientation or order and normalizes them.
Model model_from_json(const std::string& text);

void write_model(const std::filesystem::path& path, const Model& model,
                 const std::optional<NormalityReport>& report = std::nullopt);
Model read_model(const std::filesystem::path& path);

}  // namespace kinetic
