#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eulerinf/polar_field.hpp"

namespace eulerinf {

class FieldFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON text of a field: grid description, layout and every stored row as
/// separate real/imaginary arrays. Doubles round-trip exactly. See
/// docs/field_format.md.
std::string field_to_json(const PolarField& field);
/// Throws FieldFormatError on malformed input or a grid that does not
/// rebuild to the stored node values.
PolarField field_from_json(std::string_view text);

void save_field(const std::filesystem::path& path, const PolarField& field);
PolarField load_field(const std::filesystem::path& path);

/// Write to a sibling temporary and rename over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace eulerinf
