#pragma once

#include <string>

#include "tensorsplit/field.hpp"

namespace tsplit {

/// Field files are single JSON documents:
/// {"version":1, "grid":{"n":..,"dims":[..],"lengths":[..]},
///  "kind":"scalar|oneform|vector|symtensor|twoform",
///  "layout":"component-major;row-major;last-fastest",
///  "data":[...]}
/// with data as decimal-serialized doubles, components concatenated in
/// documented index order. Round-trips bitwise.
void write_field(const Field& f, const std::string& path);
Field read_field(const std::string& path);

std::string field_to_json_text(const Field& f);
Field field_from_json_text(const std::string& text);

}  // namespace tsplit
