#include "tensorsplit/field_io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace tsplit {

namespace {

nlohmann::json field_to_json(const Field& f) {
  const Grid& g = f.grid();
  nlohmann::json j;
  j["version"] = 1;
  j["grid"]["n"] = g.n;
  j["grid"]["dims"] = std::vector<int>(g.dims.begin(), g.dims.begin() + g.n);
  j["grid"]["lengths"] = std::vector<double>(g.lengths.begin(), g.lengths.begin() + g.n);
  j["kind"] = kind_name(f.kind());
  j["layout"] = "component-major;row-major;last-fastest";
  j["data"] = f.raw();
  return j;
}

Field field_from_json(const nlohmann::json& j) {
  if (!j.contains("version") || j.at("version").get<int>() != 1)
    throw std::invalid_argument("field file: unsupported version");
  const auto& jg = j.at("grid");
  const auto dims = jg.at("dims").get<std::vector<int>>();
  const auto lengths = jg.at("lengths").get<std::vector<double>>();
  Grid g = make_grid(jg.at("n").get<int>(), dims, lengths);
  const FieldKind kind = kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("layout") &&
      j.at("layout").get<std::string>() != "component-major;row-major;last-fastest")
    throw std::invalid_argument("field file: unknown layout");
  Field f(g, kind);
  const auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != f.raw().size())
    throw std::invalid_argument("field file: data length mismatch");
  f.raw() = data;
  return f;
}

}  // namespace

std::string field_to_json_text(const Field& f) { return field_to_json(f).dump(); }

Field field_from_json_text(const std::string& text) {
  return field_from_json(nlohmann::json::parse(text));
}

void write_field(const Field& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << field_to_json(f).dump();
  if (!out) throw std::runtime_error("write failed: " + path);
}

Field read_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  in >> j;
  return field_from_json(j);
}

}  // namespace tsplit
