#include "kinetic/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kinetic {

using ojson = nlohmann::ordered_json;

std::string model_to_json(const Model& model, const std::optional<NormalityReport>& report) {
  const auto& v = model.velocities();
  ojson j;
  j["d"] = v.dim();
  j["h"] = v.h();
  ojson pts = ojson::array();
  for (const auto& p : v.points()) pts.push_back(p.coords);
  j["points"] = std::move(pts);
  ojson rs = ojson::array();
  for (const auto& r : model.reactions()) {
    ojson e;
    e["i"] = r.q.i + 1;
    e["j"] = r.q.j + 1;
    e["k"] = r.q.k + 1;
    e["l"] = r.q.l + 1;
    e["gamma"] = r.gamma;
    rs.push_back(std::move(e));
  }
  j["reactions"] = std::move(rs);
  if (report) {
    j["normal"] = report->normal();
    if (!report->normal()) {
      std::string why;
      if (!report->condition_a) why += " points lie on a sphere or an affine hyperplane;";
      if (!report->condition_b) why += " isolated points present;";
      if (!report->condition_c) why += " reaction vectors do not reach full rank;";
      j["warning"] = "model is not normal:" + why;
    }
  }
  return j.dump(2) + "\n";
}

namespace {

template <typename T>
T require(const ojson& j, const char* key) {
  if (!j.contains(key)) throw ModelFormatError(std::string("model file: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ModelFormatError(std::string("model file: field '") + key + "' has the wrong type");
  }
}

std::size_t index_field(const ojson& r, const char* key, std::size_t n) {
  if (!r.contains(key)) throw ModelFormatError(std::string("reaction: missing '") + key + "'");
  const auto& x = r.at(key);
  if (!x.is_number_integer()) throw ModelFormatError(std::string("reaction: '") + key + "' must be an integer");
  const auto v = x.get<long long>();
  if (v < 1 || static_cast<std::size_t>(v) > n) {
    throw ModelFormatError(std::string("reaction: '") + key + "' out of range (indices are 1-based)");
  }
  return static_cast<std::size_t>(v - 1);
}

}  // namespace

Model model_from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelFormatError(std::string("model file: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ModelFormatError("model file: top level must be an object");

  const int d = require<int>(j, "d");
  const double h = require<double>(j, "h");
  if (!j.contains("points") || !j["points"].is_array()) {
    throw ModelFormatError("model file: 'points' must be an array");
  }
  std::vector<LatticePoint> pts;
  for (const auto& p : j["points"]) {
    if (!p.is_array()) throw ModelFormatError("model file: each point must be an integer array");
    std::vector<Int> c;
    for (const auto& x : p) {
      if (!x.is_number_integer()) throw ModelFormatError("model file: coordinates must be integers");
      c.push_back(x.get<Int>());
    }
    pts.emplace_back(std::move(c));
  }
  const std::size_t n = pts.size();

  std::vector<Reaction> rs;
  if (j.contains("reactions")) {
    if (!j["reactions"].is_array()) throw ModelFormatError("model file: 'reactions' must be an array");
    for (const auto& r : j["reactions"]) {
      if (!r.is_object()) throw ModelFormatError("model file: each reaction must be an object");
      Reaction rx;
      rx.q = {index_field(r, "i", n), index_field(r, "j", n), index_field(r, "k", n), index_field(r, "l", n)};
      if (!r.contains("gamma") || !r["gamma"].is_number()) {
        throw ModelFormatError("reaction: 'gamma' must be a number");
      }
      rx.gamma = r["gamma"].get<double>();
      if (rx.gamma < 0.0) throw ModelFormatError("reaction: negative rate");
      rs.push_back(rx);
    }
  }

  try {
    VelocitySet v(d, h, std::move(pts));
    ReactionTable table(n, std::move(rs));
    return Model(std::move(v), std::move(table));
  } catch (const ModelFormatError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("model file: ") + e.what());
  }
}

void write_model(const std::filesystem::path& path, const Model& model,
                 const std::optional<NormalityReport>& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << model_to_json(model, report);
}

Model read_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelFormatError("cannot open model file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace kinetic
