#include "intermap/io.hpp"

#include <charconv>
#include <cmath>
#include <set>

namespace intermap {

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw InvalidArgument(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw InvalidArgument(where + ": unknown key '" + k + "'");
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw InvalidArgument(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(where + "." + key + ": wrong type");
  }
}

void check_version(const json& j, const std::string& where) {
  if (get<int>(j, "format_version", where) != kFormatVersion)
    throw InvalidArgument(where + ": unsupported format_version");
}

std::string number17(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

void write(const json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? "\n" + std::string(std::size_t(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(std::size_t(indent * depth), ' ') : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
  case json::value_t::object: {
    if (j.empty()) { out += "{}"; break; }
    out += '{';
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ',';
      first = false;
      out += pad + json(k).dump() + sep;
      write(v, indent, depth + 1, out);
    }
    out += close + '}';
    break;
  }
  case json::value_t::array: {
    if (j.empty()) { out += "[]"; break; }
    out += '[';
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ',';
      out += pad;
      write(j[i], indent, depth + 1, out);
    }
    out += close + ']';
    break;
  }
  case json::value_t::number_float: out += number17(j.get<double>()); break;
  default: out += j.dump();
  }
}

} // namespace

PMMap map_from_json(const json& j) {
  const std::string type = get<std::string>(j, "type", "map");
  if (type == "lsv") {
    require_keys(j, {"type", "alpha"}, "map");
    return lsv(get<double>(j, "alpha", "map"));
  }
  if (type != "custom") throw InvalidArgument("map.type: expected 'lsv' or 'custom'");
  require_keys(j, {"type", "alpha", "a", "h_coeffs", "branches", "label"}, "map");
  std::vector<GoodBranch> branches;
  const json& bs = j.at("branches");
  if (!bs.is_array() || bs.empty()) throw InvalidArgument("map.branches: expected a non-empty array");
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const std::string where = "map.branches[" + std::to_string(i) + "]";
    require_keys(bs[i], {"type", "slope", "intercept"}, where);
    if (get<std::string>(bs[i], "type", where) != "affine") throw InvalidArgument(where + ".type: only 'affine'");
    branches.push_back(GoodBranch::make_affine(get<double>(bs[i], "slope", where), get<double>(bs[i], "intercept", where)));
  }
  return PMMap(get<double>(j, "alpha", "map"), get<double>(j, "a", "map"), get<std::vector<double>>(j, "h_coeffs", "map"),
               std::move(branches), j.value("label", std::string("custom")));
}

json map_to_json(const PMMap& map) {
  json j;
  j["type"] = "custom";
  j["label"] = map.label();
  j["alpha"] = map.alpha();
  j["a"] = map.a();
  j["h_coeffs"] = map.h_coeffs();
  json bs = json::array();
  for (const GoodBranch& b : map.branches()) {
    if (!b.affine) throw InvalidArgument("map_to_json: only affine branches are serialisable");
    bs.push_back({{"type", "affine"}, {"slope", b.affine->first}, {"intercept", b.affine->second}});
  }
  j["branches"] = bs;
  return j;
}

json expansion_to_json(const AbelExpansion& e) {
  json j;
  j["format_version"] = kFormatVersion;
  j["map_label"] = e.map_label;
  j["alpha"] = e.alpha;
  j["N"] = e.N;
  j["a_minus1"] = e.a_minus1;
  j["a_log"] = e.a_log;
  j["a0"] = e.a0;
  j["a_n"] = e.a_n;
  j["hhat1"] = e.hhat1;
  j["hhat2"] = e.hhat2;
  j["z_radius"] = e.z_radius;
  return j;
}

AbelExpansion expansion_from_json(const json& j) {
  const std::string w = "abel";
  require_keys(j, {"format_version", "map_label", "alpha", "N", "a_minus1", "a_log", "a0", "a_n", "hhat1", "hhat2", "z_radius"}, w);
  check_version(j, w);
  AbelExpansion e;
  e.map_label = get<std::string>(j, "map_label", w);
  e.alpha = get<double>(j, "alpha", w);
  e.N = get<std::size_t>(j, "N", w);
  e.a_minus1 = get<double>(j, "a_minus1", w);
  e.a_log = get<double>(j, "a_log", w);
  e.a0 = get<double>(j, "a0", w);
  e.a_n = get<std::vector<double>>(j, "a_n", w);
  e.hhat1 = j.value("hhat1", 0.0);
  e.hhat2 = j.value("hhat2", 0.0);
  e.z_radius = get<double>(j, "z_radius", w);
  if (e.a_n.size() != e.N) throw InvalidArgument("abel.a_n: length differs from N");
  return e;
}

json solution_to_json(const ChebSolution& s) {
  json j;
  j["format_version"] = kFormatVersion;
  j["p"] = s.basis.p();
  j["q"] = s.basis.q();
  j["N"] = s.basis.size() - 1;
  j["coeffs"] = s.coeffs;
  return j;
}

ChebSolution solution_from_json(const json& j) {
  const std::string w = "solution";
  require_keys(j, {"format_version", "p", "q", "N", "coeffs"}, w);
  check_version(j, w);
  const auto N = get<std::size_t>(j, "N", w);
  auto c = get<std::vector<double>>(j, "coeffs", w);
  if (c.size() != N + 1) throw InvalidArgument("solution.coeffs: length differs from N+1");
  return {ChebBasis(get<double>(j, "p", w), get<double>(j, "q", w), N), std::move(c)};
}

json matrix_to_json(const OperatorMatrix& m) {
  json j;
  j["format_version"] = kFormatVersion;
  j["p"] = m.basis().p();
  j["q"] = m.basis().q();
  j["N"] = m.basis().size() - 1;
  j["rcond"] = m.rcond();
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.entries().rows(); ++i) {
    std::vector<double> r(std::size_t(m.entries().cols()));
    for (Eigen::Index k = 0; k < m.entries().cols(); ++k) r[std::size_t(k)] = m.entries()(i, k);
    rows.push_back(r);
  }
  j["entries"] = rows;
  return j;
}

json bounds_to_json(const BoundConstants& bc) {
  return {{"format_version", kFormatVersion}, {"hhat1", bc.hhat1}, {"R", bc.R}, {"G", bc.G},
          {"Gprime", bc.Gprime}, {"aleph", bc.aleph}, {"R1", bc.R1}, {"d1", bc.d1}, {"d2", bc.d2}, {"Z", bc.Z}};
}

std::string dump17(const json& j, int indent) {
  std::string out;
  write(j, indent, 0, out);
  return out;
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace intermap
