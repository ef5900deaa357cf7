#include "mta/tensor_io.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace mta {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

json scalar_part_to_json(const Scalar& s, bool imag) {
  if (s.mode() == ScalarMode::kExact) {
    const GaussianRational& q = s.exact_value();
    return rational_to_string(imag ? q.im : q.re);
  }
  return imag ? s.float_value().imag() : s.float_value().real();
}

Scalar scalar_from_parts(const json& re, const json& im, ScalarMode mode) {
  if (mode == ScalarMode::kExact) {
    if (!re.is_string() || !im.is_string()) {
      throw std::invalid_argument("exact entries need rational strings");
    }
    return Scalar::exact(rational_from_string(re.get<std::string>()),
                         rational_from_string(im.get<std::string>()));
  }
  if (!re.is_number() || !im.is_number()) {
    throw std::invalid_argument("float entries need numbers");
  }
  return Scalar::floating(re.get<double>(), im.get<double>());
}

}  // namespace

std::string tensor_to_json(const MixedTensor& x) {
  ordered_json doc;
  doc["n"] = x.n;
  doc["k"] = x.k;
  doc["l"] = x.l;
  doc["mode"] = to_string(x.mode);
  ordered_json entries = ordered_json::array();
  for (const auto& [mi, v] : x.entries) {
    ordered_json e;
    e["up"] = mi.up;
    e["down"] = mi.down;
    e["re"] = scalar_part_to_json(v, false);
    e["im"] = scalar_part_to_json(v, true);
    entries.push_back(std::move(e));
  }
  doc["entries"] = std::move(entries);
  return doc.dump();
}

MixedTensor tensor_from_json(const std::string& text) {
  json doc = json::parse(text);
  ScalarMode mode = parse_scalar_mode(doc.at("mode").get<std::string>());
  MixedTensor t = make_zero_tensor(doc.at("n").get<int>(), doc.at("k").get<int>(),
                                   doc.at("l").get<int>(), mode);
  for (const auto& e : doc.at("entries")) {
    MultiIndex mi;
    mi.up = e.at("up").get<std::vector<int>>();
    mi.down = e.at("down").get<std::vector<int>>();
    if (mi.k() != t.k || mi.l() != t.l) {
      throw std::invalid_argument("entry grade does not match tensor grade");
    }
    for (int v : mi.up) {
      if (v < 1 || v > t.n) throw std::out_of_range("entry index out of range");
    }
    for (int v : mi.down) {
      if (v < 1 || v > t.n) throw std::out_of_range("entry index out of range");
    }
    t.accumulate(mi, scalar_from_parts(e.at("re"), e.at("im"), mode));
  }
  return t;
}

void write_tensor(std::ostream& os, const MixedTensor& x) {
  os << tensor_to_json(x) << "\n";
}

MixedTensor read_tensor(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r\n") != std::string::npos) {
      return tensor_from_json(line);
    }
  }
  throw std::invalid_argument("no tensor found in stream");
}

}  // namespace mta
