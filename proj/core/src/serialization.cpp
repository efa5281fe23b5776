#include "spr/serialization.hpp"

#include "spr/errors.hpp"

using nlohmann::json;

namespace spr {
namespace {

std::vector<double> pair_of(const std::complex<double>& z) { return {z.real(), z.imag()}; }

std::complex<double> complex_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("json: complex must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

void to_json(json& j, const PointSet& p) {
  j = json::array();
  for (std::size_t i = 0; i < p.size(); ++i) j.push_back(std::vector<double>(p[i].begin(), p[i].end()));
}

void from_json(const json& j, PointSet& p) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("json: point set must be a nonempty array");
  const int dim = static_cast<int>(j[0].size());
  if (dim < 1) throw InvalidArgument("json: points must have at least one coordinate");
  std::vector<double> coords;
  coords.reserve(j.size() * dim);
  for (const json& point : j) {
    if (!point.is_array() || static_cast<int>(point.size()) != dim)
      throw InvalidArgument("json: points must all have the same dimension");
    for (const json& c : point) coords.push_back(c.get<double>());
  }
  p = PointSet(dim, std::move(coords));
}

void to_json(json& j, const AcfAtoms& a) {
  j = json{{"dimension", a.locations.dimension()},
           {"locations", a.locations},
           {"weights", a.weights}};
}

void from_json(const json& j, AcfAtoms& a) {
  a.locations = j.at("locations").get<PointSet>();
  a.weights = j.at("weights").get<std::vector<double>>();
  if (a.weights.size() != a.locations.size())
    throw InvalidArgument("json: atom locations and weights differ in length");
}

void to_json(json& j, const KernelDescriptor& k) {
  j = json{{"kind", "ideal-low-pass"}};
  if (std::isfinite(k.bandwidth)) j["bandwidth"] = k.bandwidth;
  else j["bandwidth"] = nullptr;
}

void from_json(const json& j, KernelDescriptor& k) {
  if (j.value("kind", std::string("ideal-low-pass")) != "ideal-low-pass")
    throw InvalidArgument("json: unsupported kernel kind");
  const json& bw = j.contains("bandwidth") ? j.at("bandwidth") : json(nullptr);
  k.bandwidth = bw.is_null() ? std::numeric_limits<double>::infinity() : bw.get<double>();
}

void to_json(json& j, const FourierSamples& s) {
  json values = json::array();
  for (const auto& z : s.values) values.push_back(pair_of(z));
  j = json{{"max_index", s.max_index()},
           {"sampling_step", s.sampling_step},
           {"kernel", s.kernel},
           {"values", std::move(values)}};
}

void from_json(const json& j, FourierSamples& s) {
  s.values.clear();
  for (const json& z : j.at("values")) s.values.push_back(complex_from(z));
  if (s.values.size() % 2 == 0) throw InvalidArgument("json: samples must cover m = -M..M");
  s.sampling_step = j.at("sampling_step").get<double>();
  if (!(s.sampling_step > 0.0)) throw InvalidArgument("json: sampling_step must be positive");
  s.kernel = j.contains("kernel") ? j.at("kernel").get<KernelDescriptor>() : KernelDescriptor{};
}

void to_json(json& j, const RecoveryConfig& c) {
  j = json{{"cache", c.use_caching},
           {"prune", c.prune_differences},
           {"symmetric", c.symmetric_cost},
           {"denoise", c.denoise_partials}};
}

void from_json(const json& j, RecoveryConfig& c) {
  c.use_caching = j.value("cache", false);
  c.prune_differences = j.value("prune", false);
  c.symmetric_cost = j.value("symmetric", false);
  c.denoise_partials = j.value("denoise", false);
  c.validate();
}

void to_json(json& j, const Support& s) {
  j = json{{"dimension", s.dimension()}, {"points", s.points()}};
}

void to_json(json& j, const Amplitudes& a) { j = a.values(); }

void to_json(json& j, const DifferenceSet& d) {
  j = json{{"dimension", d.dimension()}, {"diffs", d.diffs()}};
  if (d.sigma_hint()) j["sigma_hint"] = *d.sigma_hint();
}

}  // namespace spr

namespace nlohmann {

spr::Support adl_serializer<spr::Support>::from_json(const json& j) {
  return spr::Support(j.at("points").get<spr::PointSet>());
}

spr::Amplitudes adl_serializer<spr::Amplitudes>::from_json(const json& j) {
  return spr::Amplitudes(j.get<std::vector<double>>());
}

spr::DifferenceSet adl_serializer<spr::DifferenceSet>::from_json(const json& j) {
  std::optional<double> hint;
  if (j.contains("sigma_hint") && !j.at("sigma_hint").is_null())
    hint = j.at("sigma_hint").get<double>();
  return spr::DifferenceSet(j.at("diffs").get<spr::PointSet>(), hint);
}

}  // namespace nlohmann
