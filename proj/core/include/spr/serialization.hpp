#pragma once

// JSON encodings. Points are arrays of D numbers, complex values are
// [re, im] pairs.

#include <nlohmann/json.hpp>

#include "spr/model.hpp"
#include "spr/support_recovery.hpp"

namespace spr {

void to_json(nlohmann::json& j, const PointSet& p);
void from_json(const nlohmann::json& j, PointSet& p);

void to_json(nlohmann::json& j, const AcfAtoms& a);
void from_json(const nlohmann::json& j, AcfAtoms& a);

void to_json(nlohmann::json& j, const KernelDescriptor& k);
void from_json(const nlohmann::json& j, KernelDescriptor& k);

void to_json(nlohmann::json& j, const FourierSamples& s);
void from_json(const nlohmann::json& j, FourierSamples& s);

void to_json(nlohmann::json& j, const RecoveryConfig& c);
void from_json(const nlohmann::json& j, RecoveryConfig& c);

void to_json(nlohmann::json& j, const Support& s);
void to_json(nlohmann::json& j, const Amplitudes& a);
void to_json(nlohmann::json& j, const DifferenceSet& d);

}  // namespace spr

namespace nlohmann {

template <>
struct adl_serializer<spr::Support> {
  static spr::Support from_json(const json& j);
  static void to_json(json& j, const spr::Support& s) { spr::to_json(j, s); }
};

template <>
struct adl_serializer<spr::Amplitudes> {
  static spr::Amplitudes from_json(const json& j);
  static void to_json(json& j, const spr::Amplitudes& a) { spr::to_json(j, a); }
};

template <>
struct adl_serializer<spr::DifferenceSet> {
  static spr::DifferenceSet from_json(const json& j);
  static void to_json(json& j, const spr::DifferenceSet& d) { spr::to_json(j, d); }
};

}  // namespace nlohmann
