#include "spr/harness/manifest.hpp"

#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "spr/errors.hpp"

namespace spr::harness {

std::string git_blob_hash(const std::string& content) {
  const std::string payload = "blob " + std::to_string(content.size()) + '\0' + content;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(payload.data(), payload.size(), digest, &length, EVP_sha1(), nullptr) != 1)
    throw Error("git_blob_hash: digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

nlohmann::json write_results(const std::string& csv_path, const std::string& csv,
                             const nlohmann::json& spec, const nlohmann::json& summary) {
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw Error("cannot write " + csv_path);
  out << csv;

  nlohmann::json manifest{{"results", csv_path},
                          {"content_hash", git_blob_hash(csv)},
                          {"bytes", csv.size()},
                          {"spec", spec},
                          {"summary", summary}};
  const std::string manifest_path = csv_path + ".manifest.json";
  std::ofstream m(manifest_path);
  if (!m) throw Error("cannot write " + manifest_path);
  m << manifest.dump(2) << '\n';
  return manifest;
}

}  // namespace spr::harness
