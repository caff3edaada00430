#include "lf/hash.hpp"

#include <openssl/evp.h>

#include "lf/parser.hpp"

namespace lf {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

PackageId hash_package(const Package& pkg) {
  // pretty_package never emits the id, so the encoding is id-blind.
  return PackageId{sha256_hex(pretty_package(pkg))};
}

}  // namespace lf
