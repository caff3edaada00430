#pragma once

#include <string>

#include "lf/ast.hpp"

namespace lf {

// SHA-256 of the package's canonical textual encoding (id excluded).
PackageId hash_package(const Package& pkg);

std::string sha256_hex(const std::string& bytes);

}  // namespace lf
