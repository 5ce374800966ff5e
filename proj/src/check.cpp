#include "mcnv/check.hpp"

#include <stdexcept>

namespace mcnv {

void require_arg(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

}  // namespace mcnv
