#include "crnc/parallel.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace crnc {

unsigned resolve_jobs(std::optional<unsigned> flag) {
  if (flag) return *flag == 0 ? 1 : *flag;
  if (const char* env = std::getenv("CRNC_JOBS"); env && *env) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(env, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != std::string(env).size() || v == 0 || v > 4096)
      throw std::invalid_argument(std::string("CRNC_JOBS must be a positive integer, got '") + env + "'");
    return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

}  // namespace crnc
