#pragma once

#include "tmlcost/cli/cli.hpp"

#include <string>

namespace tmltest {

inline std::string corpus_path(const std::string& name) { return std::string(TML_CORPUS_DIR) + "/" + name; }
inline std::string fixture_path(const std::string& name) { return std::string(TML_FIXTURE_DIR) + "/" + name; }

inline std::shared_ptr<const tmlcost::lang::Program> corpus(const std::string& name) {
  return tmlcost::cli::load_program(tmlcost::cli::read_file(corpus_path(name)));
}

inline std::shared_ptr<const tmlcost::lang::Program> program(std::string_view text) {
  return tmlcost::cli::load_program(text);
}

inline tmlcost::Rational q(std::int64_t n, std::int64_t d = 1) { return tmlcost::Rational(n, d); }

}  // namespace tmltest
