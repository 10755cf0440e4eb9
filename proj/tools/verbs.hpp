#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratk/io.hpp"

namespace stratk::cli {

struct Options {
  std::size_t cap = 2;
  std::string category = "signed_perm(1)";
  std::uint64_t seed = 1;
  std::string json_path;
  std::string out_path;
  bool quiet = false;
};

/// What a verb hands back: exit code, report body and human lines.
struct Outcome {
  int code = 0;
  io::Json report = io::Json::object();
  std::vector<std::string> lines;
  std::optional<io::Json> result;  ///< emitted object, if any
};

Outcome validate(const std::string& file, const Options& o);
Outcome assemble(const std::string& file, const Options& o);
Outcome classify(const std::string& file, const Options& o);
Outcome combine(const std::string& op, const std::string& a, const std::string& b, const Options& o);
Outcome apply_functor(const std::string& functor, const std::string& file, const Options& o);
Outcome pullback(const std::string& map_file, const std::string& file, const Options& o);
Outcome flatten(const std::string& file, const Options& o);
Outcome tangent(const std::string& file, const Options& o);
Outcome k0(const std::string& file, const Options& o);
Outcome k0_hom(const std::string& file, std::optional<std::size_t> stratum, const std::string& map_file,
               const Options& o);
Outcome check(const std::vector<std::string>& files, const Options& o);

}  // namespace stratk::cli
