#pragma once

// Command dispatch shared by the CLI subcommands and manifest-driven reports.
// A request is a JSON object {"run": <command>, ...arguments}.
//
//   dim          {"manifold", "n"?}
//   membership   {"manifold"}
//   homeo-check  {"manifold", "other"}
//   wall-degree  {"wall"} or {"n"}
//   vn-run       {"family", "ring"?, "perturbations"?, "suspend"?}
//   compose      {"values", "n"} or the manifest composition table
//   scenario     {"name", ...parameters}

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "famclass/manifest.hpp"
#include "famclass/ring.hpp"

namespace famclass::commands {

using json = nlohmann::json;

struct Options {
  std::uint64_t seed = 1;
  bool strict = false;
  std::optional<Ring> ring;  // vn-run default: Z when orientable, else F2
};

/// Runs one request and returns its report record (always carries "command").
json run(const json& request, const manifest::Manifest& m, const Options& opts);

/// Runs every command of the manifest in order and wraps them in a report.
json run_manifest(const manifest::Manifest& m, const Options& opts);

}  // namespace famclass::commands
