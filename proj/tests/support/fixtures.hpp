#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>

#include "qa/manifest.hpp"

namespace fixtures {

  inline std::filesystem::path data_dir() {
    return QA_DATA_DIR;
  }

  // data/<name>.json, loaded once per process.
  inline qa::Manifest const& load(std::string const& name) {
    static std::mutex                         mutex;
    static std::map<std::string, qa::Manifest> cache;
    std::lock_guard                           lock(mutex);
    auto                                      it = cache.find(name);
    if (it == cache.end()) {
      it = cache.emplace(name, qa::load_manifest(data_dir() / (name + ".json"))).first;
    }
    return it->second;
  }

  inline qa::QaStructure const& structure(std::string const& name) {
    return *load(name).structure;
  }

  inline qa::SemigroupOracle const& oracle(std::string const& name) {
    return *load(name).oracle;
  }

}  // namespace fixtures
