#include "cli/config.hpp"

#include <fstream>

#include <fmt/format.h>

#include "hamrep/error.hpp"

namespace hamrep::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> config_file_args(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open config file '{}'", path.string()));
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw InputError(fmt::format("{}:{}: expected key = value", path.string(), lineno));
    const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    if (key.empty() || key == "config" || key == "help") {
      throw InputError(fmt::format("{}:{}: invalid key '{}'", path.string(), lineno, key));
    }
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

}  // namespace hamrep::cli
