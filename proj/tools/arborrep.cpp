#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "arborrep/errors.hpp"
#include "arborrep/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"exact analysis of groups acting on truncated rooted trees"};
  app.require_subcommand(1);

  CLI::App* analyze = app.add_subcommand("analyze", "run the selected analyses on a group spec");
  std::string spec_path;
  analyze->add_option("--spec", spec_path, "path to a JSON group spec")->required();
  int depth = 0;
  analyze->add_option("--depth", depth, "truncation depth (overrides the spec)")
      ->check(CLI::PositiveNumber);
  std::string json_path;
  analyze->add_option("--json", json_path, "write the JSON report to this file");
  std::string checks;
  analyze->add_option("--checks", checks,
                      "comma separated subset of transitivity,gelfand,decompose,order,zeta");
  std::uint64_t cap_enum = 0;
  analyze->add_option("--cap-enum", cap_enum, "largest group order the exact character-table analyses will enumerate")
      ->check(CLI::PositiveNumber);
  std::uint64_t cap_level = 0;
  analyze->add_option("--cap-level", cap_level, "largest pair-cell count the orbit analyses will visit")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(spec_path);
    if (!in) {
      std::cerr << "spec error: cannot read " << spec_path << "\n";
      return 1;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    arborrep::GroupSpec spec = arborrep::parse_spec(buffer.str());

    if (analyze->count("--depth") > 0) {
      spec.depth = depth;
      spec.raw["depth"] = depth;
    }
    if (analyze->count("--checks") > 0) {
      spec.checks.clear();
      arborrep::Json names = arborrep::Json::array();
      std::stringstream parts(checks);
      std::string name;
      while (std::getline(parts, name, ',')) {
        if (name.empty()) continue;
        if (std::find(arborrep::known_checks().begin(), arborrep::known_checks().end(), name) ==
            arborrep::known_checks().end()) {
          std::cerr << "spec error: unknown check " << name << "\n";
          return 1;
        }
        if (spec.checks.insert(name).second) names.push_back(name);
      }
      spec.raw["checks"] = names;
    }
    if (analyze->count("--cap-enum") > 0) {
      spec.cap_enum = cap_enum;
      spec.raw["cap_enum"] = cap_enum;
    }
    if (analyze->count("--cap-level") > 0) {
      spec.cap_level = cap_level;
      spec.raw["cap_level"] = cap_level;
    }

    arborrep::Report report = arborrep::run(spec);
    std::cout << report.text;
    if (!json_path.empty()) {
      std::ofstream out(json_path);
      if (!out) {
        std::cerr << "error: cannot write " << json_path << "\n";
        return 1;
      }
      out << report.json.dump(2) << "\n";
    }
    return 0;
  } catch (const arborrep::SpecError& ex) {
    std::cerr << ex.what() << "\n";
    return 1;
  } catch (const arborrep::CapExceeded& ex) {
    std::cerr << "capacity error: " << ex.what() << "\n";
    return 2;
  } catch (const arborrep::IntransitiveAction& ex) {
    std::cerr << "spec error: " << ex.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "spec error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
