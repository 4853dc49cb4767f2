#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"multisym: homogeneous Lagrangians, Legendre images and multisymplectic actions"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  const std::pair<const char*, const char*> commands[] = {
      {"verify", "run the Lagrangian, Legendre and multisymplectic checks"},
      {"action", "compute and compare the action integrals on a surface"},
      {"image", "sample the Legendre image and write it as CSV"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out, "report path")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : multisym::cli::kExitUsage;
  }
  return multisym::cli::run(app.get_subcommands().front()->get_name(), config, out, std::cerr);
}
