#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stlight/error.hpp"
#include "stlight/scenario.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) stlight::fail(stlight::ErrorCode::ValidationError, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void print_validity(const std::vector<stlight::ValidityCheck>& report) {
  for (const auto& c : report) {
    std::cout << (c.passed ? "ok   " : (c.hard ? "FAIL " : "warn ")) << c.name << "  margin "
              << stlight::format_number(c.margin) << "  " << c.detail << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-colour stationary light simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string preset;
  int snapshot_every = 0;
  bool check_only = false;

  auto* run = app.add_subcommand("run", "run a scenario from a config file and/or preset");
  run->add_option("config", config_path, "config file (section.key = value); applied after the preset");
  run->add_option("--out-dir", out_dir, "output directory (overrides output.dir)");
  run->add_option("--snapshot-every", snapshot_every, "write every N-th snapshot")->check(CLI::PositiveNumber);
  run->add_option("--preset", preset, "start from a shipped preset");
  run->add_flag("--check", check_only, "parse and report validity only");

  auto* list = app.add_subcommand("list-presets", "list shipped presets");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& p : stlight::list_presets()) std::cout << p.name << "\t" << p.description << "\n";
    return 0;
  }

  try {
    if (config_path.empty() && preset.empty()) {
      std::cerr << "error: give a config file, --preset NAME, or both\n";
      return 2;
    }
    std::string text;
    if (!preset.empty()) text = stlight::preset_config(preset);
    if (!config_path.empty()) text += "\n" + read_file(config_path);
    auto cfg = stlight::parse_config(text);
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    if (snapshot_every > 0) cfg.output.snapshot_every = snapshot_every;

    if (check_only) {
      std::cout << stlight::echo_config(cfg);
      print_validity(stlight::check_config(cfg));
      return 0;
    }

    const auto result = stlight::execute(cfg);
    stlight::write_outputs(result, cfg.output.dir, cfg.output.snapshot_every);
    if (result.summary.value("status", "") != "ok") {
      std::cerr << "run failed; partial outputs in " << cfg.output.dir << "\n";
      for (const auto& e : result.summary["errors"]) std::cerr << "  " << e.get<std::string>() << "\n";
      return 3;
    }
    std::cout << "wrote " << cfg.output.dir << "\n";
    return 0;
  } catch (const stlight::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == stlight::ErrorCode::ParseError ? 2 : 1;
  }
}
