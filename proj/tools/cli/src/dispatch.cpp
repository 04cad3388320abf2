#include <iostream>

#include "common.hpp"
#include "latentlens/error.hpp"
#include "latentlens_cli/cli.hpp"

namespace latentlens::cli {

namespace {

int domain_error(const char* kind, const std::string& message) {
  nlohmann::json j = {{"error", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
  return 1;
}

const char* kind_of(const Error& e) {
  if (dynamic_cast<const InvalidArgument*>(&e) != nullptr) return "invalid_argument";
  if (dynamic_cast<const LayoutMismatch*>(&e) != nullptr) return "layout_mismatch";
  if (dynamic_cast<const FormatError*>(&e) != nullptr) return "format_error";
  if (dynamic_cast<const IoError*>(&e) != nullptr) return "io_error";
  if (dynamic_cast<const DegenerateFit*>(&e) != nullptr) return "degenerate_fit";
  return "error";
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  Globals g;
  CLI::App app{"latentlens: latent-space curation, editing, channel analysis and masked-region metrics.\n"
               "Option precedence: command line > --config file > built-in default.\n"
               "LATENTLENS_THREADS bounds worker threads (default: all cores)."};
  app.name("latentlens");
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option defaults");
  app.add_option("--seed", g.seed, "Seed for every randomised step")->capture_default_str();
  app.add_flag("--force", g.force, "Overwrite existing outputs");
  app.add_flag("-q,--quiet", g.quiet, "No progress messages on stderr");

  register_synth(app, g);
  register_curate(app, g);
  register_edit(app, g);
  register_space(app, g);
  register_metrics(app, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nRun with --help for more information.\n";
    return 2;
  } catch (const Error& e) {
    return domain_error(kind_of(e), e.what());
  } catch (const nlohmann::json::exception& e) {
    return domain_error("format_error", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return domain_error("io_error", e.what());
  } catch (const std::exception& e) {
    return domain_error("error", e.what());
  }
  return 0;
}

}  // namespace latentlens::cli
