// Batch runner: one JSON config in, result.json / series.csv / plot.csv out.
// Exit status 0 = success, 2 = a verification check failed numerically,
// 1 = operational error.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "entroact/cli.hpp"
#include "entroact/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"entroact - entropy estimation for semigroup actions"};
  std::string config_path;
  std::string output_dir;
  int workers = 0;
  app.add_option("--config", config_path, "path to the run config (JSON)")
      ->required();
  app.add_option("--output-dir", output_dir,
                 "override the config's output directory");
  app.add_option("--workers", workers, "override the config's worker count");
  CLI11_PARSE(app, argc, argv);

  try {
    auto config = entroact::cli::load_config_file(config_path);
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (workers > 0) config.workers = workers;
    const int status = entroact::cli::run(config);
    if (status == 2)
      std::fprintf(stderr, "verification check failed (see result.json)\n");
    return status;
  } catch (const entroact::CapacityError& e) {
    std::fprintf(stderr, "capacity error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
