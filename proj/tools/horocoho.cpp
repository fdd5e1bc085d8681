#include "horocoho/harness.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"horocoho: horocycle-map cohomological equation experiments"};
    std::string experiment, config_path, out_path;
    int threads = 0;
    app.add_option("experiment", experiment,
                   "verify | scan-upper | scan-tame | scan-lower | scan-map | "
                   "cocycle | convergence")
        ->required();
    app.add_option("--config", config_path, "flat key=value config file");
    app.add_option("--out", out_path, "CSV output path");
    app.add_option("--threads", threads, "worker threads (0 = auto)");
    CLI11_PARSE(app, argc, argv);

    horocoho::ScanConfig cfg;
    if (!config_path.empty()) {
        try {
            cfg = horocoho::load_config(config_path);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "%s\n", e.what());
            return 2;
        }
    }
    cfg.experiment = experiment;
    if (!out_path.empty()) cfg.out = out_path;
    if (threads > 0) cfg.threads = threads;
    return horocoho::run(cfg);
}
