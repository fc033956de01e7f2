// helm: generate synthetic scenarios, train/calibrate/detect on CSV data and
// run the benchmark sweep.

#include <CLI11.hpp>

#include <helm/csv.hpp>
#include <helm/detector.hpp>
#include <helm/ensemble.hpp>
#include <helm/error.hpp>
#include <helm/experiment.hpp>
#include <helm/metrics.hpp>
#include <helm/serialization.hpp>
#include <helm/synthgen.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kIo = 3, kNumerical = 4 };

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int) { g_stop.store(true); }

struct Common {
    std::string out_dir;
    bool force = false;
};

struct GenerateArgs {
    int n = 5;
    std::string reading = "identity";
    std::uint64_t seed = 0;
    std::uint64_t rep = 0;
    Eigen::Index samples = 14000;
    Eigen::Index sensors = 200;
    bool any_n = false;
    bool no_faults = false;
};

struct ModelArgs {
    std::string kind = "helm";
    std::vector<Eigen::Index> l1{20};
    Eigen::Index l2 = 100;
    double lambda = 1e-2;
    double c = 1e-5;
    int ensemble = 5;
    Eigen::Index pca = 15;
    std::uint64_t seed = 0;
    std::uint64_t rep = 0;
    int fista_max_iter = 500;
};

struct TrainArgs {
    std::string data;
    std::string model = "model.json";
    ModelArgs m;
};

struct CalibrateArgs {
    std::string model = "model.json";
    std::string data;
    double gamma = 1.5;
    double p = helm::kDefaultPercentile;
};

struct DetectArgs {
    std::string model = "model.json";
    std::string data;
    std::string out = "detections.csv";
};

struct BenchmarkArgs {
    int reps = 20;
    int n = 5;
    std::string reading = "identity";
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string grid = "winning";
    std::vector<std::string> models{"helm", "elm", "pca-elm"};
    std::vector<double> gammas;
    std::vector<Eigen::Index> l1, l2, pca;
    std::vector<double> lambdas, cs;
    int ensemble = 5;
    double p = helm::kDefaultPercentile;
    Eigen::Index samples = 14000;
    Eigen::Index sensors = 200;
    int fista_max_iter = 500;
    bool any_n = false;
};

fs::path output_dir(const Common& common) {
    if (!common.out_dir.empty()) return common.out_dir;
    if (const char* env = std::getenv("HELM_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw helm::IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void refuse_overwrite(const fs::path& p, bool force) {
    if (!force && fs::exists(p)) {
        throw helm::IoError(p.string() + " exists; pass --force to overwrite");
    }
}

void echo_config(const CLI::App& app, const fs::path& dir, const std::string& command) {
    ensure_dir(dir);
    const fs::path p = dir / (command + "_config.ini");
    std::ofstream out(p);
    if (!out) throw helm::IoError("cannot write " + p.string());
    std::istringstream all(app.config_to_str(true, false));
    const std::string prefix = command + ".";
    for (std::string line; std::getline(all, line);) {
        const auto eq = line.find('=');
        const auto dot = line.find('.');
        if (dot == std::string::npos || dot > eq || line.rfind(prefix, 0) == 0) out << line << '\n';
    }
}

void check_n(int n, bool any_n) {
    if (n < 1) throw helm::InvalidArgument("--n must be positive");
    if (!any_n && n != 5 && n != 10) {
        throw helm::InvalidArgument("--n must be 5 or 10 (use --any-n for other values)");
    }
}

helm::ModelConfig model_config(const ModelArgs& a) {
    helm::ModelConfig cfg;
    cfg.kind = helm::model_kind_from_string(a.kind);
    cfg.helm.ae_sizes = cfg.kind == helm::ModelKind::helm ? a.l1 : std::vector<Eigen::Index>{};
    cfg.helm.top_size = a.l2;
    cfg.helm.lambda = a.lambda;
    cfg.helm.c = a.c;
    cfg.helm.ensemble_size = a.ensemble;
    cfg.helm.seed = a.seed;
    cfg.helm.fista_max_iter = a.fista_max_iter;
    cfg.pca_components = a.pca;
    cfg.validate();
    return cfg;
}

// Reorders the columns of `table` to match `expected`, or names what is missing.
helm::SensorMatrix match_schema(const helm::SensorTable& table,
                                const std::vector<std::string>& expected) {
    if (table.columns == expected) return table.data;
    std::map<std::string, Eigen::Index> index;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        index[table.columns[i]] = static_cast<Eigen::Index>(i);
    }
    std::vector<std::string> missing, extra;
    for (const auto& name : expected) {
        if (!index.count(name)) missing.push_back(name);
    }
    for (const auto& name : table.columns) {
        if (std::find(expected.begin(), expected.end(), name) == expected.end()) extra.push_back(name);
    }
    if (!missing.empty() || !extra.empty()) {
        auto join = [](const std::vector<std::string>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size() && i < 10; ++i) s += (i ? "," : "") + v[i];
            if (v.size() > 10) s += ",...";
            return s.empty() ? std::string("none") : s;
        };
        throw helm::InvalidArgument("column schema mismatch: missing [" + join(missing) +
                                    "], unexpected [" + join(extra) + "]");
    }
    helm::SensorMatrix out(table.data.rows(), static_cast<Eigen::Index>(expected.size()));
    for (std::size_t j = 0; j < expected.size(); ++j) {
        out.col(static_cast<Eigen::Index>(j)) = table.data.col(index[expected[j]]);
    }
    return out;
}

int cmd_generate(const GenerateArgs& a, const Common& common, const CLI::App& app) {
    check_n(a.n, a.any_n);
    helm::GeneratorSpec spec;
    spec.samples = a.samples;
    spec.sensors = a.sensors;
    spec.base_signals = a.n;
    spec.reading = helm::reading_from_string(a.reading);
    spec.seed = a.seed;
    spec.inject_faults = !a.no_faults;
    spec.validate();

    const fs::path dir = output_dir(common);
    ensure_dir(dir);
    const std::vector<std::string> names = {"dataset", "train", "val", "fp", "fault1",
                                            "fault2",  "fault3", "fault4", "fault5"};
    for (const auto& name : names) refuse_overwrite(dir / (name + ".csv"), common.force);
    refuse_overwrite(dir / "provenance.json", common.force);

    helm::RngStream rng = helm::dataset_stream(a.seed, a.rep);
    const helm::SyntheticDataset ds = helm::generate(spec, rng);
    const auto columns = helm::default_column_names(ds.x.cols());
    helm::write_sensor_csv(dir / "dataset.csv", {columns, ds.x});
    const helm::Splits splits = helm::render_splits(ds);
    helm::write_sensor_csv(dir / "train.csv", {columns, splits.train});
    helm::write_sensor_csv(dir / "val.csv", {columns, splits.val});
    helm::write_sensor_csv(dir / "fp.csv", {columns, splits.fp_test});
    for (int f = 0; f < helm::kNumFaults; ++f) {
        helm::write_sensor_csv(dir / ("fault" + std::to_string(f + 1) + ".csv"),
                               {columns, splits.fault_tests[static_cast<std::size_t>(f)]});
    }
    std::ofstream prov(dir / "provenance.json");
    if (!prov) throw helm::IoError("cannot write provenance.json");
    prov << helm::provenance_to_json(ds.provenance) << '\n';
    echo_config(app, dir, "generate");
    std::cout << "wrote " << ds.x.rows() << "x" << ds.x.cols() << " dataset to " << dir.string()
              << '\n';
    return kOk;
}

int cmd_train(const TrainArgs& a, const Common& common, const CLI::App& app) {
    const helm::ModelConfig cfg = model_config(a.m);
    const fs::path model_path = a.model;
    refuse_overwrite(model_path, common.force);
    const helm::SensorTable table = helm::read_sensor_csv(fs::path(a.data));
    helm::StoredModel stored;
    stored.input_columns = table.columns;
    stored.ensemble =
        helm::train_ensemble(table.data, cfg, helm::model_stream(a.m.seed, a.m.rep, cfg.kind));
    helm::save_model(model_path, stored);
    echo_config(app, common.out_dir.empty() && model_path.has_parent_path()
                         ? model_path.parent_path()
                         : output_dir(common),
                "train");
    std::cout << "trained " << helm::to_string(cfg.kind) << " ensemble of "
              << stored.ensemble.members.size() << " on " << table.data.rows() << " samples\n";
    return kOk;
}

int cmd_calibrate(const CalibrateArgs& a, const Common& common, const CLI::App& app) {
    helm::StoredModel stored = helm::load_model(a.model);
    const helm::SensorTable table = helm::read_sensor_csv(fs::path(a.data));
    const helm::SensorMatrix x = match_schema(table, stored.input_columns);
    const helm::Vector y = helm::run_ensemble(stored.ensemble, x);
    stored.detector = helm::calibrate(y, a.gamma, a.p);
    helm::save_model(a.model, stored);
    echo_config(app, common.out_dir.empty() && fs::path(a.model).has_parent_path()
                         ? fs::path(a.model).parent_path()
                         : output_dir(common),
                "calibrate");
    std::cout << "threshold " << helm::format_double(stored.detector->threshold) << " (gamma "
              << a.gamma << ", p " << a.p << ")\n";
    return kOk;
}

int cmd_detect(const DetectArgs& a, const Common& common, const CLI::App& app) {
    const helm::StoredModel stored = helm::load_model(a.model);
    if (!stored.detector || !stored.detector->calibrated()) {
        throw helm::InvalidArgument("uncalibrated model: run calibrate first");
    }
    const helm::SensorTable table = helm::read_sensor_csv(fs::path(a.data));
    const helm::SensorMatrix x = match_schema(table, stored.input_columns);
    const auto detections = helm::decide(helm::run_ensemble(stored.ensemble, x), *stored.detector);
    fs::path out = a.out;
    if (out.is_relative() && !common.out_dir.empty()) out = fs::path(common.out_dir) / out;
    if (out.has_parent_path()) ensure_dir(out.parent_path());
    refuse_overwrite(out, common.force);
    helm::write_detections_csv(out, detections);
    echo_config(app, out.has_parent_path() ? out.parent_path() : fs::path("."), "detect");
    const auto mag = helm::mean_true_positive_magnification(detections);
    std::cout << "flagged " << helm::flag_rate(detections) * 100.0 << "% of " << detections.size()
              << " samples";
    if (mag) std::cout << ", mean magnification " << *mag;
    std::cout << '\n';
    return kOk;
}

int cmd_benchmark(const BenchmarkArgs& a, const Common& common, const CLI::App& app) {
    check_n(a.n, a.any_n);
    if (a.reps < 1) throw helm::InvalidArgument("--reps must be >= 1");
    helm::SweepOptions opt;
    opt.spec.samples = a.samples;
    opt.spec.sensors = a.sensors;
    opt.spec.base_signals = a.n;
    opt.spec.reading = helm::reading_from_string(a.reading);
    opt.spec.validate();
    opt.reps = a.reps;
    opt.seed = a.seed;
    opt.p = a.p;
    opt.jobs = a.jobs;
    opt.base.ensemble_size = a.ensemble;
    opt.base.fista_max_iter = a.fista_max_iter;
    opt.stop = &g_stop;
    for (const auto& name : a.models) {
        const helm::ModelKind kind = helm::model_kind_from_string(name);
        helm::Grid grid;
        if (a.grid == "paper") {
            grid = helm::Grid::paper();
        } else if (a.grid == "winning") {
            grid = helm::Grid::winning(kind);
        } else {
            throw helm::InvalidArgument("--grid must be 'paper' or 'winning'");
        }
        if (!a.gammas.empty()) grid.gammas = a.gammas;
        if (!a.l1.empty()) grid.l1 = a.l1;
        if (!a.l2.empty()) grid.l2 = a.l2;
        if (!a.lambdas.empty()) grid.lambdas = a.lambdas;
        if (!a.cs.empty()) grid.cs = a.cs;
        if (!a.pca.empty()) grid.pca_components = a.pca;
        grid.validate();
        opt.families.push_back({kind, grid});
    }

    const fs::path dir = output_dir(common);
    ensure_dir(dir);
    for (const char* name : {"report.csv", "timings.csv", "gamma_sweep.csv"}) {
        refuse_overwrite(dir / name, common.force);
    }
    echo_config(app, dir, "benchmark");

    g_stop.store(false);
    std::signal(SIGINT, on_sigint);
    helm::ExperimentReport report = helm::grid_sweep(opt);
    std::signal(SIGINT, SIG_DFL);
    if (report.reps == 0) {
        std::cerr << "interrupted before any repetition finished\n";
        return kFailure;
    }
    helm::write_report_csv(dir / "report.csv", report);
    helm::write_timings_csv(dir / "timings.csv", report);
    helm::write_gamma_sweep_csv(dir / "gamma_sweep.csv", helm::gamma_sweep(report));
    helm::print_report(std::cout, report);
    if (g_stop.load()) {
        std::cerr << "interrupted: wrote partial results over " << report.reps << " repetitions\n";
        return kFailure;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HELM fault detection: synthetic benchmark and CSV pipeline"};
    app.set_config("--config", "", "key = value file; command line flags take precedence");
    app.require_subcommand(1);

    Common common;
    app.add_option("--out-dir", common.out_dir,
                   "output directory (default: $HELM_OUTPUT_DIR or the working directory)");
    app.add_flag("--force", common.force, "overwrite existing output files");

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "write a synthetic dataset and its provenance");
    g->add_option("--n", gen.n, "number of base signals (5 or 10)")->capture_default_str();
    g->add_option("--reading", gen.reading, "identity or log")
        ->check(CLI::IsMember({"identity", "log"}))
        ->capture_default_str();
    g->add_option("--seed", gen.seed, "user seed")->capture_default_str();
    g->add_option("--rep", gen.rep, "repetition index")->capture_default_str();
    g->add_option("--samples", gen.samples, "rows, a multiple of 14")->capture_default_str();
    g->add_option("--sensors", gen.sensors, "columns")->capture_default_str();
    g->add_flag("--any-n", gen.any_n, "allow n outside {5, 10}");
    g->add_flag("--no-faults", gen.no_faults, "render every segment healthy");

    TrainArgs tr;
    auto add_model_options = [](CLI::App* sub, ModelArgs& m) {
        sub->add_option("--kind", m.kind, "helm, elm or pca-elm")
            ->check(CLI::IsMember({"helm", "elm", "pca-elm"}))
            ->capture_default_str();
        sub->add_option("--l1", m.l1, "autoencoder sizes, one per layer")->capture_default_str();
        sub->add_option("--l2", m.l2, "one-class head size")->capture_default_str();
        sub->add_option("--lambda", m.lambda, "autoencoder L1 weight")->capture_default_str();
        sub->add_option("--c", m.c, "ridge weight of the head")->capture_default_str();
        sub->add_option("--ensemble", m.ensemble, "ensemble members")->capture_default_str();
        sub->add_option("--pca", m.pca, "PCA components (pca-elm)")->capture_default_str();
        sub->add_option("--seed", m.seed, "user seed")->capture_default_str();
        sub->add_option("--rep", m.rep, "repetition index")->capture_default_str();
        sub->add_option("--fista-max-iter", m.fista_max_iter, "FISTA iteration cap")
            ->capture_default_str();
    };
    auto* t = app.add_subcommand("train", "train an ensemble on healthy CSV data");
    t->add_option("--data", tr.data, "healthy training CSV")->required();
    t->add_option("--model", tr.model, "model file to write")->capture_default_str();
    add_model_options(t, tr.m);

    CalibrateArgs ca;
    auto* c = app.add_subcommand("calibrate", "set the detection threshold on healthy data");
    c->add_option("--model", ca.model, "model file, updated in place")->capture_default_str();
    c->add_option("--data", ca.data, "healthy calibration CSV, disjoint from training")
        ->required();
    c->add_option("--gamma", ca.gamma, "threshold scale")->capture_default_str();
    c->add_option("--p", ca.p, "residual percentile")->capture_default_str();

    DetectArgs de;
    auto* d = app.add_subcommand("detect", "label every sample of a CSV");
    d->add_option("--model", de.model, "calibrated model file")->capture_default_str();
    d->add_option("--data", de.data, "CSV to label")->required();
    d->add_option("--out", de.out, "detections CSV")->capture_default_str();

    BenchmarkArgs be;
    auto* b = app.add_subcommand("benchmark", "run the synthetic benchmark sweep");
    b->add_option("--reps", be.reps, "repetitions")->capture_default_str();
    b->add_option("--n", be.n, "number of base signals (5 or 10)")->capture_default_str();
    b->add_option("--reading", be.reading, "identity or log")
        ->check(CLI::IsMember({"identity", "log"}))
        ->capture_default_str();
    b->add_option("--seed", be.seed, "user seed")->capture_default_str();
    b->add_option("--jobs", be.jobs, "worker threads")->capture_default_str();
    b->add_option("--grid", be.grid, "winning or paper")
        ->check(CLI::IsMember({"winning", "paper"}))
        ->capture_default_str();
    b->add_option("--models", be.models, "model families")
        ->check(CLI::IsMember({"helm", "elm", "pca-elm"}))
        ->capture_default_str();
    b->add_option("--gammas", be.gammas, "override gamma axis");
    b->add_option("--l1", be.l1, "override L1 axis");
    b->add_option("--l2", be.l2, "override L2 axis");
    b->add_option("--lambdas", be.lambdas, "override lambda axis");
    b->add_option("--cs", be.cs, "override C axis");
    b->add_option("--pca", be.pca, "override PCA components axis");
    b->add_option("--ensemble", be.ensemble, "ensemble members")->capture_default_str();
    b->add_option("--p", be.p, "residual percentile")->capture_default_str();
    b->add_option("--samples", be.samples, "rows per dataset, a multiple of 14")
        ->capture_default_str();
    b->add_option("--sensors", be.sensors, "sensors per dataset")->capture_default_str();
    b->add_option("--fista-max-iter", be.fista_max_iter, "FISTA iteration cap")
        ->capture_default_str();
    b->add_flag("--any-n", be.any_n, "allow n outside {5, 10}");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*g) return cmd_generate(gen, common, app);
        if (*t) return cmd_train(tr, common, app);
        if (*c) return cmd_calibrate(ca, common, app);
        if (*d) return cmd_detect(de, common, app);
        if (*b) return cmd_benchmark(be, common, app);
    } catch (const helm::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const helm::DimensionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const helm::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const helm::NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}
