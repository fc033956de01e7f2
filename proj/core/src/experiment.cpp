#include "helm/experiment.hpp"

#include "helm/csv.hpp"
#include "helm/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace helm {

Grid Grid::paper() {
    Grid g;
    g.gammas.assign(kPaperGammas.begin(), kPaperGammas.end());
    g.l1 = {5, 10, 20, 40, 70, 100};
    g.l2 = {20, 50, 100, 200, 400, 800};
    g.lambdas = {1e-5, 1e-3, 1e-2, 1e-1, 1.0};
    g.cs = {1e-5, 1e-3, 1e-2, 1e-1, 1.0};
    g.pca_components = {5, 10, 15};
    return g;
}

Grid Grid::winning(ModelKind kind) {
    Grid g;
    g.gammas.assign(kPaperGammas.begin(), kPaperGammas.end());
    switch (kind) {
        case ModelKind::helm:
            g.l1 = {20};
            g.l2 = {100};
            g.lambdas = {1e-2};
            g.cs = {1e-5};
            break;
        case ModelKind::elm:
            g.l2 = {400};
            g.cs = {1e-5};
            break;
        case ModelKind::pca_elm:
            g.l2 = {100};
            g.cs = {1e-5};
            g.pca_components = {15};
            break;
    }
    return g;
}

void Grid::validate() const {
    if (gammas.empty() || l1.empty() || l2.empty() || lambdas.empty() || cs.empty() ||
        pca_components.empty()) {
        throw InvalidArgument("grid: every axis needs at least one value");
    }
    for (double g : gammas) {
        if (!(g > 0.0)) throw InvalidArgument("grid: gamma must be > 0");
    }
    for (auto v : l1) {
        if (v < 1) throw InvalidArgument("grid: L1 must be >= 1");
    }
    for (auto v : l2) {
        if (v < 1) throw InvalidArgument("grid: L2 must be >= 1");
    }
    for (double v : lambdas) {
        if (!(v >= 0.0)) throw InvalidArgument("grid: lambda must be >= 0");
    }
    for (double v : cs) {
        if (!(v >= 0.0)) throw InvalidArgument("grid: C must be >= 0");
    }
    for (auto v : pca_components) {
        if (v < 1) throw InvalidArgument("grid: L_PCA must be >= 1");
    }
}

bool Cell::same_training(const Cell& other) const {
    return kind == other.kind && l1 == other.l1 && l2 == other.l2 && lambda == other.lambda &&
           c == other.c && pca_components == other.pca_components;
}

std::vector<Cell> enumerate_cells(ModelKind kind, const Grid& grid) {
    grid.validate();
    const bool uses_ae = kind == ModelKind::helm;
    const bool uses_pca = kind == ModelKind::pca_elm;
    const std::vector<Eigen::Index> none_index{0};
    const std::vector<double> none_real{0.0};
    const auto& l1 = uses_ae ? grid.l1 : none_index;
    const auto& lambdas = uses_ae ? grid.lambdas : none_real;
    const auto& pcas = uses_pca ? grid.pca_components : none_index;

    std::vector<Cell> cells;
    for (double gamma : grid.gammas)
        for (auto a : l1)
            for (auto b : grid.l2)
                for (double lambda : lambdas)
                    for (double c : grid.cs)
                        for (auto pc : pcas) cells.push_back({kind, gamma, a, b, lambda, c, pc});
    return cells;
}

std::optional<std::size_t> ExperimentReport::best_average(ModelKind kind) const {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].cell.kind != kind) continue;
        if (!best || cells[i].mean_accuracy > cells[*best].mean_accuracy) best = i;
    }
    return best;
}

std::optional<std::size_t> ExperimentReport::best_for_fault(ModelKind kind, int fault) const {
    if (fault < 0 || fault >= kNumFaults) throw InvalidArgument("fault index out of range");
    std::optional<std::size_t> best;
    const auto f = static_cast<std::size_t>(fault);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].cell.kind != kind) continue;
        if (!best || cells[i].faults[f].accuracy > cells[*best].faults[f].accuracy) best = i;
    }
    return best;
}

ReportAccumulator::ReportAccumulator(std::vector<Cell> cells) : cells_(std::move(cells)) {}

void ReportAccumulator::add(int rep, RepRecord record) {
    if (record.outcomes.size() != cells_.size() || record.train_seconds.size() != cells_.size()) {
        throw DimensionError("report: repetition record does not match the cell list");
    }
    const auto pos = std::lower_bound(records_.begin(), records_.end(), rep,
                                      [](const auto& entry, int r) { return entry.first < r; });
    if (pos != records_.end() && pos->first == rep) {
        throw InvalidArgument("report: repetition " + std::to_string(rep) + " added twice");
    }
    records_.insert(pos, {rep, std::move(record)});
}

void ReportAccumulator::merge(const ReportAccumulator& other) {
    if (other.cells_ != cells_) throw InvalidArgument("report: merging different cell lists");
    for (const auto& [rep, record] : other.records_) add(rep, record);
}

ExperimentReport ReportAccumulator::finalize(int base_signals, Reading reading) const {
    ExperimentReport report;
    report.base_signals = base_signals;
    report.reading = reading;
    report.reps = completed();
    report.cells.resize(cells_.size());
    report.train_seconds.assign(cells_.size(), 0.0);
    const double n = static_cast<double>(records_.size());

    for (std::size_t c = 0; c < cells_.size(); ++c) {
        CellSummary& summary = report.cells[c];
        summary.cell = cells_[c];
        summary.reps = completed();
        double fpr = 0.0;
        std::array<double, kNumFaults> tpr{};
        std::array<double, kNumFaults> mag{};
        std::array<int, kNumFaults> mag_count{};
        double seconds = 0.0;
        for (const auto& [rep, record] : records_) {
            const RepOutcome& o = record.outcomes[c];
            summary.per_rep.push_back(o);
            fpr += o.fpr;
            for (int f = 0; f < kNumFaults; ++f) {
                tpr[f] += o.tpr[f];
                if (!std::isnan(o.magnification[f])) {
                    mag[f] += o.magnification[f];
                    ++mag_count[f];
                }
            }
            seconds += record.train_seconds[c];
        }
        double acc = 0.0;
        for (int f = 0; f < kNumFaults; ++f) {
            summary.faults[f] = n > 0 ? rates_from(tpr[f] / n, fpr / n) : Rates{};
            summary.magnification[f] = mag_count[f] > 0
                                           ? mag[f] / mag_count[f]
                                           : std::numeric_limits<double>::quiet_NaN();
            acc += summary.faults[f].accuracy;
        }
        summary.mean_accuracy = acc / kNumFaults;
        report.train_seconds[c] = n > 0 ? seconds / n : 0.0;
    }
    return report;
}

std::vector<Cell> sweep_cells(const SweepOptions& options) {
    std::vector<Cell> cells;
    for (const auto& family : options.families) {
        const auto more = enumerate_cells(family.kind, family.grid);
        cells.insert(cells.end(), more.begin(), more.end());
    }
    return cells;
}

namespace {

struct ModelOutputs {
    Vector val;
    Vector fp;
    std::array<Vector, kNumFaults> faults;
    double train_seconds = 0.0;
};

ModelConfig config_for(const Cell& cell, const SweepOptions& options) {
    ModelConfig cfg;
    cfg.kind = cell.kind;
    cfg.helm = options.base;
    cfg.helm.seed = options.seed;
    cfg.helm.top_size = cell.l2;
    cfg.helm.c = cell.c;
    if (cell.kind == ModelKind::helm) {
        cfg.helm.ae_sizes = {cell.l1};
        cfg.helm.lambda = cell.lambda;
    } else {
        cfg.helm.ae_sizes.clear();
    }
    if (cell.kind == ModelKind::pca_elm) cfg.pca_components = cell.pca_components;
    return cfg;
}

}  // namespace

ReportAccumulator::RepRecord run_repetition(const SweepOptions& options,
                                            const std::vector<Cell>& cells, int rep) {
    GeneratorSpec spec = options.spec;
    spec.seed = options.seed;
    RngStream data_rng = dataset_stream(options.seed, static_cast<std::uint64_t>(rep));
    const SyntheticDataset ds = generate(spec, data_rng);
    const Splits splits = render_splits(ds);

    // Models are trained once per training cell and shared across gammas.
    std::vector<std::size_t> training_of(cells.size());
    std::vector<std::size_t> training_cells;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::size_t t = 0;
        while (t < training_cells.size() && !cells[training_cells[t]].same_training(cells[i])) ++t;
        if (t == training_cells.size()) training_cells.push_back(i);
        training_of[i] = t;
    }

    std::vector<ModelOutputs> outputs(training_cells.size());
    for (std::size_t t = 0; t < training_cells.size(); ++t) {
        const Cell& cell = cells[training_cells[t]];
        const ModelConfig cfg = config_for(cell, options);
        const auto start = std::chrono::steady_clock::now();
        const Ensemble ensemble = train_ensemble(
            splits.train, cfg, model_stream(options.seed, static_cast<std::uint64_t>(rep), cell.kind));
        const auto stop = std::chrono::steady_clock::now();
        ModelOutputs& out = outputs[t];
        out.train_seconds = std::chrono::duration<double>(stop - start).count();
        out.val = run_ensemble(ensemble, splits.val);
        out.fp = run_ensemble(ensemble, splits.fp_test);
        for (int f = 0; f < kNumFaults; ++f) {
            out.faults[f] = run_ensemble(ensemble, splits.fault_tests[f]);
        }
    }

    ReportAccumulator::RepRecord record;
    record.outcomes.resize(cells.size());
    record.train_seconds.resize(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const ModelOutputs& out = outputs[training_of[i]];
        const DetectorConfig det = calibrate(out.val, cells[i].gamma, options.p);
        RepOutcome& o = record.outcomes[i];
        o.fpr = flag_rate(decide(out.fp, det));
        for (int f = 0; f < kNumFaults; ++f) {
            const auto detections = decide(out.faults[f], det);
            o.tpr[f] = flag_rate(detections);
            o.magnification[f] = mean_true_positive_magnification(detections)
                                     .value_or(std::numeric_limits<double>::quiet_NaN());
        }
        record.train_seconds[i] = out.train_seconds;
    }
    return record;
}

ExperimentReport grid_sweep(const SweepOptions& options) {
    if (options.reps < 1) throw InvalidArgument("sweep: reps must be >= 1");
    if (options.families.empty()) throw InvalidArgument("sweep: no model family selected");
    options.base.validate();
    const std::vector<Cell> cells = sweep_cells(options);
    auto stopped = [&] { return options.stop && options.stop->load(); };

    ReportAccumulator total(cells);
    const int jobs = std::max(1, std::min(options.jobs, options.reps));
    if (jobs == 1) {
        for (int rep = 0; rep < options.reps && !stopped(); ++rep) {
            total.add(rep, run_repetition(options, cells, rep));
        }
    } else {
        std::atomic<int> next{0};
        std::vector<ReportAccumulator> partial(static_cast<std::size_t>(jobs),
                                               ReportAccumulator(cells));
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (int rep = next++; rep < options.reps && !stopped(); rep = next++) {
                        partial[static_cast<std::size_t>(w)].add(
                            rep, run_repetition(options, cells, rep));
                    }
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : workers) t.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
        for (const auto& p : partial) total.merge(p);
    }
    return total.finalize(options.spec.base_signals, options.spec.reading);
}

std::vector<SweepPoint> gamma_sweep(const ExperimentReport& report) {
    std::vector<ModelKind> kinds;
    for (const auto& s : report.cells) {
        if (std::find(kinds.begin(), kinds.end(), s.cell.kind) == kinds.end()) {
            kinds.push_back(s.cell.kind);
        }
    }
    std::vector<SweepPoint> points;
    for (const auto kind : kinds) {
        const auto best = report.best_average(kind);
        if (!best) continue;
        const Cell& anchor = report.cells[*best].cell;
        std::vector<SweepPoint> family;
        for (const auto& s : report.cells) {
            if (!s.cell.same_training(anchor)) continue;
            double tpr = 0.0;
            for (const auto& r : s.faults) tpr += r.tpr;
            family.push_back({kind, s.cell.gamma, tpr / kNumFaults, s.faults[0].fpr});
        }
        std::stable_sort(family.begin(), family.end(),
                         [](const auto& a, const auto& b) { return a.gamma < b.gamma; });
        points.insert(points.end(), family.begin(), family.end());
    }
    return points;
}

namespace {

constexpr const char* kReportHeader =
    "model,n,reading,gamma,l1,l2,lambda,c,pca_components,fault,reps,tpr,fpr,tnr,fnr,accuracy,"
    "precision,f1,magnification,mean_accuracy";

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
    out << kReportHeader << '\n';
    for (const auto& s : report.cells) {
        for (int f = 0; f < kNumFaults; ++f) {
            const Rates& r = s.faults[f];
            out << to_string(s.cell.kind) << ',' << report.base_signals << ','
                << to_string(report.reading) << ',' << format_double(s.cell.gamma) << ','
                << s.cell.l1 << ',' << s.cell.l2 << ',' << format_double(s.cell.lambda) << ','
                << format_double(s.cell.c) << ',' << s.cell.pca_components << ',' << (f + 1)
                << ',' << s.reps << ',' << format_double(r.tpr) << ',' << format_double(r.fpr)
                << ',' << format_double(r.tnr) << ',' << format_double(r.fnr) << ','
                << format_double(r.accuracy) << ',' << format_double(r.precision) << ','
                << format_double(r.f1) << ',' << format_double(s.magnification[f]) << ','
                << format_double(s.mean_accuracy) << '\n';
        }
    }
}

void write_report_csv(const std::filesystem::path& path, const ExperimentReport& report) {
    auto out = open_for_write(path);
    write_report_csv(out, report);
}

ExperimentReport read_report_csv(std::istream& in) {
    std::string line;
    std::size_t row = 1;
    if (!std::getline(in, line)) throw ParseError("report: empty input", 0, 0);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kReportHeader) throw ParseError("report: unexpected header", 1, 0);

    ExperimentReport report;
    bool first = true;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_row(line);
        if (f.size() != 20) {
            throw ParseError("report: row " + std::to_string(row) + " has " +
                                 std::to_string(f.size()) + " fields, expected 20",
                             row, 0);
        }
        auto real = [&](std::size_t col) {
            double v = 0.0;
            if (!parse_double(f[col], v)) {
                throw ParseError("report: row " + std::to_string(row) + ", column " +
                                     std::to_string(col + 1) + ": bad number '" + f[col] + "'",
                                 row, col + 1);
            }
            return v;
        };
        auto integer = [&](std::size_t col) {
            const double v = real(col);
            return static_cast<long long>(v);
        };
        Cell cell{model_kind_from_string(f[0]), real(3),  integer(4), integer(5),
                  real(6),                      real(7),  integer(8)};
        const int fault = static_cast<int>(integer(9));
        if (fault < 1 || fault > kNumFaults) throw ParseError("report: bad fault index", row, 10);
        if (first) {
            report.base_signals = static_cast<int>(integer(1));
            report.reading = reading_from_string(f[2]);
            report.reps = static_cast<int>(integer(10));
            first = false;
        }
        if (fault == 1) {
            CellSummary s;
            s.cell = cell;
            s.reps = static_cast<int>(integer(10));
            s.mean_accuracy = real(19);
            report.cells.push_back(s);
            report.train_seconds.push_back(0.0);
        } else if (report.cells.empty() || !(report.cells.back().cell == cell)) {
            throw ParseError("report: fault rows of a cell must be consecutive", row, 10);
        }
        Rates& r = report.cells.back().faults[static_cast<std::size_t>(fault - 1)];
        r.tpr = real(11);
        r.fpr = real(12);
        r.tnr = real(13);
        r.fnr = real(14);
        r.accuracy = real(15);
        r.precision = real(16);
        r.f1 = real(17);
        report.cells.back().magnification[static_cast<std::size_t>(fault - 1)] = real(18);
    }
    return report;
}

ExperimentReport read_report_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return read_report_csv(in);
}

void write_timings_csv(const std::filesystem::path& path, const ExperimentReport& report) {
    auto out = open_for_write(path);
    out << "model,gamma,l1,l2,lambda,c,pca_components,train_seconds\n";
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
        const Cell& c = report.cells[i].cell;
        out << to_string(c.kind) << ',' << format_double(c.gamma) << ',' << c.l1 << ',' << c.l2
            << ',' << format_double(c.lambda) << ',' << format_double(c.c) << ','
            << c.pca_components << ',' << format_double(report.train_seconds[i]) << '\n';
    }
}

void write_gamma_sweep_csv(const std::filesystem::path& path,
                           const std::vector<SweepPoint>& points) {
    auto out = open_for_write(path);
    out << "model,gamma,tpr,fpr\n";
    for (const auto& p : points) {
        out << to_string(p.kind) << ',' << format_double(p.gamma) << ',' << format_double(p.tpr)
            << ',' << format_double(p.fpr) << '\n';
    }
}

namespace {

long percent(double rate) { return static_cast<long>(std::floor(rate * 100.0 + 0.5)); }

std::string acc_cell(const Rates& r) {
    std::ostringstream ss;
    ss << percent(r.accuracy) << " (" << percent(r.tpr) << '/' << percent(r.fpr) << ')';
    return ss.str();
}

std::string mag_cell(double mag) {
    if (std::isnan(mag)) return "-";
    std::ostringstream ss;
    ss << std::setprecision(mag < 10.0 ? 2 : 3) << mag;
    return ss.str();
}

std::string hyper(const Cell& c) {
    std::ostringstream ss;
    ss << "gamma=" << c.gamma;
    if (c.kind == ModelKind::helm) ss << " L1=" << c.l1;
    ss << " L2=" << c.l2;
    if (c.kind == ModelKind::helm) ss << " lambda=" << c.lambda;
    ss << " C=" << c.c;
    if (c.kind == ModelKind::pca_elm) ss << " L_PCA=" << c.pca_components;
    return ss.str();
}

}  // namespace

void print_report(std::ostream& out, const ExperimentReport& report) {
    std::vector<ModelKind> kinds;
    for (const auto& s : report.cells) {
        if (std::find(kinds.begin(), kinds.end(), s.cell.kind) == kinds.end()) {
            kinds.push_back(s.cell.kind);
        }
    }
    out << "f=" << to_string(report.reading) << "  n=" << report.base_signals
        << "  repetitions=" << report.reps << "\n\n";

    out << "Best cell per fault: Acc (TP/FP)\n";
    out << std::left << std::setw(9) << "model";
    for (int f = 1; f <= kNumFaults; ++f) out << std::setw(16) << ("fault " + std::to_string(f));
    out << '\n';
    for (const auto kind : kinds) {
        out << std::setw(9) << to_string(kind);
        for (int f = 0; f < kNumFaults; ++f) {
            const auto best = report.best_for_fault(kind, f);
            out << std::setw(16) << acc_cell(report.cells[*best].faults[f]);
        }
        out << '\n';
    }

    out << "\nBest average accuracy: Acc (TP/FP) Mag\n";
    out << std::setw(9) << "model" << std::setw(6) << "Acc";
    for (int f = 1; f <= kNumFaults; ++f) out << std::setw(22) << ("fault " + std::to_string(f));
    out << "hyperparameters, time (s)\n";
    for (const auto kind : kinds) {
        const auto best = *report.best_average(kind);
        const CellSummary& s = report.cells[best];
        out << std::setw(9) << to_string(kind) << std::setw(6) << percent(s.mean_accuracy);
        for (int f = 0; f < kNumFaults; ++f) {
            out << std::setw(22) << (acc_cell(s.faults[f]) + " " + mag_cell(s.magnification[f]));
        }
        out << hyper(s.cell) << ", " << std::setprecision(3) << report.train_seconds[best]
            << '\n';
    }
    out << std::right;
}

}  // namespace helm
