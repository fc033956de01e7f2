#pragma once

#include "helm/ensemble.hpp"
#include "helm/metrics.hpp"
#include "helm/synthgen.hpp"

#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace helm {

/// Threshold scales of the sensitivity sweep.
inline constexpr std::array<double, 7> kPaperGammas{1.1, 1.2, 1.5, 1.7, 2.0, 2.5, 3.0};

/// Hyperparameter lattice for one model family. Axes that do not apply to
/// the family are ignored (L1 and lambda for ELM; L1, lambda for PCA-ELM;
/// PCA components for HELM and ELM).
struct Grid {
    std::vector<double> gammas{1.5};
    std::vector<Eigen::Index> l1{20};
    std::vector<Eigen::Index> l2{100};
    std::vector<double> lambdas{1e-2};
    std::vector<double> cs{1e-5};
    std::vector<Eigen::Index> pca_components{15};

    /// The full search lattice used for tuning.
    static Grid paper();
    /// Best-average cell of `kind` with every gamma of the sweep.
    static Grid winning(ModelKind kind);

    void validate() const;
};

/// One point of the lattice. Unused axes hold 0.
struct Cell {
    ModelKind kind = ModelKind::helm;
    double gamma = 0;
    Eigen::Index l1 = 0;
    Eigen::Index l2 = 0;
    double lambda = 0;
    double c = 0;
    Eigen::Index pca_components = 0;

    /// Same trained model, possibly different gamma.
    bool same_training(const Cell& other) const;
    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Cells of `grid` for `kind`, in lexicographic order over
/// (gamma, L1, L2, lambda, C, L_PCA).
std::vector<Cell> enumerate_cells(ModelKind kind, const Grid& grid);

/// Raw outcome of one cell in one repetition.
struct RepOutcome {
    double fpr = 0.0;
    std::array<double, kNumFaults> tpr{};
    /// Mean magnification over true positives; NaN when a fault has none.
    std::array<double, kNumFaults> magnification{};
};

struct CellSummary {
    Cell cell;
    int reps = 0;
    std::array<Rates, kNumFaults> faults{};
    /// Mean over repetitions that had true positives; NaN if none had.
    std::array<double, kNumFaults> magnification{};
    double mean_accuracy = 0.0;  // over the five faults
    std::vector<RepOutcome> per_rep;  // in repetition order; not serialized
};

struct ExperimentReport {
    int base_signals = 5;
    Reading reading = Reading::identity;
    int reps = 0;
    std::vector<CellSummary> cells;
    /// Mean wall-clock seconds to train one ensemble, per training cell.
    std::vector<double> train_seconds;  // parallel to `cells`

    /// Argmax of mean accuracy among cells of `kind` (first wins ties).
    std::optional<std::size_t> best_average(ModelKind kind) const;
    /// Argmax of accuracy on `fault` (0-based) among cells of `kind`.
    std::optional<std::size_t> best_for_fault(ModelKind kind, int fault) const;
};

/// Everything a sweep needs.
struct SweepOptions {
    struct Family {
        ModelKind kind;
        Grid grid;
    };
    std::vector<Family> families;
    GeneratorSpec spec;
    int reps = 20;
    std::uint64_t seed = 0;
    double p = kDefaultPercentile;
    HelmConfig base;      // ensemble size and solver settings
    int jobs = 1;
    /// Checked between repetitions; set to stop early with partial results.
    const std::atomic<bool>* stop = nullptr;
};

/// Collects repetition outcomes. Merging is associative and commutative:
/// outcomes are keyed by repetition index and reduced in index order.
class ReportAccumulator {
public:
    struct RepRecord {
        std::vector<RepOutcome> outcomes;  // parallel to the cell list
        std::vector<double> train_seconds;
    };

    explicit ReportAccumulator(std::vector<Cell> cells);

    void add(int rep, RepRecord record);
    void merge(const ReportAccumulator& other);
    int completed() const { return static_cast<int>(records_.size()); }
    ExperimentReport finalize(int base_signals, Reading reading) const;

private:
    std::vector<Cell> cells_;
    std::vector<std::pair<int, RepRecord>> records_;  // sorted by rep
};

/// Outcomes of every cell for one repetition (fresh dataset, train,
/// calibrate, score).
ReportAccumulator::RepRecord run_repetition(const SweepOptions& options,
                                            const std::vector<Cell>& cells, int rep);

/// Cells of all families of `options`, in family order.
std::vector<Cell> sweep_cells(const SweepOptions& options);

/// Runs every repetition and aggregates per-cell means.
ExperimentReport grid_sweep(const SweepOptions& options);

/// One point of the threshold-sensitivity (ROC style) curve.
struct SweepPoint {
    ModelKind kind;
    double gamma;
    double tpr;  // mean over the five faults
    double fpr;
};

/// For each family: its best-average training cell across every gamma.
std::vector<SweepPoint> gamma_sweep(const ExperimentReport& report);

/// One row per cell and fault; values use shortest round-trip formatting.
void write_report_csv(std::ostream& out, const ExperimentReport& report);
void write_report_csv(const std::filesystem::path& path, const ExperimentReport& report);

/// Reads a report written by write_report_csv (per-repetition data is not
/// stored and comes back empty).
ExperimentReport read_report_csv(std::istream& in);
ExperimentReport read_report_csv(const std::filesystem::path& path);

/// Training time per cell. Kept apart from the report so the report stays
/// bit-reproducible.
void write_timings_csv(const std::filesystem::path& path, const ExperimentReport& report);

void write_gamma_sweep_csv(const std::filesystem::path& path,
                           const std::vector<SweepPoint>& points);

/// Human-readable tables: best cell per fault, then best average cell, as
/// "Acc (TP/FP)" with magnification.
void print_report(std::ostream& out, const ExperimentReport& report);

}  // namespace helm
