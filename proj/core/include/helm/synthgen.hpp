#pragma once

#include "helm/core_types.hpp"

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace helm {

enum class Reading { identity, log };

std::string_view to_string(Reading reading);
Reading reading_from_string(std::string_view name);

/// Lower bound applied before the logarithmic reading.
inline constexpr double kLogReadingFloor = 1e-3;

/// Synthetic condition-monitoring scenario.
struct GeneratorSpec {
    Eigen::Index samples = 14000;
    Eigen::Index sensors = 200;
    int base_signals = 5;
    Reading reading = Reading::identity;
    std::uint64_t seed = 0;
    /// With false the same parameters are drawn but no fault is injected.
    bool inject_faults = true;

    void validate() const;
};

enum class Segment : std::uint8_t { train, val, fp, fault1, fault2, fault3, fault4, fault5 };

inline constexpr std::array<Segment, 8> kAllSegments{
    Segment::train, Segment::val,    Segment::fp,     Segment::fault1,
    Segment::fault2, Segment::fault3, Segment::fault4, Segment::fault5};

inline constexpr int kNumFaults = 5;
inline constexpr Eigen::Index kFaultSensorCount = 10;

std::string_view to_string(Segment segment);

/// Half-open row interval [begin, end).
struct RowRange {
    Eigen::Index begin = 0;
    Eigen::Index end = 0;

    Eigen::Index size() const { return end - begin; }
    bool contains(Eigen::Index row) const { return row >= begin && row < end; }
};

/// Samples per layout unit: the layout is 7 training units, then one unit
/// each for validation, false-positive test and the five faults.
inline constexpr Eigen::Index kLayoutUnits = 14;

/// Row interval of `segment`. With the default 14000 samples this is
/// train [0,7000), val [7000,8000), fp [8000,9000), fault f at
/// [8000 + 1000 f, 9000 + 1000 f).
RowRange segment_rows(Segment segment, Eigen::Index samples = 14000);

/// Everything drawn while generating a dataset.
struct Provenance {
    GeneratorSpec spec;
    std::uint64_t stream_id = 0;
    Vector base_gain;        // alpha^Base, n
    Vector base_offset;      // epsilon^Base, n
    double fault_gain = 0;   // alpha_f
    double fault_offset = 0; // epsilon_f
    Vector sensor_gain;      // alpha_s, D
    std::vector<int> sensor_source;     // b_s, 0-based base signal index
    Vector noise_std;        // per sensor
    std::vector<int> fault_sensors;     // i_f, 0-based, with repetitions as drawn
    Matrix base;             // K x n, after fault injection
};

struct SyntheticDataset {
    SensorMatrix x;          // K x D
    std::vector<Segment> segments;  // one per row
    Provenance provenance;
};

/// Renders the scenario: latent base signals, five injected faults, sensor
/// readings through identity or log(max(v, 1e-3)) plus Gaussian noise of
/// 1% of each sensor's healthy training amplitude.
SyntheticDataset generate(const GeneratorSpec& spec, RngStream& rng);

/// Stream used for the dataset of benchmark repetition `rep`.
RngStream dataset_stream(std::uint64_t seed, std::uint64_t rep);

/// Noise-free readings f(alpha_s * base[:, b_s]) from the provenance; the
/// fault on individual sensors is not applied.
Matrix clean_readings(const Provenance& provenance);

/// Fixed views over a dataset.
struct Splits {
    MatrixRef train;
    MatrixRef val;
    MatrixRef fp_test;
    std::array<MatrixRef, kNumFaults> fault_tests;
};

/// Views into `ds.x`; the dataset must outlive the result.
Splits render_splits(const SyntheticDataset& ds);

}  // namespace helm
